#include "vvlab/truncation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "vvlab/norms.hpp"
#include "vvlab/quadrature.hpp"

namespace vvlab {

using std::numbers::pi;

namespace {

// d_j (perp-grad phi)_i from the cutoff Hessian
Mat2 perp_rows(const Mat2& H) {
    Mat2 P;
    P.m[0][0] = -H.m[1][0];
    P.m[0][1] = -H.m[1][1];
    P.m[1][0] = H.m[0][0];
    P.m[1][1] = H.m[0][1];
    return P;
}

}  // namespace

TruncatedField2D::TruncatedField2D(std::shared_ptr<const Flow2D> flow,
                                   std::shared_ptr<const CutoffFunction> cutoff,
                                   double psi_shift)
    : flow_(std::move(flow)), cutoff_(std::move(cutoff)), shift_(psi_shift) {}

Vec2 TruncatedField2D::value(Vec2 x) const { return phi_u_term(x) + stream_term(x); }

Vec2 TruncatedField2D::phi_u_term(Vec2 x) const {
    return cutoff_->value(x) * flow_->velocity(x);
}

Vec2 TruncatedField2D::stream_term(Vec2 x) const {
    const Vec2 g = cutoff_->grad(x);
    if (g.x == 0.0 && g.y == 0.0) return {0, 0};
    return (flow_->psi(x) - shift_) * g.perp();
}

Mat2 TruncatedField2D::gradient(Vec2 x) const {
    const double phi = cutoff_->value(x);
    const Vec2 g = cutoff_->grad(x);
    const Mat2 H = cutoff_->hess(x);
    const Vec2 u = flow_->velocity(x);
    const Mat2 du = flow_->velocity_grad(x);
    const Vec2 grad_psi{u.y, -u.x};  // u = perp-grad psi
    Mat2 out = du * phi + outer(u, g) + outer(g.perp(), grad_psi) +
               perp_rows(H) * (flow_->psi(x) - shift_);
    return out;
}

Vec2 TruncatedField2D::diff(Vec2 x) const {
    const double phi = cutoff_->value(x);
    if (phi == 1.0) return {0, 0};  // off-collar: T_R u = u exactly
    return (phi - 1.0) * flow_->velocity(x) + stream_term(x);
}

Mat2 TruncatedField2D::grad_diff(Vec2 x) const {
    const double phi = cutoff_->value(x);
    const Vec2 g = cutoff_->grad(x);
    if (phi == 1.0 && g.x == 0.0 && g.y == 0.0) return {};
    const Mat2 H = cutoff_->hess(x);
    const Vec2 u = flow_->velocity(x);
    const Mat2 du = flow_->velocity_grad(x);
    const Vec2 grad_psi{u.y, -u.x};
    return du * (phi - 1.0) + outer(u, g) + outer(g.perp(), grad_psi) +
           perp_rows(H) * (flow_->psi(x) - shift_);
}

double TruncatedField2D::divergence_fd(Vec2 x, double h) const {
    const Vec2 xp{x.x + h, x.y}, xm{x.x - h, x.y};
    const Vec2 yp{x.x, x.y + h}, ym{x.x, x.y - h};
    return (value(xp).x - value(xm).x + value(yp).y - value(ym).y) / (2 * h);
}

bool TruncatedField2D::radial() const {
    return cutoff_->domain().is_disk() && flow_->single_centered();
}

void TruncatedField2D::phi_rho(double rho, double& f, double& d1, double& d2,
                               double& d3) const {
    double g0, g1, g2, g3;
    cutoff_->radial_derivs(cutoff_->domain().R - rho, g0, g1, g2, g3);
    f = g0;
    d1 = -g1;   // d/drho = -d/dr
    d2 = g2;
    d3 = -g3;
}

double TruncatedField2D::w_radial(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    return f * pr.u_theta(rho) + d1 * (pr.psi(rho) - shift_);
}

double TruncatedField2D::w_radial_d(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    return f * pr.u_theta_d(rho) + 2 * d1 * pr.u_theta(rho) + d2 * (pr.psi(rho) - shift_);
}

double TruncatedField2D::diff_radial(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    return (f - 1.0) * pr.u_theta(rho) + d1 * (pr.psi(rho) - shift_);
}

double TruncatedField2D::diff_radial_d(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    return (f - 1.0) * pr.u_theta_d(rho) + 2 * d1 * pr.u_theta(rho) +
           d2 * (pr.psi(rho) - shift_);
}

double TruncatedField2D::laplacian_radial(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    const double psi = pr.psi(rho) - shift_;
    const double w = f * pr.u_theta(rho) + d1 * psi;
    const double wd = f * pr.u_theta_d(rho) + 2 * d1 * pr.u_theta(rho) + d2 * psi;
    const double wdd = f * pr.u_theta_dd(rho) + 3 * d1 * pr.u_theta_d(rho) +
                       3 * d2 * pr.u_theta(rho) + d3 * psi;
    if (rho < 1e-12) return 0.0;
    return wdd + wd / rho - w / (rho * rho);
}

double TruncatedField2D::stream_term_radial(double rho) const {
    const auto& pr = *flow_->primary().profile;
    double f, d1, d2, d3;
    phi_rho(rho, f, d1, d2, d3);
    return d1 * (pr.psi(rho) - shift_);
}

TruncatedField2D truncate_2d(std::shared_ptr<const Flow2D> flow,
                             std::shared_ptr<const CutoffFunction> cutoff,
                             std::optional<StreamNormalization> normalization) {
    if (cutoff->variant() != CutoffVariant::collar2d)
        throw std::invalid_argument("truncate_2d: 2D collar cutoff required");
    const double R = cutoff->domain().R;
    const double m = flow->mass();
    const double R0 = flow->support_radius();

    // the collar must clear the vorticity support
    const auto& chart = cutoff->chart();
    double min_collar = 1e300;
    for (int i = 0; i < 256; ++i) {
        const double s = chart.boundary_length() * i / 256.0;
        min_collar = std::min(min_collar,
                              (chart.boundary_point(s) + chart.width() * chart.inward_normal(s)).norm());
    }
    if (min_collar < R0)
        throw std::invalid_argument("truncate_2d: collar intersects the vorticity support; R too small");

    // stream/velocity consistency probes: u = perp-grad psi
    for (int i = 0; i < 8; ++i) {
        const double ang = 2 * pi * i / 8.0 + 0.37;
        for (double rho : {0.5 * R0, R0 + 0.5 * (min_collar - R0), 0.5 * (min_collar + R)}) {
            const Vec2 x{rho * std::cos(ang), rho * std::sin(ang)};
            const Vec2 g = flow->psi_grad(x);
            const Vec2 u = flow->velocity(x);
            const double scale = std::max(1e-12, u.norm());
            if ((Vec2{-g.y, g.x} - u).norm() > 1e-10 * std::max(1.0, scale))
                throw std::invalid_argument("truncate_2d: stream function inconsistent with velocity");
        }
    }

    const bool has_mass = std::abs(m) > 1e-12;
    StreamNormalization norm;
    if (normalization) {
        norm = *normalization;
    } else if (!has_mass) {
        norm = StreamNormalization::kernel;
    } else if (cutoff->domain().is_disk()) {
        norm = StreamNormalization::boundary_zero;
    } else {
        throw std::invalid_argument(
            "truncate_2d: m != 0 on a non-disk domain has no vanishing normalization; "
            "pass mean_zero_collar explicitly to reproduce the failure mode");
    }

    double shift = 0.0;
    switch (norm) {
        case StreamNormalization::kernel:
            shift = 0.0;
            break;
        case StreamNormalization::boundary_zero:
            // psi_sigma = (m/2pi) log|x| on Gamma_R
            shift = m / (2 * pi) * std::log(R);
            break;
        case StreamNormalization::mean_zero_collar: {
            // collar mean of psi_sigma = (m/2pi) log|x| (collar clears B_{R0})
            const double w = chart.width();
            double num = 0, den = 0;
            auto sedges = make_panels(0.0, chart.boundary_length(), {}, 256);
            auto redges = make_panels(0.0, w, {}, 8);
            auto gx = gauss_nodes(8);
            auto gw = gauss_weights(8);
            for (size_t p = 0; p + 1 < sedges.size(); ++p) {
                const double sm = 0.5 * (sedges[p] + sedges[p + 1]);
                const double sh = 0.5 * (sedges[p + 1] - sedges[p]);
                for (size_t i = 0; i < gx.size(); ++i) {
                    const double s = sm + sh * gx[i];
                    const Vec2 gamma = chart.boundary_point(s);
                    const Vec2 nu = chart.inward_normal(s);
                    const double kap = chart.curvature(s);
                    for (size_t q = 0; q + 1 < redges.size(); ++q) {
                        const double rm = 0.5 * (redges[q] + redges[q + 1]);
                        const double rh = 0.5 * (redges[q + 1] - redges[q]);
                        for (size_t j = 0; j < gx.size(); ++j) {
                            const double r = rm + rh * gx[j];
                            const double J = 1.0 - kap * r;
                            const double wq = gw[i] * sh * gw[j] * rh * J;
                            num += wq * m / (2 * pi) * std::log((gamma + r * nu).norm());
                            den += wq;
                        }
                    }
                }
            }
            shift = num / den;
            break;
        }
    }
    return TruncatedField2D(std::move(flow), std::move(cutoff), shift);
}

// ---------------------------------------------------------------------------
// 3D truncation

TruncatedField3D::TruncatedField3D(std::shared_ptr<const HillVortex3D> flow,
                                   std::shared_ptr<const CutoffFunction> cutoff)
    : flow_(std::move(flow)), cutoff_(std::move(cutoff)) {}

Vec3 TruncatedField3D::value(Vec3 x) const { return phi_u_term(x) + stream_term(x); }

Vec3 TruncatedField3D::phi_u_term(Vec3 x) const {
    return cutoff_->value3(x) * flow_->velocity(x);
}

Vec3 TruncatedField3D::stream_term(Vec3 x) const {
    const Vec3 g = cutoff_->grad3(x);
    if (g.x == 0 && g.y == 0 && g.z == 0) return {0, 0, 0};
    return g.cross(flow_->stream(x));
}

Mat3 TruncatedField3D::gradient(Vec3 x) const {
    const double phi = cutoff_->value3(x);
    const Vec3 g = cutoff_->grad3(x);
    const Mat3 H = cutoff_->hess3(x);
    const Vec3 u = flow_->velocity(x);
    const Mat3 du = flow_->velocity_grad(x);
    const Vec3 Psi = flow_->stream(x);
    const Mat3 dPsi = flow_->stream_partial(x);
    Mat3 out;
    for (int k = 0; k < 3; ++k) {
        const Vec3 du_k{du.m[0][k], du.m[1][k], du.m[2][k]};
        const Vec3 Hk{H.m[0][k], H.m[1][k], H.m[2][k]};
        const Vec3 dPsi_k{dPsi.m[0][k], dPsi.m[1][k], dPsi.m[2][k]};
        const double gk = k == 0 ? g.x : (k == 1 ? g.y : g.z);
        const Vec3 col = phi * du_k + gk * u + Hk.cross(Psi) + g.cross(dPsi_k);
        out.m[0][k] = col.x;
        out.m[1][k] = col.y;
        out.m[2][k] = col.z;
    }
    return out;
}

Vec3 TruncatedField3D::diff(Vec3 x) const {
    const double phi = cutoff_->value3(x);
    if (phi == 1.0) return {0, 0, 0};
    return (phi - 1.0) * flow_->velocity(x) + stream_term(x);
}

Mat3 TruncatedField3D::grad_diff(Vec3 x) const {
    const double phi = cutoff_->value3(x);
    const Vec3 g = cutoff_->grad3(x);
    if (phi == 1.0 && g.x == 0 && g.y == 0 && g.z == 0) return {};
    Mat3 full = gradient(x);
    return full - flow_->velocity_grad(x);
}

TruncatedField3D truncate_3d(std::shared_ptr<const HillVortex3D> flow,
                             std::shared_ptr<const CutoffFunction> cutoff) {
    if (cutoff->variant() != CutoffVariant::dilation3d)
        throw std::invalid_argument("truncate_3d: 3D dilation cutoff on the ball required");
    const double R = cutoff->domain().R;
    if (R * (1.0 - cutoff->chart().delta1()) < flow->radius())
        throw std::invalid_argument("truncate_3d: collar intersects the vorticity support");
    return TruncatedField3D(std::move(flow), std::move(cutoff));
}

// ---------------------------------------------------------------------------
// W_R on the disk: per-angular-mode Green's-function solve

namespace {

struct ModeValues {
    std::vector<double> psic, psis, dpsic, dpsis;  // per mode 0..K
};

class DiskPoissonModes {
  public:
    DiskPoissonModes(std::shared_ptr<const Flow2D> flow, double R,
                     const ProjectionOptions& opt)
        : flow_(std::move(flow)), R_(R), K_(opt.modes), M_(opt.angular_nodes) {
        auto bp = opt.radial_breakpoints.empty() ? centered_breakpoints(*flow_)
                                                 : opt.radial_breakpoints;
        edges_ = make_panels(0.0, R_, bp, opt.radial_panels);
        const size_t ne = edges_.size();
        Imc_.assign(K_ + 1, std::vector<double>(ne, 0.0));
        Ims_.assign(K_ + 1, std::vector<double>(ne, 0.0));
        Ipc_.assign(K_ + 1, std::vector<double>(ne, 0.0));
        Ips_.assign(K_ + 1, std::vector<double>(ne, 0.0));
        D0c_.assign(ne, 0.0);
        D0s_.assign(ne, 0.0);

        auto gx = gauss_nodes(8);
        auto gw = gauss_weights(8);
        // upward recursion for Im
        for (size_t j = 0; j + 1 < ne; ++j) {
            const double lo = edges_[j], hi = edges_[j + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            std::vector<double> pc(K_ + 1, 0.0), ps(K_ + 1, 0.0);
            for (size_t i = 0; i < gx.size(); ++i) {
                const double s = mid + half * gx[i];
                const auto& [wc, ws] = omega_modes(s);
                const double w = gw[i] * half * s;
                double ratio = s / hi, powk = 1.0;
                for (int k = 0; k <= K_; ++k) {
                    pc[k] += w * powk * wc[k];
                    ps[k] += w * powk * ws[k];
                    powk *= ratio;
                }
            }
            double er = lo / hi, erk = 1.0;
            for (int k = 0; k <= K_; ++k) {
                Imc_[k][j + 1] = erk * Imc_[k][j] + pc[k];
                Ims_[k][j + 1] = erk * Ims_[k][j] + ps[k];
                erk *= er;
            }
        }
        // downward recursion for Ip
        for (size_t jj = ne - 1; jj-- > 0;) {
            const double lo = edges_[jj], hi = edges_[jj + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            std::vector<double> pc(K_ + 1, 0.0), ps(K_ + 1, 0.0);
            for (size_t i = 0; i < gx.size(); ++i) {
                const double s = mid + half * gx[i];
                const auto& [wc, ws] = omega_modes(s);
                const double w = gw[i] * half * s;
                double ratio = lo / s, powk = 1.0;
                for (int k = 0; k <= K_; ++k) {
                    pc[k] += w * powk * wc[k];
                    ps[k] += w * powk * ws[k];
                    powk *= ratio;
                }
            }
            double er = lo / hi, erk = 1.0;
            for (int k = 0; k <= K_; ++k) {
                Ipc_[k][jj] = erk * Ipc_[k][jj + 1] + pc[k];
                Ips_[k][jj] = erk * Ips_[k][jj + 1] + ps[k];
                erk *= er;
            }
        }
        // mode-0 second cumulative D(rho) = int_0^rho A(tau)/tau dtau
        for (size_t j = 0; j + 1 < ne; ++j) {
            const double lo = edges_[j], hi = edges_[j + 1];
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double sc = 0, ss = 0;
            for (size_t i = 0; i < gx.size(); ++i) {
                const double tau = mid + half * gx[i];
                double ac, as;
                A0_at(tau, j, ac, as);
                sc += gw[i] * half * ac / tau;
                ss += gw[i] * half * as / tau;
            }
            D0c_[j + 1] = D0c_[j] + sc;
            D0s_[j + 1] = D0s_[j] + ss;
        }
    }

    double R() const { return R_; }
    int modes() const { return K_; }

    const ModeValues& at_radius(double rho) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(rho);
        if (it != cache_.end()) return it->second;
        ModeValues mv = solve_at(rho);
        return cache_.emplace(rho, std::move(mv)).first->second;
    }

    double psi(Vec2 x) const {
        const double rho = x.norm();
        const double phi = std::atan2(x.y, x.x);
        const auto& mv = at_radius(rho);
        double v = 0;
        const double c1 = std::cos(phi), s1 = std::sin(phi);
        double ck = 1, sk = 0;
        for (int k = 0; k <= K_; ++k) {
            v += mv.psic[k] * ck + mv.psis[k] * sk;
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
        return v;
    }

    Vec2 velocity(Vec2 x) const {  // perp-grad of the solved stream
        const double rho = x.norm();
        if (rho < 1e-12) {
            // on the axis: average of nearby ring values (smooth field)
            Vec2 a = velocity({1e-9 * R_, 0});
            Vec2 b = velocity({-1e-9 * R_, 0});
            return 0.5 * (a + b);
        }
        const double phi = std::atan2(x.y, x.x);
        const auto& mv = at_radius(rho);
        double dpsi_rho = 0, dpsi_phi = 0;
        const double c1 = std::cos(phi), s1 = std::sin(phi);
        double ck = 1, sk = 0;
        for (int k = 0; k <= K_; ++k) {
            dpsi_rho += mv.dpsic[k] * ck + mv.dpsis[k] * sk;
            dpsi_phi += k * (-mv.psic[k] * sk + mv.psis[k] * ck);
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
        const Vec2 rhat{x.x / rho, x.y / rho};
        const Vec2 phat{-rhat.y, rhat.x};
        // perp-grad psi = dpsi/drho phat - (1/rho) dpsi/dphi rhat
        return dpsi_rho * phat - (dpsi_phi / rho) * rhat;
    }

  private:
    std::shared_ptr<const Flow2D> flow_;
    double R_;
    int K_, M_;
    std::vector<double> edges_;
    std::vector<std::vector<double>> Imc_, Ims_, Ipc_, Ips_;
    std::vector<double> D0c_, D0s_;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, ModeValues> cache_;
    mutable std::map<double, std::pair<std::vector<double>, std::vector<double>>> omega_cache_;

    const std::pair<std::vector<double>, std::vector<double>>& omega_modes(double sigma) const {
        auto it = omega_cache_.find(sigma);
        if (it != omega_cache_.end()) return it->second;
        std::vector<double> wc(K_ + 1, 0.0), ws(K_ + 1, 0.0);
        for (int j = 0; j < M_; ++j) {
            const double phi = 2 * pi * j / M_;
            const double om =
                flow_->vorticity({sigma * std::cos(phi), sigma * std::sin(phi)});
            if (om == 0.0) continue;
            const double c1 = std::cos(phi), s1 = std::sin(phi);
            double ck = 1, sk = 0;
            for (int k = 0; k <= K_; ++k) {
                wc[k] += om * ck;
                ws[k] += om * sk;
                const double cn = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = cn;
            }
        }
        for (int k = 0; k <= K_; ++k) {
            const double scale = (k == 0 ? 1.0 : 2.0) / M_;
            wc[k] *= scale;
            ws[k] *= scale;
        }
        return omega_cache_.emplace(sigma, std::make_pair(std::move(wc), std::move(ws)))
            .first->second;
    }

    size_t panel_of(double rho) const {
        for (size_t j = 0; j + 1 < edges_.size(); ++j)
            if (rho <= edges_[j + 1]) return j;
        return edges_.size() - 2;
    }

    // A(tau) = Im_0(tau) for both phases, given the panel index
    void A0_at(double tau, size_t j, double& ac, double& as) const {
        auto gx = gauss_nodes(8);
        auto gw = gauss_weights(8);
        const double lo = edges_[j];
        const double mid = 0.5 * (lo + tau), half = 0.5 * (tau - lo);
        ac = Imc_[0][j];
        as = Ims_[0][j];
        for (size_t i = 0; i < gx.size(); ++i) {
            const double s = mid + half * gx[i];
            const auto& [wc, ws] = omega_modes(s);
            ac += gw[i] * half * s * wc[0];
            as += gw[i] * half * s * ws[0];
        }
    }

    ModeValues solve_at(double rho) const {
        ModeValues mv;
        mv.psic.assign(K_ + 1, 0.0);
        mv.psis.assign(K_ + 1, 0.0);
        mv.dpsic.assign(K_ + 1, 0.0);
        mv.dpsis.assign(K_ + 1, 0.0);
        rho = std::min(rho, R_);
        if (rho <= 0) return mv;

        auto gx = gauss_nodes(8);
        auto gw = gauss_weights(8);
        const size_t j = panel_of(rho);
        const double lo = edges_[j], hi = edges_[j + 1];

        // partial integrals on [lo, rho] and [rho, hi] for all modes
        std::vector<double> pmc(K_ + 1, 0.0), pms(K_ + 1, 0.0);
        std::vector<double> ppc(K_ + 1, 0.0), pps(K_ + 1, 0.0);
        {
            const double mid = 0.5 * (lo + rho), half = 0.5 * (rho - lo);
            if (half > 0)
                for (size_t i = 0; i < gx.size(); ++i) {
                    const double s = mid + half * gx[i];
                    const auto& [wc, ws] = omega_modes(s);
                    const double w = gw[i] * half * s;
                    double ratio = s / rho, powk = 1.0;
                    for (int k = 0; k <= K_; ++k) {
                        pmc[k] += w * powk * wc[k];
                        pms[k] += w * powk * ws[k];
                        powk *= ratio;
                    }
                }
        }
        {
            const double mid = 0.5 * (rho + hi), half = 0.5 * (hi - rho);
            if (half > 0)
                for (size_t i = 0; i < gx.size(); ++i) {
                    const double s = mid + half * gx[i];
                    const auto& [wc, ws] = omega_modes(s);
                    const double w = gw[i] * half * s;
                    double ratio = rho / s, powk = 1.0;
                    for (int k = 0; k <= K_; ++k) {
                        ppc[k] += w * powk * wc[k];
                        pps[k] += w * powk * ws[k];
                        powk *= ratio;
                    }
                }
        }

        // Im(rho) = (lo/rho)^k Im(lo) + partial ; Ip(rho) = (rho/hi)^k Ip(hi) + partial
        const double rm = lo / rho, rp = rho / hi;
        double rmk = 1.0, rpk = 1.0;
        for (int k = 0; k <= K_; ++k) {
            const double Imc = rmk * Imc_[k][j] + pmc[k];
            const double Ims = rmk * Ims_[k][j] + pms[k];
            const double Ipc = rpk * Ipc_[k][j + 1] + ppc[k];
            const double Ips = rpk * Ips_[k][j + 1] + pps[k];
            if (k == 0) {
                // psi_0(rho) = D(rho) - D(R); psi_0' = A(rho)/rho
                double Dc = D0c_[j], Ds = D0s_[j];
                const double mid = 0.5 * (lo + rho), half = 0.5 * (rho - lo);
                if (half > 0)
                    for (size_t i = 0; i < gx.size(); ++i) {
                        const double tau = mid + half * gx[i];
                        double ac, as;
                        A0_at(tau, j, ac, as);
                        Dc += gw[i] * half * ac / tau;
                        Ds += gw[i] * half * as / tau;
                    }
                mv.psic[0] = Dc - D0c_.back();
                mv.psis[0] = Ds - D0s_.back();
                mv.dpsic[0] = Imc / rho;
                mv.dpsis[0] = Ims / rho;
            } else {
                const double ck = Imc_[k].back() / (2.0 * k);  // from Im_k(R)
                const double sk = Ims_[k].back() / (2.0 * k);
                const double prk = std::pow(rho / R_, k);
                mv.psic[k] = -(Ipc + Imc) / (2.0 * k) + ck * prk;
                mv.psis[k] = -(Ips + Ims) / (2.0 * k) + sk * prk;
                mv.dpsic[k] = -(Ipc - Imc) / (2.0 * rho) + ck * k * prk / rho;
                mv.dpsis[k] = -(Ips - Ims) / (2.0 * rho) + sk * k * prk / rho;
            }
            rmk *= rm;
            rpk *= rp;
        }
        return mv;
    }
};

}  // namespace

std::vector<double> centered_breakpoints(const Flow2D& flow) {
    std::vector<double> bp;
    for (const auto& part : flow.parts)
        if (part.center.norm() == 0.0)
            for (double b : part.profile->breakpoints()) bp.push_back(b);
    return bp;
}

ProjectionResult project_W_vorticity(std::shared_ptr<const Flow2D> u, double R,
                                     const ProjectionOptions& opt) {
    if (R <= 0) throw std::invalid_argument("project_W_vorticity: R must be positive");
    auto solver = std::make_shared<DiskPoissonModes>(u, R, opt);
    ProjectionResult res;
    res.route = "vorticity";
    res.W = [solver](Vec2 x) { return solver->velocity(x); };
    auto flow = u;
    res.grad_p = [solver, flow](Vec2 x) { return flow->velocity(x) - solver->velocity(x); };
    res.psi_tilde = [solver](Vec2 x) { return solver->psi(x); };

    // FD Laplacian self-check at a few interior probes
    double worst = 0;
    const double h = 1e-5 * R;
    for (int i = 1; i <= 4; ++i) {
        const Vec2 x{0.13 * R * i, 0.07 * R * i};
        const double lap = (solver->psi({x.x + h, x.y}) + solver->psi({x.x - h, x.y}) +
                            solver->psi({x.x, x.y + h}) + solver->psi({x.x, x.y - h}) -
                            4 * solver->psi(x)) /
                           (h * h);
        worst = std::max(worst, std::abs(lap - u->vorticity(x)));
    }
    res.residual = worst;
    return res;
}

ProjectionResult project_W_helmholtz(std::function<Vec2(Vec2)> velocity, double R,
                                     const ProjectionOptions& opt) {
    if (R <= 0) throw std::invalid_argument("project_W_helmholtz: R must be positive");
    const int M = opt.boundary_nodes;
    const int K = opt.modes;
    // flux Fourier coefficients of u.n on Gamma_R
    std::vector<double> c(K + 1, 0.0), s(K + 1, 0.0);
    for (int j = 0; j < M; ++j) {
        const double phi = 2 * pi * j / M;
        const Vec2 n{std::cos(phi), std::sin(phi)};
        const double flux = velocity(R * n).dot(n);
        const double c1 = n.x, s1 = n.y;
        double ck = 1, sk = 0;
        for (int k = 0; k <= K; ++k) {
            c[k] += flux * ck;
            s[k] += flux * sk;
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
    }
    for (int k = 0; k <= K; ++k) {
        const double scale = (k == 0 ? 1.0 : 2.0) / M;
        c[k] *= scale;
        s[k] *= scale;
    }
    ProjectionResult res;
    res.route = "helmholtz";
    res.mean_flux = c[0];
    if (std::abs(c[0]) > 1e-10)
        throw std::invalid_argument(
            "project_W_helmholtz: nonzero mean flux through Gamma_R (input not divergence-free)");

    auto coeffs = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(c, s);
    auto grad_p = [coeffs, R, K](Vec2 x) {
        const double rho = x.norm();
        if (rho < 1e-300) {
            // grad p at the center: only the k = 1 mode survives
            return Vec2{(*coeffs).first[1], (*coeffs).second[1]};
        }
        const double phi = std::atan2(x.y, x.x);
        const auto& [cc, ss] = *coeffs;
        double dr = 0, dphi = 0;
        const double c1 = std::cos(phi), s1 = std::sin(phi);
        double ck = c1, sk = s1;  // start at k = 1
        double radial = 1.0;      // (rho/R)^{k-1}
        for (int k = 1; k <= K; ++k) {
            dr += radial * (cc[k] * ck + ss[k] * sk);
            dphi += radial * (-cc[k] * sk + ss[k] * ck);
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
            radial *= rho / R;
        }
        const Vec2 rhat{x.x / rho, x.y / rho};
        const Vec2 phat{-rhat.y, rhat.x};
        return dr * rhat + dphi * phat;
    };
    res.grad_p = grad_p;
    res.W = [velocity = std::move(velocity), grad_p](Vec2 x) {
        return velocity(x) - grad_p(x);
    };
    return res;
}

ProjectionResult project_W_helmholtz(std::shared_ptr<const Flow2D> u, double R,
                                     const ProjectionOptions& opt) {
    auto flow = std::move(u);
    return project_W_helmholtz(
        [flow](Vec2 x) { return flow->velocity(x); }, R, opt);
}

double initial_gap_norm(const Flow2D& u, double R, const ProjectionOptions& opt) {
    const int M = opt.boundary_nodes;
    const int K = opt.modes;
    std::vector<double> c(K + 1, 0.0), s(K + 1, 0.0);
    for (int j = 0; j < M; ++j) {
        const double phi = 2 * pi * j / M;
        const Vec2 n{std::cos(phi), std::sin(phi)};
        const double flux = u.velocity(R * n).dot(n);
        const double c1 = n.x, s1 = n.y;
        double ck = 1, sk = 0;
        for (int k = 0; k <= K; ++k) {
            c[k] += flux * ck;
            s[k] += flux * sk;
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
    }
    double f2 = 0;
    for (int k = 1; k <= K; ++k) {
        const double ck = 2.0 / M * c[k], sk = 2.0 / M * s[k];
        f2 += (ck * ck + sk * sk) / k;
    }
    return R * std::sqrt(pi * f2);
}

double euler_identity_residual(const Flow2D& flow, const CutoffFunction& cutoff,
                               int sampled_nodes) {
    if (!flow.single_centered())
        throw std::invalid_argument(
            "euler_identity_residual: steady centered radial flow required (time evolution out of scope)");
    const auto& part = flow.primary();
    const double R = cutoff.domain().R;

    if (sampled_nodes <= 0) {
        // analytic pressure gradient: integrate |phi (u.grad u + grad p)| over Omega_R
        const double alpha = 0.7;
        auto magnitude = [&](double rho) {
            const Vec2 x{rho * std::cos(alpha), rho * std::sin(alpha)};
            const Vec2 u = part.velocity(x);
            const Mat2 du = part.velocity_grad(x);
            const Vec2 conv{du.m[0][0] * u.x + du.m[0][1] * u.y,
                            du.m[1][0] * u.x + du.m[1][1] * u.y};
            const Vec2 gp = part.pressure_grad(x);
            return cutoff.value(x) * (conv + gp).norm();
        };
        auto bp = part.profile->breakpoints();
        QuadratureOptions q;
        q.abs_tol = 1e-14;  // the integrand is an exact cancellation
        return norm_radial_2d(magnitude, 0.0, R, bp, NormKind::L2, q).value;
    }

    // sampled-pressure path: 2nd-order FD of p on a uniform radial grid
    const int n = sampled_nodes;
    const double h = R / n;
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = part.profile->pressure((i + 0.5) * h);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        const double rho = (i + 0.5) * h;
        double dp;
        if (i == 0)
            dp = (-3 * p[0] + 4 * p[1] - p[2]) / (2 * h);
        else if (i == n - 1)
            dp = (3 * p[n - 1] - 4 * p[n - 2] + p[n - 3]) / (2 * h);
        else
            dp = (p[i + 1] - p[i - 1]) / (2 * h);
        const double exact = part.profile->pressure_d(rho);
        const double phi = cutoff.value_chart(R - rho);
        const double m = phi * std::abs(dp - exact);
        acc += 2 * pi * rho * h * m * m;
    }
    return std::sqrt(acc);
}

}  // namespace vvlab
