#include "vvlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vvlab {

using std::numbers::pi;

double GenPoly::eval(double r) const {
    double v = 0;
    for (size_t i = 0; i < c.size(); ++i) {
        const int p = min_pow + static_cast<int>(i);
        if (c[i] != 0.0) v += c[i] * std::pow(r, p);
    }
    return v;
}

GenPoly GenPoly::deriv() const {
    GenPoly d;
    d.min_pow = min_pow - 1;
    d.c.assign(c.size(), 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
        const int p = min_pow + static_cast<int>(i);
        d.c[i] = c[i] * p;
    }
    return d;
}

double GenPoly::coef(int power) const {
    const int i = power - min_pow;
    if (i < 0 || i >= static_cast<int>(c.size())) return 0.0;
    return c[static_cast<size_t>(i)];
}

void GenPoly::add(int power, double value) {
    if (c.empty()) {
        min_pow = power;
        c.push_back(value);
        return;
    }
    if (power < min_pow) {
        c.insert(c.begin(), static_cast<size_t>(min_pow - power), 0.0);
        min_pow = power;
    }
    const int i = power - min_pow;
    if (i >= static_cast<int>(c.size())) c.resize(static_cast<size_t>(i) + 1, 0.0);
    c[static_cast<size_t>(i)] += value;
}

// ---------------------------------------------------------------------------
// RadialVortex2D

namespace {

// u_theta(rho)/rho and its radial derivative, with series handling at rho=0
void swirl_ratio(const RadialProfile& pr, double rho, double& q, double& qd) {
    if (rho < 1e-9) {
        q = 0.5 * pr.omega(0.0);
        qd = pr.omega_d(0.0) / 3.0;
        return;
    }
    const double u = pr.u_theta(rho), ud = pr.u_theta_d(rho);
    q = u / rho;
    qd = ud / rho - u / (rho * rho);
}

}  // namespace

Vec2 RadialVortex2D::velocity(Vec2 x) const {
    const Vec2 z = x - center;
    const double rho = z.norm();
    double q, qd;
    swirl_ratio(*profile, rho, q, qd);
    return q * z.perp();
}

Mat2 RadialVortex2D::velocity_grad(Vec2 x) const {
    const Vec2 z = x - center;
    const double rho = z.norm();
    double q, qd;
    swirl_ratio(*profile, rho, q, qd);
    const double inv = rho > 0 ? 1.0 / rho : 0.0;
    Mat2 g;
    // u1 = -z2 q, u2 = z1 q
    g.m[0][0] = -z.y * qd * z.x * inv;
    g.m[0][1] = -q - z.y * qd * z.y * inv;
    g.m[1][0] = q + z.x * qd * z.x * inv;
    g.m[1][1] = z.x * qd * z.y * inv;
    return g;
}

double RadialVortex2D::vorticity(Vec2 x) const {
    return profile->omega((x - center).norm());
}

double RadialVortex2D::vorticity_grad_norm(Vec2 x) const {
    return std::abs(profile->omega_d((x - center).norm()));
}

double RadialVortex2D::psi(Vec2 x) const { return profile->psi((x - center).norm()); }

Vec2 RadialVortex2D::psi_grad(Vec2 x) const {
    const Vec2 z = x - center;
    const double rho = z.norm();
    if (rho < 1e-300) return {0, 0};
    return (profile->u_theta(rho) / rho) * z;
}

Vec2 RadialVortex2D::pressure_grad(Vec2 x) const {
    const Vec2 z = x - center;
    const double rho = z.norm();
    if (rho < 1e-300) return {0, 0};
    return (profile->pressure_d(rho) / rho) * z;
}

// ---------------------------------------------------------------------------
// Flow2D

double Flow2D::mass() const {
    double m = 0;
    for (const auto& p : parts) m += p.mass();
    return m;
}

double Flow2D::support_radius() const {
    double r = 0;
    for (const auto& p : parts)
        r = std::max(r, p.center.norm() + p.support_radius());
    return r;
}

Vec2 Flow2D::velocity(Vec2 x) const {
    Vec2 u{0, 0};
    for (const auto& p : parts) u += p.velocity(x);
    return u;
}

Mat2 Flow2D::velocity_grad(Vec2 x) const {
    Mat2 g;
    for (const auto& p : parts) g = g + p.velocity_grad(x);
    return g;
}

double Flow2D::vorticity(Vec2 x) const {
    double w = 0;
    for (const auto& p : parts) w += p.vorticity(x);
    return w;
}

double Flow2D::psi(Vec2 x) const {
    double v = 0;
    for (const auto& p : parts) v += p.psi(x);
    return v;
}

Vec2 Flow2D::psi_grad(Vec2 x) const {
    Vec2 g{0, 0};
    for (const auto& p : parts) g += p.psi_grad(x);
    return g;
}

bool Flow2D::single_centered() const {
    return parts.size() == 1 && parts.front().center.norm() == 0.0;
}

double Flow2D::velocity_sup() const {
    if (single_centered()) {
        const auto& pr = *parts.front().profile;
        const double R0 = pr.support_radius();
        double best = 0;
        for (int i = 0; i <= 8192; ++i)
            best = std::max(best, std::abs(pr.u_theta(R0 * i / 8192.0)));
        for (double bp : pr.breakpoints())
            best = std::max(best, std::abs(pr.u_theta(bp)));
        return best;
    }
    // superpositions: dense scan over the support box
    const double L = support_radius();
    double best = 0;
    const int n = 512;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const Vec2 x{-L + 2 * L * i / n, -L + 2 * L * j / n};
            best = std::max(best, velocity(x).norm());
        }
    return best;
}

Flow2D translate(const Flow2D& flow, Vec2 offset) {
    Flow2D out = flow;
    for (auto& p : out.parts) p.center += offset;
    return out;
}

// ---------------------------------------------------------------------------
// HillVortex3D

namespace {

// expand p((r - lo)/d) for polynomial p into a polynomial in r
std::vector<double> compose_affine(const std::vector<double>& p, double lo, double d) {
    std::vector<double> out{0.0};
    // Horner in tau = (r - lo)/d: out = p[n] then out = out*tau + p[k]
    auto mul_tau = [&](std::vector<double> q) {
        // multiply by (r - lo)/d
        std::vector<double> r(q.size() + 1, 0.0);
        for (size_t i = 0; i < q.size(); ++i) {
            r[i + 1] += q[i] / d;
            r[i] -= q[i] * lo / d;
        }
        return r;
    };
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        out = mul_tau(out);
        out[0] += *it;
    }
    return out;
}

}  // namespace

HillVortex3D::HillVortex3D(double a, double U, std::vector<HPiece> h, bool classical)
    : a_(a), U_(U), classical_(classical), h_(std::move(h)) {
    if (a <= 0) throw std::invalid_argument("HillVortex3D: radius must be positive");
    lambda_ = 15.0 * U_ / (2.0 * a_ * a_);

    // cumulative integrals of w(r) = -lambda r^2 h(r):
    //   I1(r) = int_0^r s^2 w ds,   W(r) = int_0^r w/s ds
    // f(r) = (r^2/3)(W(r) - W(a)) - I1(r)/(3 r); beyond a: f = -I1(a)/(3 r)
    edges_.push_back(0.0);
    for (const auto& pc : h_) edges_.push_back(pc.hi);

    std::vector<GenPoly> I1(h_.size()), W(h_.size());
    double I1lo = 0, Wlo = 0;
    for (size_t i = 0; i < h_.size(); ++i) {
        const auto& pc = h_[i];
        GenPoly& i1 = I1[i];
        GenPoly& w = W[i];
        double i1_const = I1lo, w_const = Wlo;
        for (size_t k = 0; k < pc.coef.size(); ++k) {
            const double ck = -lambda_ * pc.coef[k];
            const int kk = static_cast<int>(k);
            i1.add(kk + 5, ck / (kk + 5));
            i1_const -= ck / (kk + 5) * std::pow(pc.lo, kk + 5);
            w.add(kk + 2, ck / (kk + 2));
            w_const -= ck / (kk + 2) * std::pow(pc.lo, kk + 2);
        }
        i1.add(0, i1_const);
        w.add(0, w_const);
        I1lo = i1.eval(pc.hi);
        Wlo = w.eval(pc.hi);
    }
    const double I1tot = I1lo, Wtot = Wlo;

    for (size_t i = 0; i < h_.size(); ++i) {
        GenPoly f;
        // (r^2/3) W(r)
        for (size_t j = 0; j < W[i].c.size(); ++j)
            f.add(W[i].min_pow + static_cast<int>(j) + 2, W[i].c[j] / 3.0);
        f.add(2, -Wtot / 3.0);
        // -I1(r)/(3r)
        for (size_t j = 0; j < I1[i].c.size(); ++j)
            f.add(I1[i].min_pow + static_cast<int>(j) - 1, -I1[i].c[j] / 3.0);
        f_.push_back(f);
    }
    // tail piece r >= a
    GenPoly ftail;
    ftail.add(-1, -I1tot / 3.0);
    f_.push_back(ftail);

    for (const auto& f : f_) {
        fd_.push_back(f.deriv());
        GenPoly G, H;
        for (size_t j = 0; j < f.c.size(); ++j) {
            const int k = f.min_pow + static_cast<int>(j);
            G.add(k - 4, f.c[j] * (2.0 - k));
            H.add(k - 2, 2.0 * f.c[j]);
        }
        G_.push_back(G);
        H_.push_back(H);
        Gd_.push_back(G.deriv());
        Hd_.push_back(H.deriv());
    }
}

HillVortex3D HillVortex3D::classical(double a, double U) {
    return HillVortex3D(a, U, {HPiece{0.0, a, {1.0}}}, true);
}

HillVortex3D HillVortex3D::mollified(double a, double U, double w) {
    if (w <= 0 || w >= 1)
        throw std::invalid_argument("HillVortex3D::mollified: width fraction in (0,1)");
    const double r1 = a * (1.0 - w);
    // h = 1 - S3(tau), S3 = 35 t^4 - 84 t^5 + 70 t^6 - 20 t^7 (C^3 step)
    std::vector<double> s3{0, 0, 0, 0, 35, -84, 70, -20};
    auto taper = compose_affine(s3, r1, a - r1);
    for (auto& c : taper) c = -c;
    taper[0] += 1.0;
    return HillVortex3D(a, U, {HPiece{0.0, r1, {1.0}}, HPiece{r1, a, taper}}, false);
}

size_t HillVortex3D::piece_index(double r) const {
    for (size_t i = 0; i + 1 < edges_.size(); ++i)
        if (r < edges_[i + 1]) return i;
    return f_.size() - 1;  // tail
}

double HillVortex3D::h_eval(double r) const {
    if (r >= a_ || r < 0) return 0.0;
    const size_t i = piece_index(r);
    if (i >= h_.size()) return 0.0;
    double v = 0, p = 1;
    for (double c : h_[i].coef) {
        v += c * p;
        p *= r;
    }
    return v;
}

void HillVortex3D::radial_factors(double r, double& G, double& Gd, double& H,
                                  double& Hd) const {
    const size_t i = piece_index(r);
    if (r < 1e-12) {
        // piece containing the origin is a plain polynomial in r
        G = G_[0].coef(0);
        Gd = 0.0;
        H = H_[0].coef(0);
        Hd = 0.0;
        return;
    }
    G = G_[i].eval(r);
    Gd = Gd_[i].eval(r);
    H = H_[i].eval(r);
    Hd = Hd_[i].eval(r);
}

Vec3 HillVortex3D::velocity(Vec3 x) const {
    const double r = x.norm();
    double G, Gd, H, Hd;
    radial_factors(r, G, Gd, H, Hd);
    const double rho2 = x.x * x.x + x.y * x.y;
    return {x.z * x.x * G, x.z * x.y * G, H - rho2 * G};
}

Mat3 HillVortex3D::velocity_grad(Vec3 x) const {
    const double r = x.norm();
    double G, Gd, H, Hd;
    radial_factors(r, G, Gd, H, Hd);
    const double inv = r > 1e-300 ? 1.0 / r : 0.0;
    const double gx = Gd * x.x * inv, gy = Gd * x.y * inv, gz = Gd * x.z * inv;
    Mat3 J;
    // u1 = z x G
    J.m[0][0] = x.z * G + x.z * x.x * gx;
    J.m[0][1] = x.z * x.x * gy;
    J.m[0][2] = x.x * G + x.z * x.x * gz;
    // u2 = z y G
    J.m[1][0] = x.z * x.y * gx;
    J.m[1][1] = x.z * G + x.z * x.y * gy;
    J.m[1][2] = x.y * G + x.z * x.y * gz;
    // u3 = H(r) - rho^2 G
    const double rho2 = x.x * x.x + x.y * x.y;
    J.m[2][0] = Hd * x.x * inv - 2 * x.x * G - rho2 * gx;
    J.m[2][1] = Hd * x.y * inv - 2 * x.y * G - rho2 * gy;
    J.m[2][2] = Hd * x.z * inv - rho2 * gz;
    return J;
}

Vec3 HillVortex3D::vorticity(Vec3 x) const {
    const double r = x.norm();
    const double lam_h = lambda_ * h_eval(r);
    return {-lam_h * x.y, lam_h * x.x, 0.0};
}

Vec3 HillVortex3D::velocity_laplacian(Vec3 x) const {
    const double r = x.norm();
    if (r >= a_) return {0, 0, 0};
    const size_t i = piece_index(r);
    double hd = 0;
    if (i < h_.size()) {
        double p = 1;
        for (size_t k = 1; k < h_[i].coef.size(); ++k) {
            hd += k * h_[i].coef[k] * p;
            p *= r;
        }
    }
    const double h = h_eval(r);
    const double inv = r > 1e-300 ? 1.0 / r : 0.0;
    const double rho2 = x.x * x.x + x.y * x.y;
    return {lambda_ * x.x * x.z * hd * inv, lambda_ * x.y * x.z * hd * inv,
            -lambda_ * (2 * h + hd * rho2 * inv)};
}

Vec3 HillVortex3D::stream(Vec3 x) const {
    const double r = x.norm();
    double G, Gd, H, Hd;
    radial_factors(r, G, Gd, H, Hd);
    const double half_h = 0.5 * H;  // Psi_phi / rho = f/r^2 = H/2
    return {-half_h * x.y, half_h * x.x, 0.0};
}

Mat3 HillVortex3D::stream_partial(Vec3 x) const {
    const double r = x.norm();
    double G, Gd, H, Hd;
    radial_factors(r, G, Gd, H, Hd);
    const double inv = r > 1e-300 ? 1.0 / r : 0.0;
    Mat3 P;  // P.m[i][k] = d_k Psi_i
    const double s = 0.5 * Hd * inv;
    const double hx = s * x.x, hy = s * x.y, hz = s * x.z;
    // Psi1 = -(H/2) y ; Psi2 = (H/2) x ; Psi3 = 0
    P.m[0][0] = -x.y * hx;
    P.m[0][1] = -0.5 * H - x.y * hy;
    P.m[0][2] = -x.y * hz;
    P.m[1][0] = 0.5 * H + x.x * hx;
    P.m[1][1] = x.x * hy;
    P.m[1][2] = x.x * hz;
    P.m[2][0] = P.m[2][1] = P.m[2][2] = 0.0;
    return P;
}

double HillVortex3D::stokes_stream(double rho, double z) const {
    const double r = std::hypot(rho, z);
    double G, Gd, H, Hd;
    radial_factors(r, G, Gd, H, Hd);
    return 0.5 * H * rho * rho;
}

double HillVortex3D::pressure(Vec3 x) const {
    if (!classical_)
        throw std::invalid_argument("HillVortex3D::pressure: closed form exists for the classical profile only");
    const double r = x.norm();
    const Vec3 u = velocity(x);
    const Vec3 uco{u.x, u.y, u.z - U_};
    if (r >= a_) return 0.5 * (U_ * U_ - uco.dot(uco));
    const double rho = std::hypot(x.x, x.y);
    const double psico = stokes_stream(rho, x.z) - 0.5 * U_ * rho * rho;
    return -lambda_ * psico + 0.5 * U_ * U_ - 0.5 * uco.dot(uco);
}

Vec3 HillVortex3D::stream_dt(Vec3 x) const {
    if (!classical_)
        throw std::invalid_argument("HillVortex3D::stream_dt: defined for the translating classical vortex");
    const Mat3 P = stream_partial(x);
    return {-U_ * P.m[0][2], -U_ * P.m[1][2], -U_ * P.m[2][2]};
}

double HillVortex3D::velocity_sup() const {
    double best = 0;
    const int n = 256;
    for (int i = 0; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            const Vec3 x{1.2 * a_ * i / n, 0.0, 1.2 * a_ * j / n};
            best = std::max(best, velocity(x).norm());
        }
    return best;
}

// ---------------------------------------------------------------------------
// catalog

namespace {

std::shared_ptr<const Flow2D> single(RadialProfilePtr pr, Vec2 c = {0, 0}) {
    auto f = std::make_shared<Flow2D>();
    f->parts.push_back(RadialVortex2D{std::move(pr), c});
    return f;
}

const std::vector<ReferenceFlow>& build_catalog() {
    static const std::vector<ReferenceFlow> flows = [] {
        std::vector<ReferenceFlow> v;

        // patch-II: omega = 1 on [0,1], m = pi
        auto unit_patch = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 1, {1.0})});
        v.push_back({"patch-II", 2, "II", 0.0, single(unit_patch), nullptr});

        // patch-I: omega = 1 on [0,1], -1/3 on (1,2]; m = 0 exactly
        auto annular = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{
                poly_piece(0, 1, {1.0}), poly_piece(1, 2, {-1.0 / 3.0})});
        v.push_back({"patch-I", 2, "I", 0.0, single(annular), nullptr});

        // smooth-II: omega = (1 - rho^2)^4 on [0,1]; m = pi/5; C^3 at the edge
        auto smooth2 = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{
                poly_piece(0, 1, {1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0})});
        v.push_back({"smooth-II", 2, "II", 2.0, single(smooth2), nullptr});

        // smooth-I: omega = (1 - 5 rho^2)(1 - rho^2)^3 on [0,1]; m = 0
        // expanded: (1-5t)(1-t)^3 in t = rho^2 -> 1 -8t +18t^2 -16t^3 +5t^4
        auto smooth1 = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{poly_piece(
                0, 1, {1.0, 0.0, -8.0, 0.0, 18.0, 0.0, -16.0, 0.0, 5.0})});
        v.push_back({"smooth-I", 2, "I", 2.0, single(smooth1), nullptr});

        // patch-I-off: opposite unit patches of radius 1/2 at (+-0.6, 0); m = 0,
        // genuinely non-radial, dipole far field
        auto small_patch = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 0.5, {1.0})});
        auto small_patch_neg = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 0.5, {-1.0})});
        {
            auto f = std::make_shared<Flow2D>();
            f->parts.push_back(RadialVortex2D{small_patch, {0.6, 0.0}});
            f->parts.push_back(RadialVortex2D{small_patch_neg, {-0.6, 0.0}});
            v.push_back({"patch-I-off", 2, "I", 0.0, f, nullptr});
        }

        // smooth-I-off: same dipole with C^3 bumps (1 - (rho/0.5)^2)^4
        auto small_bump = [](double sign) {
            // (1 - 4 rho^2)^4 scaled: expand (1 - 4t)^4 in t = rho^2
            return std::make_shared<PiecewisePolyProfile>(
                std::vector<PiecewisePolyProfile::Piece>{poly_piece(
                    0, 0.5,
                    {sign * 1.0, 0.0, sign * -16.0, 0.0, sign * 96.0, 0.0,
                     sign * -256.0, 0.0, sign * 256.0})});
        };
        {
            auto f = std::make_shared<Flow2D>();
            f->parts.push_back(RadialVortex2D{small_bump(+1.0), {0.6, 0.0}});
            f->parts.push_back(RadialVortex2D{small_bump(-1.0), {-0.6, 0.0}});
            v.push_back({"smooth-I-off", 2, "I", 2.0, f, nullptr});
        }

        // smooth-II-off: single C^3 bump of mass pi/5 centered at (1, 0)
        v.push_back({"smooth-II-off", 2, "II", 2.0, single(smooth2, {1.0, 0.0}), nullptr});

        // hill-III: mollified Hill vortex (a = 1, U = 1, taper width 0.1 a)
        v.push_back({"hill-III", 3, "III", 2.0, nullptr,
                     std::make_shared<HillVortex3D>(HillVortex3D::mollified(1.0, 1.0, 0.1))});
        // hill-classical: closed-form oracle variant
        v.push_back({"hill-classical", 3, "III", 1.0, nullptr,
                     std::make_shared<HillVortex3D>(HillVortex3D::classical(1.0, 1.0))});
        return v;
    }();
    return flows;
}

}  // namespace

const std::vector<ReferenceFlow>& catalog() { return build_catalog(); }

const ReferenceFlow& flow_by_name(const std::string& name) {
    for (const auto& f : catalog())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown flow: " + name);
}

double bernoulli_pressure(const RadialVortex2D& flow, double r) {
    if (r < 0) throw std::invalid_argument("bernoulli_pressure: r must be >= 0");
    return flow.pressure(r);
}

SupportBound support_radius_bound(const ReferenceFlow& flow, double T) {
    if (T < 0) throw std::invalid_argument("support_radius_bound: T must be >= 0");
    double R0, sup;
    if (flow.dimension == 2) {
        R0 = flow.flow2d->support_radius();
        sup = flow.flow2d->velocity_sup();
    } else {
        R0 = flow.flow3d->radius();
        // steady in the co-moving frame: scan |u - U e_z|
        const auto& h = *flow.flow3d;
        double best = 0;
        const int n = 256;
        for (int i = 0; i <= n; ++i)
            for (int j = -n; j <= n; ++j) {
                const Vec3 x{1.2 * h.radius() * i / n, 0.0, 1.2 * h.radius() * j / n};
                Vec3 u = h.velocity(x);
                u.z -= h.speed();
                best = std::max(best, u.norm());
            }
        sup = best;
    }
    return {R0 + sup * T, R0};
}

}  // namespace vvlab
