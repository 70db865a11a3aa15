#include "vvlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

using std::numbers::pi;

namespace {

int scaled(int n, double scale) {
    return std::max(2, static_cast<int>(std::lround(n * scale)));
}

// generic adaptive doubling driver: level -> (value, node count)
NormReport run_adaptive(const std::function<double(int)>& evaluate, NormKind kind,
                        const QuadratureOptions& opt, std::string region) {
    NormReport rep;
    rep.region = std::move(region);
    rep.kind = kind;
    int level = 0;
    double prev = evaluate(level);
    for (level = 1; level <= opt.max_levels; ++level) {
        const double cur = evaluate(level);
        const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        const double change = std::abs(cur - prev) / scale;
        if (change <= opt.rel_tol ||
            std::max(std::abs(cur), std::abs(prev)) <= opt.abs_tol) {
            rep.value = cur;
            rep.resolution = level;
            rep.quad_error = change;
            return rep;
        }
        prev = cur;
    }
    throw std::runtime_error("norm_on_region: adaptive refinement did not converge for " +
                             rep.region);
}

NormReport radial_norm(const std::function<double(double)>& magnitude, double a,
                       double b, std::span<const double> breakpoints, NormKind kind,
                       const QuadratureOptions& opt, bool three_d,
                       const std::string& region) {
    if (b <= a) throw std::invalid_argument("norm_radial: empty interval");
    std::vector<double> bp(breakpoints.begin(), breakpoints.end());
    auto eval = [&, bp](int level) {
        const int panels = scaled(opt.base_panels << level, opt.scale);
        auto edges = make_panels(a, b, bp, panels);
        if (kind == NormKind::Linf) {
            double best = 0;
            auto gx = gauss_nodes(16);
            for (size_t p = 0; p + 1 < edges.size(); ++p) {
                const double mid = 0.5 * (edges[p] + edges[p + 1]);
                const double half = 0.5 * (edges[p + 1] - edges[p]);
                best = std::max(best, std::abs(magnitude(edges[p])));
                for (double g : gx)
                    best = std::max(best, std::abs(magnitude(mid + half * g)));
            }
            best = std::max(best, std::abs(magnitude(b)));
            return best;
        }
        const double v = integrate_panels(
            [&](double r) {
                const double m = magnitude(r);
                return m * m * (three_d ? 4 * pi * r * r : 2 * pi * r);
            },
            edges, 16);
        return std::sqrt(std::max(0.0, v));
    };
    return run_adaptive(eval, kind, opt, region);
}

}  // namespace

NormReport norm_radial_2d(const std::function<double(double)>& magnitude, double a,
                          double b, std::span<const double> breakpoints,
                          NormKind kind, const QuadratureOptions& opt) {
    return radial_norm(magnitude, a, b, breakpoints, kind, opt, false, "annulus");
}

NormReport norm_radial_3d(const std::function<double(double)>& magnitude, double a,
                          double b, std::span<const double> breakpoints,
                          NormKind kind, const QuadratureOptions& opt) {
    return radial_norm(magnitude, a, b, breakpoints, kind, opt, true, "shell");
}

NormReport norm_polar_2d(const std::function<double(Vec2)>& magnitude, double a,
                         double b, NormKind kind, const QuadratureOptions& opt) {
    if (b <= a) throw std::invalid_argument("norm_polar_2d: empty annulus");
    auto eval = [&](int level) {
        const int rp = scaled(opt.base_panels << level, opt.scale);
        const int np = scaled(4 * (opt.base_panels << level), opt.scale);
        auto redges = make_panels(a, b, {}, rp);
        auto gx = gauss_nodes(16);
        auto gw = gauss_weights(16);
        double acc = 0, best = 0;
        for (size_t p = 0; p + 1 < redges.size(); ++p) {
            const double rm = 0.5 * (redges[p] + redges[p + 1]);
            const double rh = 0.5 * (redges[p + 1] - redges[p]);
            for (size_t i = 0; i < gx.size(); ++i) {
                const double rho = rm + rh * gx[i];
                const double wr = gw[i] * rh * rho * (2 * pi / np);
                for (int j = 0; j < np; ++j) {
                    const double ang = 2 * pi * (j + 0.5) / np;
                    const double m =
                        magnitude({rho * std::cos(ang), rho * std::sin(ang)});
                    acc += wr * m * m;
                    best = std::max(best, std::abs(m));
                }
            }
        }
        return kind == NormKind::Linf ? best : std::sqrt(std::max(0.0, acc));
    };
    return run_adaptive(eval, kind, opt, "polar-annulus");
}

NormReport norm_collar_2d(const std::function<double(Vec2)>& magnitude,
                          const TubularChart& chart, NormKind kind,
                          const QuadratureOptions& opt) {
    const double L = chart.boundary_length();
    const double w = chart.width();
    auto eval = [&](int level) {
        const int sp = scaled(4 * (opt.base_panels << level), opt.scale);
        const int rp = scaled(opt.base_panels << level, opt.scale);
        auto sedges = make_panels(0.0, L, {}, sp);
        auto redges = make_panels(0.0, w, {}, rp);
        auto gx = gauss_nodes(8);
        auto gw = gauss_weights(8);
        double acc = 0, best = 0;
        for (size_t p = 0; p + 1 < sedges.size(); ++p) {
            const double sm = 0.5 * (sedges[p] + sedges[p + 1]);
            const double sh = 0.5 * (sedges[p + 1] - sedges[p]);
            for (size_t i = 0; i < gx.size(); ++i) {
                const double s = sm + sh * gx[i];
                // boundary data once per s node
                const Vec2 gamma = chart.boundary_point(s);
                const Vec2 nu = chart.inward_normal(s);
                const double kap = chart.curvature(s);
                const double ws = gw[i] * sh;
                for (size_t q = 0; q + 1 < redges.size(); ++q) {
                    const double rm = 0.5 * (redges[q] + redges[q + 1]);
                    const double rh = 0.5 * (redges[q + 1] - redges[q]);
                    for (size_t j = 0; j < gx.size(); ++j) {
                        const double r = rm + rh * gx[j];
                        const Vec2 x = gamma + r * nu;
                        const double J = 1.0 - kap * r;
                        const double m = magnitude(x);
                        acc += ws * gw[j] * rh * J * m * m;
                        best = std::max(best, std::abs(m));
                    }
                }
            }
        }
        return kind == NormKind::Linf ? best : std::sqrt(std::max(0.0, acc));
    };
    return run_adaptive(eval, kind, opt, "Sigma_R");
}

NormReport norm_shell_3d(const std::function<double(double, double)>& magnitude,
                         double a, double b, NormKind kind,
                         const QuadratureOptions& opt,
                         std::span<const double> breakpoints) {
    if (b <= a) throw std::invalid_argument("norm_shell_3d: empty shell");
    std::vector<double> bp(breakpoints.begin(), breakpoints.end());
    auto eval = [&, bp](int level) {
        const int rp = scaled(opt.base_panels << level, opt.scale);
        const int mp = scaled(opt.base_panels << level, opt.scale);
        auto redges = make_panels(a, b, bp, rp);
        auto muedges = make_panels(-1.0, 1.0, {}, mp);
        auto gx = gauss_nodes(8);
        auto gw = gauss_weights(8);
        double acc = 0, best = 0;
        for (size_t p = 0; p + 1 < redges.size(); ++p) {
            const double rm = 0.5 * (redges[p] + redges[p + 1]);
            const double rh = 0.5 * (redges[p + 1] - redges[p]);
            for (size_t i = 0; i < gx.size(); ++i) {
                const double r = rm + rh * gx[i];
                const double wr = gw[i] * rh * 2 * pi * r * r;
                for (size_t q = 0; q + 1 < muedges.size(); ++q) {
                    const double mm = 0.5 * (muedges[q] + muedges[q + 1]);
                    const double mh = 0.5 * (muedges[q + 1] - muedges[q]);
                    for (size_t j = 0; j < gx.size(); ++j) {
                        const double mu = mm + mh * gx[j];
                        const double rho = r * std::sqrt(std::max(0.0, 1.0 - mu * mu));
                        const double z = r * mu;
                        const double m = magnitude(rho, z);
                        acc += wr * gw[j] * mh * m * m;
                        best = std::max(best, std::abs(m));
                    }
                }
            }
        }
        return kind == NormKind::Linf ? best : std::sqrt(std::max(0.0, acc));
    };
    return run_adaptive(eval, kind, opt, "shell-3d");
}

Vec2 fd_gradient(const std::function<double(Vec2)>& f, Vec2 x, double h) {
    auto d = [&](int axis) {
        auto at = [&](double t) {
            Vec2 p = x;
            (axis == 0 ? p.x : p.y) += t;
            return f(p);
        };
        return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    };
    return {d(0), d(1)};
}

}  // namespace vvlab
