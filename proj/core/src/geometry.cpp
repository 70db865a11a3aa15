#include "vvlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

using std::numbers::pi;

double DomainSpec::max_curvature() const {
    if (is_disk()) return 1.0;
    // ellipse curvature ab / (a^2 sin^2 t + b^2 cos^2 t)^{3/2}; the max sits
    // at the end of the major axis
    const double mx = std::max(a, b), mn = std::min(a, b);
    return mx / (mn * mn);
}

double DomainSpec::min_boundary_distance() const {
    if (is_disk()) return 1.0;
    return std::min(a, b);
}

std::string DomainSpec::shape_name() const {
    if (is_disk()) return dimension == 3 ? "ball" : "disk";
    return "ellipse";
}

void DomainSpec::validate() const {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("DomainSpec: dimension must be 2 or 3");
    if (R <= 0) throw std::invalid_argument("DomainSpec: scale R must be positive");
    if (shape == Shape::ellipse) {
        if (dimension != 2)
            throw std::invalid_argument("DomainSpec: ellipse is 2D only");
        if (a <= 0 || b <= 0)
            throw std::invalid_argument("DomainSpec: ellipse semi-axes must be positive");
    }
}

int GridSpec::total_nodes() const {
    int n = 1;
    for (int d = 0; d < dimension; ++d) n *= nodes[d];
    return n;
}

double GridSpec::spacing(int axis) const {
    if (coords == CoordSystem::cartesian)
        return (hi[axis] - lo[axis]) / (nodes[axis] - 1);
    // polar: radial cells of width rmax/n, angular step 2pi/n
    if (axis == 0) return hi[0] / nodes[0];
    return 2 * pi / nodes[1];
}

Vec3 GridSpec::position(int flat) const {
    std::array<int, 3> idx{0, 0, 0};
    int rem = flat;
    for (int d = 0; d < dimension; ++d) {
        idx[d] = rem % nodes[d];
        rem /= nodes[d];
    }
    if (coords == CoordSystem::cartesian) {
        Vec3 p;
        p.x = lo[0] + idx[0] * spacing(0);
        p.y = dimension > 1 ? lo[1] + idx[1] * spacing(1) : 0.0;
        p.z = dimension > 2 ? lo[2] + idx[2] * spacing(2) : 0.0;
        return p;
    }
    const double r = (idx[0] + 0.5) * spacing(0);
    const double ang = idx[1] * spacing(1);
    return {r * std::cos(ang), r * std::sin(ang), 0.0};
}

void GridSpec::validate() const {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("GridSpec: dimension must be 2 or 3");
    for (int d = 0; d < dimension; ++d) {
        if (nodes[d] < 2) throw std::invalid_argument("GridSpec: need >= 2 nodes per axis");
        if (coords == CoordSystem::cartesian && hi[d] <= lo[d])
            throw std::invalid_argument("GridSpec: extents must be positive");
    }
    if (coords == CoordSystem::polar && hi[0] <= 0)
        throw std::invalid_argument("GridSpec: polar rmax must be positive");
}

TubularChart::TubularChart(const DomainSpec& domain, double theta)
    : domain_(domain), theta_(theta) {
    domain_.validate();
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("TubularChart: theta must lie in [0, 1]");
    if (domain_.R < 1.0)
        throw std::invalid_argument("TubularChart: requires R >= 1");

    delta1_ = 1.0 / (2.0 * domain_.max_curvature());
    // shrink rule: halve delta_1 until the collar stays clear of the origin
    const double d_origin = domain_.R * domain_.min_boundary_distance();
    width_ = delta1_ * std::pow(domain_.R, theta_);
    int guard = 0;
    while (width_ >= d_origin) {
        delta1_ *= 0.5;
        width_ = delta1_ * std::pow(domain_.R, theta_);
        if (++guard > 60)
            throw std::invalid_argument("TubularChart: collar cannot exclude the origin");
    }

    if (domain_.is_disk()) {
        length_ = 2 * pi * domain_.R;
    } else {
        const int n = 4096;
        t_samples_.resize(n + 1);
        s_samples_.resize(n + 1);
        double acc = 0;
        s_samples_[0] = 0;
        t_samples_[0] = 0;
        for (int i = 0; i < n; ++i) {
            const double t0 = 2 * pi * i / n, t1 = 2 * pi * (i + 1) / n;
            acc += integrate([this](double t) { return ellipse_speed(t); }, t0, t1, 1, 16);
            t_samples_[i + 1] = t1;
            s_samples_[i + 1] = acc;
        }
        length_ = acc;
    }
}

double TubularChart::ellipse_speed(double t) const {
    const double dx = -domain_.R * domain_.a * std::sin(t);
    const double dy = domain_.R * domain_.b * std::cos(t);
    return std::hypot(dx, dy);
}

Vec2 TubularChart::ellipse_point_t(double t) const {
    return {domain_.R * domain_.a * std::cos(t), domain_.R * domain_.b * std::sin(t)};
}

double TubularChart::param_from_arclength(double s) const {
    s = std::fmod(s, length_);
    if (s < 0) s += length_;
    auto it = std::upper_bound(s_samples_.begin(), s_samples_.end(), s);
    size_t i = std::min<size_t>(s_samples_.size() - 2,
                                static_cast<size_t>(it - s_samples_.begin()) - 1);
    double t = t_samples_[i] + (t_samples_[i + 1] - t_samples_[i]) *
                                   (s - s_samples_[i]) / (s_samples_[i + 1] - s_samples_[i]);
    // Newton on s(t) - s = 0; ds/dt = speed
    for (int k = 0; k < 40; ++k) {
        const double si = s_samples_[i] +
                          integrate([this](double u) { return ellipse_speed(u); },
                                    t_samples_[i], t, 1, 16);
        const double corr = (si - s) / ellipse_speed(t);
        t -= corr;
        if (std::abs(corr) < 1e-15) break;
    }
    return t;
}

Vec2 TubularChart::boundary_point(double s) const {
    if (domain_.is_disk()) {
        const double ang = s / domain_.R;
        return {domain_.R * std::cos(ang), domain_.R * std::sin(ang)};
    }
    return ellipse_point_t(param_from_arclength(s));
}

Vec2 TubularChart::tangent(double s) const {
    if (domain_.is_disk()) {
        const double ang = s / domain_.R;
        return {-std::sin(ang), std::cos(ang)};
    }
    const double t = param_from_arclength(s);
    const double sp = ellipse_speed(t);
    return {-domain_.R * domain_.a * std::sin(t) / sp,
            domain_.R * domain_.b * std::cos(t) / sp};
}

Vec2 TubularChart::inward_normal(double s) const {
    // boundary traversed counterclockwise: inward normal is -perp(tangent)
    const Vec2 T = tangent(s);
    return {-T.y, T.x};  // perp gives (-Ty, Tx): for the disk at s=0, T=(0,1) -> (-1,0) = inward
}

double TubularChart::curvature(double s) const {
    if (domain_.is_disk()) return 1.0 / domain_.R;
    const double t = param_from_arclength(s);
    const double A = domain_.R * domain_.a, B = domain_.R * domain_.b;
    const double den = A * A * std::sin(t) * std::sin(t) + B * B * std::cos(t) * std::cos(t);
    return A * B / std::pow(den, 1.5);
}

Vec2 TubularChart::from_chart(double s, double r) const {
    return boundary_point(s) + r * inward_normal(s);
}

double TubularChart::jacobian(double s, double r) const {
    return 1.0 - curvature(s) * r;
}

double TubularChart::nearest_param(Vec2 x) const {
    // argmin over t of |x - gamma(t)|^2; Newton with multi-start around atan2
    const double A = domain_.R * domain_.a, B = domain_.R * domain_.b;
    auto dist_deriv = [&](double t, double& d1, double& d2) {
        const double c = std::cos(t), s = std::sin(t);
        const Vec2 g{A * c, B * s};
        const Vec2 gp{-A * s, B * c};
        const Vec2 gpp{-A * c, -B * s};
        const Vec2 diff = x - g;
        d1 = -2.0 * diff.dot(gp);
        d2 = 2.0 * (gp.dot(gp) - diff.dot(gpp));
    };
    double best_t = 0, best_d = 1e300;
    for (int k = 0; k < 8; ++k) {
        double t = std::atan2(x.y / B, x.x / A) + (k - 4) * 0.15;
        for (int it = 0; it < 60; ++it) {
            double d1, d2;
            dist_deriv(t, d1, d2);
            if (d2 <= 0) break;
            const double step = d1 / d2;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const Vec2 g{A * std::cos(t), B * std::sin(t)};
        const double d = (x - g).norm();
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    return best_t;
}

double TubularChart::boundary_distance(Vec2 x) const {
    if (domain_.is_disk()) return domain_.R - x.norm();
    const double t = nearest_param(x);
    const Vec2 g = ellipse_point_t(t);
    const double d = (x - g).norm();
    // inside test: (x/aR)^2 + (y/bR)^2 <= 1
    const double q = std::pow(x.x / (domain_.R * domain_.a), 2) +
                     std::pow(x.y / (domain_.R * domain_.b), 2);
    return q <= 1.0 ? d : -d;
}

void TubularChart::foot(Vec2 x, Vec2& nu, Vec2& tang, double& kappa,
                        double& dist) const {
    if (domain_.is_disk()) {
        const double rho = x.norm();
        dist = domain_.R - rho;
        if (rho < 1e-300) {
            nu = {-1, 0};
            tang = {0, 1};
        } else {
            nu = (-1.0 / rho) * x;
            tang = {-nu.y, nu.x};
        }
        kappa = 1.0 / domain_.R;
        return;
    }
    const double t = nearest_param(x);
    const Vec2 g = ellipse_point_t(t);
    const double A = domain_.R * domain_.a, B = domain_.R * domain_.b;
    const double sp = std::hypot(A * std::sin(t), B * std::cos(t));
    tang = {-A * std::sin(t) / sp, B * std::cos(t) / sp};
    nu = {-tang.y, tang.x};
    const double den = A * A * std::sin(t) * std::sin(t) + B * B * std::cos(t) * std::cos(t);
    kappa = A * B / std::pow(den, 1.5);
    const double q = std::pow(x.x / A, 2) + std::pow(x.y / B, 2);
    dist = (q <= 1.0 ? 1.0 : -1.0) * (x - g).norm();
}

bool TubularChart::in_collar(Vec2 x) const {
    const double d = boundary_distance(x);
    return d >= 0.0 && d <= width_;
}

bool TubularChart::to_chart(Vec2 x, double& s, double& r) const {
    if (domain_.is_disk()) {
        r = domain_.R - x.norm();
        double ang = std::atan2(x.y, x.x);
        if (ang < 0) ang += 2 * pi;
        s = ang * domain_.R;
    } else {
        const double t = nearest_param(x);
        const Vec2 g = ellipse_point_t(t);
        r = boundary_distance(x);
        (void)g;
        double tt = std::fmod(t, 2 * pi);
        if (tt < 0) tt += 2 * pi;
        // arc length at parameter tt from the cached table plus a partial panel
        auto it = std::upper_bound(t_samples_.begin(), t_samples_.end(), tt);
        size_t i = std::min<size_t>(t_samples_.size() - 2,
                                    static_cast<size_t>(it - t_samples_.begin()) - 1);
        s = s_samples_[i] + integrate([this](double u) { return ellipse_speed(u); },
                                      t_samples_[i], tt, 1, 16);
    }
    return r >= 0.0 && r <= width_;
}

}  // namespace vvlab
