#include "vvlab/cutoff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

using std::numbers::pi;

namespace {

double bump_integrand(double tau) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    return std::exp(-1.0 / (tau * (1.0 - tau)));
}

// shared normalized smooth step on [0,1]
struct StepTable {
    CumulativeQuadrature cum;
    double Z;
    StepTable() : cum(bump_integrand, make_panels(0, 1, {}, 128), 16), Z(cum.total()) {}
};

const StepTable& step_table() {
    static const StepTable t;
    return t;
}

}  // namespace

CutoffProfile::CutoffProfile(double delta1) : delta1_(delta1) {
    if (delta1 <= 0) throw std::invalid_argument("CutoffProfile: delta1 must be positive");
    step_table();  // build the shared table eagerly
}

double CutoffProfile::bump(double tau) { return bump_integrand(tau); }

double CutoffProfile::S(double tau) const {
    if (tau <= 0) return 0.0;
    if (tau >= 1) return 1.0;
    const auto& t = step_table();
    return t.cum(tau) / t.Z;
}

double CutoffProfile::Sd(double tau) const { return bump(tau) / step_table().Z; }

double CutoffProfile::value(double t) const {
    if (t < 0 || t > delta1_ * (1 + 1e-12))
        throw std::domain_error("CutoffProfile: argument outside [0, delta1]");
    return S(2.0 * t / delta1_);
}

double CutoffProfile::d1(double t) const {
    if (t < 0 || t > delta1_ * (1 + 1e-12))
        throw std::domain_error("CutoffProfile: argument outside [0, delta1]");
    return Sd(2.0 * t / delta1_) * (2.0 / delta1_);
}

double CutoffProfile::d2(double t) const {
    if (t < 0 || t > delta1_ * (1 + 1e-12))
        throw std::domain_error("CutoffProfile: argument outside [0, delta1]");
    const double tau = 2.0 * t / delta1_;
    if (tau <= 0 || tau >= 1) return 0.0;
    const double q = tau * (1.0 - tau);
    const double Ed = (1.0 - 2.0 * tau) / (q * q);
    return Sd(tau) * Ed * std::pow(2.0 / delta1_, 2);
}

double CutoffProfile::d3(double t) const {
    if (t < 0 || t > delta1_ * (1 + 1e-12))
        throw std::domain_error("CutoffProfile: argument outside [0, delta1]");
    const double tau = 2.0 * t / delta1_;
    if (tau <= 0 || tau >= 1) return 0.0;
    const double q = tau * (1.0 - tau);
    const double Ed = (1.0 - 2.0 * tau) / (q * q);
    const double Edd = -2.0 / (q * q) - 2.0 * std::pow(1.0 - 2.0 * tau, 2) / (q * q * q);
    return Sd(tau) * (Ed * Ed + Edd) * std::pow(2.0 / delta1_, 3);
}

// ---------------------------------------------------------------------------

CutoffFunction::CutoffFunction(const DomainSpec& domain, double theta,
                               CutoffVariant variant)
    : chart_(domain, theta), g_(chart_.delta1()), theta_(theta), variant_(variant) {
    if (variant == CutoffVariant::dilation3d) {
        if (domain.dimension != 3 || !domain.is_disk())
            throw std::invalid_argument("CutoffFunction: 3D variant requires the ball");
        if (theta != 1.0)
            throw std::invalid_argument("CutoffFunction: 3D dilation variant forces theta = 1");
    } else if (domain.dimension != 2) {
        throw std::invalid_argument("CutoffFunction: collar variant is 2D");
    }
    scale_ = std::pow(domain.R, -theta_);
}

double CutoffFunction::value_chart(double r) const {
    if (r <= 0) return 0.0;
    if (r >= chart_.width()) return 1.0;
    return g_.value(r * scale_);
}

void CutoffFunction::radial_derivs(double r, double& phi, double& d1, double& d2,
                                   double& d3) const {
    if (r <= 0) {
        phi = d1 = d2 = d3 = 0.0;
        return;
    }
    if (r >= chart_.width()) {
        phi = 1.0;
        d1 = d2 = d3 = 0.0;
        return;
    }
    const double t = r * scale_;
    phi = g_.value(t);
    d1 = g_.d1(t) * scale_;
    d2 = g_.d2(t) * scale_ * scale_;
    d3 = g_.d3(t) * scale_ * scale_ * scale_;
}

double CutoffFunction::value(Vec2 x) const {
    const double d = chart_.boundary_distance(x);
    if (d < 0) return 0.0;
    return value_chart(d);
}

Vec2 CutoffFunction::grad(Vec2 x) const {
    Vec2 nu, tg;
    double kappa, d;
    chart_.foot(x, nu, tg, kappa, d);
    if (d <= 0 || d >= chart_.width()) return {0, 0};
    return (g_.d1(d * scale_) * scale_) * nu;
}

Mat2 CutoffFunction::hess(Vec2 x) const {
    Vec2 nu, tg;
    double kappa, d;
    chart_.foot(x, nu, tg, kappa, d);
    if (d <= 0 || d >= chart_.width()) return {};
    const double t = d * scale_;
    const double g1 = g_.d1(t) * scale_;
    const double g2 = g_.d2(t) * scale_ * scale_;
    // Hess(dist) = -kappa/(1 - kappa d) T (x) T on the inner parallel curve
    const double hcoef = -kappa / (1.0 - kappa * d);
    return outer(nu, nu) * g2 + outer(tg, tg) * (g1 * hcoef);
}

double CutoffFunction::value3(Vec3 x) const {
    const double d = chart_.domain().R - x.norm();
    if (d < 0) return 0.0;
    return value_chart(d);
}

Vec3 CutoffFunction::grad3(Vec3 x) const {
    const double rho = x.norm();
    const double d = chart_.domain().R - rho;
    if (d <= 0 || d >= chart_.width() || rho < 1e-300) return {0, 0, 0};
    const double g1 = g_.d1(d * scale_) * scale_;
    return (-g1 / rho) * x;
}

Mat3 CutoffFunction::hess3(Vec3 x) const {
    const double rho = x.norm();
    const double d = chart_.domain().R - rho;
    if (d <= 0 || d >= chart_.width() || rho < 1e-300) return {};
    const double t = d * scale_;
    const double g1 = g_.d1(t) * scale_;
    const double g2 = g_.d2(t) * scale_ * scale_;
    const Vec3 n = (1.0 / rho) * x;  // outward radial
    Mat3 nn = outer(n, n);
    Mat3 tt;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tt.m[i][j] = (i == j ? 1.0 : 0.0) - nn.m[i][j];
    // grad(dist) = -n; Hess(dist) = -(I - n n)/rho
    return nn * g2 + tt * (-g1 / rho);
}

CutoffFunction build_cutoff(const DomainSpec& domain, double theta, double R) {
    DomainSpec d = domain;
    d.R = R;
    const auto variant =
        d.dimension == 3 ? CutoffVariant::dilation3d : CutoffVariant::collar2d;
    return CutoffFunction(d, theta, variant);
}

// ---------------------------------------------------------------------------

CollarMask collar_mask(const DomainSpec& domain, double theta, double R,
                       const GridSpec& grid) {
    DomainSpec d = domain;
    d.R = R;
    TubularChart chart(d, theta);
    grid.validate();

    CollarMask out;
    out.field.grid = grid;
    out.field.components = 3;
    out.field.values.assign(static_cast<size_t>(grid.total_nodes()) * 3, 0.0);
    out.member_count = 0;

    for (int i = 0; i < grid.total_nodes(); ++i) {
        const Vec3 p3 = grid.position(i);
        const Vec2 p{p3.x, p3.y};
        double s, r;
        if (chart.to_chart(p, s, r)) {
            out.field.at(i, 0) = 1.0;
            out.field.at(i, 1) = s;
            out.field.at(i, 2) = r;
            ++out.member_count;
        }
    }
    // exact chart area: L w - (w^2/2) * total curvature, total curvature of a
    // closed convex boundary being 2 pi
    const double w = chart.width();
    out.chart_area = chart.boundary_length() * w - pi * w * w;
    return out;
}

}  // namespace vvlab
