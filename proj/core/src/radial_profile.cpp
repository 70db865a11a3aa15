#include "vvlab/radial_profile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vvlab {

using std::numbers::pi;

double RadialProfile::mass() const { return 2 * pi * A(support_radius()); }

double RadialProfile::u_theta(double rho) const {
    if (rho <= 0) return 0.0;
    return A(rho) / rho;
}

double RadialProfile::u_theta_d(double rho) const {
    // (rho u)' = rho omega  =>  u' = omega - u/rho
    if (rho <= 0) return 0.5 * omega(0.0);
    return omega(rho) - u_theta(rho) / rho;
}

double RadialProfile::u_theta_dd(double rho) const {
    if (rho <= 0) return 0.0;
    return omega_d(rho) - u_theta_d(rho) / rho + u_theta(rho) / (rho * rho);
}

void RadialProfile::ensure_pressure_table() const {
    if (pcum_) return;
    const double R0 = support_radius();
    auto edges = make_panels(0.0, R0, breakpoints(), 16);
    pcum_ = std::make_unique<CumulativeQuadrature>(
        [this](double s) {
            const double u = u_theta(s);
            return s > 0 ? u * u / s : 0.0;
        },
        std::move(edges), 16);
}

double RadialProfile::pressure(double rho) const {
    ensure_pressure_table();
    const double R0 = support_radius();
    const double mo2pi = A(R0);  // m / (2 pi)
    const double router = std::max(rho, R0);
    // tail: u_theta = (m/2pi)/s beyond R0, so int u^2/s^3-type integral closes
    double p = -mo2pi * mo2pi / (2.0 * router * router);
    if (rho < R0) p -= pcum_->total() - (*pcum_)(rho);
    return p;
}

double RadialProfile::pressure_d(double rho) const {
    if (rho <= 0) return 0.0;
    const double u = u_theta(rho);
    return u * u / rho;
}

// ---------------------------------------------------------------------------

PiecewisePolyProfile::Piece poly_piece(double lo, double hi, std::vector<double> coef) {
    return {lo, hi, std::move(coef)};
}

PiecewisePolyProfile::PiecewisePolyProfile(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("PiecewisePolyProfile: no pieces");
    if (pieces_.front().lo != 0.0)
        throw std::invalid_argument("PiecewisePolyProfile: first piece must start at 0");
    for (size_t i = 0; i + 1 < pieces_.size(); ++i)
        if (pieces_[i].hi != pieces_[i + 1].lo)
            throw std::invalid_argument("PiecewisePolyProfile: pieces must be contiguous");
    R0_ = pieces_.back().hi;

    // A(rho) per piece: A(lo) + sum coef[k] (rho^{k+2} - lo^{k+2}) / (k+2)
    derived_.resize(pieces_.size());
    double Alo = 0.0;
    for (size_t i = 0; i < pieces_.size(); ++i) {
        const auto& pc = pieces_[i];
        auto& dv = derived_[i];
        dv.Acoef.assign(pc.coef.size() + 2, 0.0);
        double const_part = Alo;
        for (size_t k = 0; k < pc.coef.size(); ++k) {
            const double c = pc.coef[k] / (k + 2.0);
            dv.Acoef[k + 2] = c;
            const_part -= c * std::pow(pc.lo, static_cast<double>(k + 2));
        }
        dv.Acoef[0] = const_part;
        // advance
        Alo = 0.0;
        for (size_t k = 0; k < dv.Acoef.size(); ++k)
            Alo += dv.Acoef[k] * std::pow(pc.hi, static_cast<double>(k));
    }
    mass_over_2pi_ = Alo;

    // psi per piece: int A(rho)/rho drho = Acoef[0] log rho + sum_{k>=1} Acoef[k] rho^k / k
    // fixed up to be continuous, then shifted so psi(R0) = (m/2pi) log R0.
    double psi_lo = 0.0;  // running value of psi at piece start (pre-shift)
    for (size_t i = 0; i < pieces_.size(); ++i) {
        const auto& pc = pieces_[i];
        auto& dv = derived_[i];
        dv.Pcoef.assign(dv.Acoef.size(), 0.0);
        dv.psi_log = dv.Acoef[0];
        for (size_t k = 1; k < dv.Acoef.size(); ++k) dv.Pcoef[k] = dv.Acoef[k] / k;
        // constant so that psi(lo) = psi_lo; the first piece has psi_log = 0
        double at_lo = dv.psi_log != 0.0 && pc.lo > 0 ? dv.psi_log * std::log(pc.lo) : 0.0;
        for (size_t k = 1; k < dv.Pcoef.size(); ++k)
            at_lo += dv.Pcoef[k] * std::pow(pc.lo, static_cast<double>(k));
        dv.Pcoef[0] = psi_lo - at_lo;
        // value at hi
        double at_hi = dv.Pcoef[0] + (dv.psi_log != 0.0 ? dv.psi_log * std::log(pc.hi) : 0.0);
        for (size_t k = 1; k < dv.Pcoef.size(); ++k)
            at_hi += dv.Pcoef[k] * std::pow(pc.hi, static_cast<double>(k));
        psi_lo = at_hi;
    }
    // shift so psi matches the kernel normalization at R0
    const double target = mass_over_2pi_ * std::log(R0_);
    const double shift = target - psi_lo;
    for (auto& dv : derived_) dv.Pcoef[0] += shift;
}

size_t PiecewisePolyProfile::piece_index(double rho) const {
    for (size_t i = 0; i + 1 < pieces_.size(); ++i)
        if (rho < pieces_[i].hi) return i;
    return pieces_.size() - 1;
}

double PiecewisePolyProfile::omega(double rho) const {
    if (rho < 0 || rho >= R0_) return 0.0;
    const auto& pc = pieces_[piece_index(rho)];
    double v = 0, p = 1;
    for (double c : pc.coef) {
        v += c * p;
        p *= rho;
    }
    return v;
}

double PiecewisePolyProfile::omega_d(double rho) const {
    if (rho < 0 || rho >= R0_) return 0.0;
    const auto& pc = pieces_[piece_index(rho)];
    double v = 0, p = 1;
    for (size_t k = 1; k < pc.coef.size(); ++k) {
        v += k * pc.coef[k] * p;
        p *= rho;
    }
    return v;
}

double PiecewisePolyProfile::A(double rho) const {
    if (rho <= 0) return 0.0;
    if (rho >= R0_) return mass_over_2pi_;
    const auto& dv = derived_[piece_index(rho)];
    double v = 0, p = 1;
    for (double c : dv.Acoef) {
        v += c * p;
        p *= rho;
    }
    return v;
}

double PiecewisePolyProfile::psi(double rho) const {
    if (rho >= R0_) return mass_over_2pi_ * std::log(rho);
    if (rho <= 0) {
        // psi(0) is finite: constant term of the first piece
        return derived_.front().Pcoef[0];
    }
    const auto& dv = derived_[piece_index(rho)];
    double v = dv.psi_log != 0.0 ? dv.psi_log * std::log(rho) : 0.0;
    double p = 1;
    for (double c : dv.Pcoef) {
        v += c * p;
        p *= rho;
    }
    return v;
}

std::vector<double> PiecewisePolyProfile::breakpoints() const {
    std::vector<double> bp;
    for (const auto& pc : pieces_) bp.push_back(pc.hi);
    return bp;
}

// ---------------------------------------------------------------------------

SmoothRadialProfile::SmoothRadialProfile(std::function<double(double)> omega,
                                         std::function<double(double)> omega_d,
                                         double R0)
    : omega_(std::move(omega)), omega_d_(std::move(omega_d)), R0_(R0),
      Acum_([this](double s) { return s * omega_(s); },
            make_panels(0.0, R0, {}, 96), 16),
      Ucum_([this](double s) { return s > 0 ? Acum_(s) / s : 0.0; },
            make_panels(0.0, R0, {}, 96), 16) {
    if (R0 <= 0) throw std::invalid_argument("SmoothRadialProfile: R0 must be positive");
    psi_R0_ = Acum_.total() * std::log(R0_);
}

double SmoothRadialProfile::omega(double rho) const {
    if (rho < 0 || rho >= R0_) return 0.0;
    return omega_(rho);
}

double SmoothRadialProfile::omega_d(double rho) const {
    if (rho < 0 || rho >= R0_) return 0.0;
    return omega_d_(rho);
}

double SmoothRadialProfile::A(double rho) const {
    if (rho <= 0) return 0.0;
    if (rho >= R0_) return Acum_.total();
    return Acum_(rho);
}

double SmoothRadialProfile::psi(double rho) const {
    if (rho >= R0_) return Acum_.total() * std::log(rho);
    return psi_R0_ - (Ucum_.total() - Ucum_(rho));
}

// ---------------------------------------------------------------------------

RadialProfilePtr sigma_bump_profile(double mass, double R0) {
    if (R0 <= 0) throw std::invalid_argument("sigma_bump_profile: R0 must be positive");
    auto raw = [R0](double rho) {
        const double t = rho / R0;
        if (t >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    };
    auto raw_d = [R0, raw](double rho) {
        const double t = rho / R0;
        if (t >= 1.0) return 0.0;
        const double q = 1.0 - t * t;
        return raw(rho) * (-2.0 * t / (q * q)) / R0;
    };
    // unit-amplitude mass
    const double m_raw =
        2 * pi * integrate([&](double s) { return s * raw(s); }, 0.0, R0, 64, 16);
    const double scale = mass / m_raw;
    return std::make_shared<SmoothRadialProfile>(
        [raw, scale](double r) { return scale * raw(r); },
        [raw_d, scale](double r) { return scale * raw_d(r); }, R0);
}

}  // namespace vvlab
