#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vvlab/quadrature.hpp"

namespace vvlab {

/// Radial vorticity profile omega(rho) supported on [0, R0], with the
/// derived 1D quantities every 2D radial flow needs:
///   A(rho)     = int_0^rho s omega(s) ds          (so mass m = 2 pi A(R0))
///   u_theta    = A(rho)/rho
///   psi(rho)   with the log-kernel normalization psi(rho) = (m/2pi) log rho
///              for rho >= R0 and psi' = u_theta
///   p(rho)     = -int_rho^inf u_theta(s)^2 / s ds  (Bernoulli, p -> 0)
class RadialProfile {
  public:
    virtual ~RadialProfile() = default;

    virtual double omega(double rho) const = 0;
    virtual double omega_d(double rho) const = 0;
    virtual double A(double rho) const = 0;
    virtual double psi(double rho) const = 0;
    virtual double support_radius() const = 0;
    /// Radii where the profile loses smoothness (piece edges); quadrature
    /// panels are aligned to these.
    virtual std::vector<double> breakpoints() const = 0;

    double mass() const;
    double u_theta(double rho) const;
    double u_theta_d(double rho) const;
    double u_theta_dd(double rho) const;
    double psi_d(double rho) const { return u_theta(rho); }
    double pressure(double rho) const;
    double pressure_d(double rho) const;

  protected:
    // lazy pressure cumulative int_0^rho u_theta^2/s ds on [0, R0]
    mutable std::unique_ptr<CumulativeQuadrature> pcum_;
    void ensure_pressure_table() const;
};

using RadialProfilePtr = std::shared_ptr<const RadialProfile>;

/// omega is polynomial per radial piece; A and psi are exact closed forms
/// (psi pieces are polynomial plus a log term).
class PiecewisePolyProfile : public RadialProfile {
  public:
    struct Piece {
        double lo, hi;
        std::vector<double> coef;  // omega(rho) = sum coef[k] rho^k on [lo, hi)
    };

    explicit PiecewisePolyProfile(std::vector<Piece> pieces);

    double omega(double rho) const override;
    double omega_d(double rho) const override;
    double A(double rho) const override;
    double psi(double rho) const override;
    double support_radius() const override { return R0_; }
    std::vector<double> breakpoints() const override;

  private:
    struct Derived {
        std::vector<double> Acoef;    // A(rho) = sum Acoef[k] rho^k (Acoef[0] = const)
        double psi_log = 0.0;         // psi(rho) = psi_log*log(rho) + sum Pcoef[k] rho^k
        std::vector<double> Pcoef;
    };
    std::vector<Piece> pieces_;
    std::vector<Derived> derived_;
    double R0_;
    double mass_over_2pi_;
    size_t piece_index(double rho) const;
};

/// Profile given by a smooth callable (used for the C-infinity sigma bump);
/// A and psi are backed by breakpoint-aligned cumulative quadrature.
class SmoothRadialProfile : public RadialProfile {
  public:
    SmoothRadialProfile(std::function<double(double)> omega,
                        std::function<double(double)> omega_d, double R0);

    double omega(double rho) const override;
    double omega_d(double rho) const override;
    double A(double rho) const override;
    double psi(double rho) const override;
    double support_radius() const override { return R0_; }
    std::vector<double> breakpoints() const override { return {}; }

  private:
    std::function<double(double)> omega_, omega_d_;
    double R0_;
    CumulativeQuadrature Acum_;   // int s omega(s) ds
    CumulativeQuadrature Ucum_;   // int u_theta ds
    double psi_R0_;
};

/// Convenience builders.
PiecewisePolyProfile::Piece poly_piece(double lo, double hi, std::vector<double> coef);
/// The sigma bump exp(1 - 1/(1 - (rho/R0)^2)) on [0, R0), scaled so the
/// total mass is `mass`.
RadialProfilePtr sigma_bump_profile(double mass, double R0);

}  // namespace vvlab
