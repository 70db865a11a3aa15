#pragma once

#include <memory>

#include "vvlab/field.hpp"
#include "vvlab/geometry.hpp"

namespace vvlab {

/// 1D transition profile g on [0, delta1]: g(0) = g'(0) = 0, monotone,
/// g == 1 on [delta1/2, delta1]. Realized as the normalized integral of
/// exp(-1/(t(1-t))) rescaled to [0, delta1/2], so every derivative
/// vanishes at 0 and at the plateau junction.
class CutoffProfile {
  public:
    explicit CutoffProfile(double delta1);

    double delta1() const { return delta1_; }
    double value(double t) const;   // g(t), t in [0, delta1]
    double d1(double t) const;
    double d2(double t) const;
    double d3(double t) const;

  private:
    double delta1_;
    double S(double tau) const;      // normalized smooth step on [0,1]
    double Sd(double tau) const;
    static double bump(double tau);  // exp(-1/(tau(1-tau)))
};

enum class CutoffVariant { collar2d, dilation3d };

/// Boundary cutoff phi^R with exact chain-rule first and second derivatives
/// through the tubular chart. The 3D variant is the pure dilation
/// phi^R(x) = phi^1(x/R) on the ball, which forces theta = 1.
class CutoffFunction {
  public:
    CutoffFunction(const DomainSpec& domain, double theta, CutoffVariant variant);

    const DomainSpec& domain() const { return chart_.domain(); }
    const TubularChart& chart() const { return chart_; }
    const CutoffProfile& profile() const { return g_; }
    double theta() const { return theta_; }
    double R() const { return chart_.domain().R; }
    CutoffVariant variant() const { return variant_; }
    double collar_width() const { return chart_.width(); }

    // 2D point evaluators (any x in the domain closure)
    double value(Vec2 x) const;
    Vec2 grad(Vec2 x) const;
    Mat2 hess(Vec2 x) const;

    // chart fast path: phi depends on r only
    double value_chart(double r) const;
    /// d/dr derivatives of phi(r) up to third order (used on the disk where
    /// everything is radial in rho = R - r).
    void radial_derivs(double r, double& phi, double& d1, double& d2, double& d3) const;

    // 3D evaluators (ball, dilation variant)
    double value3(Vec3 x) const;
    Vec3 grad3(Vec3 x) const;
    Mat3 hess3(Vec3 x) const;

  private:
    TubularChart chart_;
    CutoffProfile g_;
    double theta_;
    double scale_;  // R^-theta
    CutoffVariant variant_;
};

CutoffFunction build_cutoff(const DomainSpec& domain, double theta, double R);

/// Collar membership indicator plus chart coordinates per grid node:
/// components = (indicator, s, r). Also reports the exact chart area of
/// Sigma_R.
struct CollarMask {
    SampledField field;      // 3 components: inside, s, r
    double chart_area;       // int_Sigma J ds dr
    int member_count;
};
CollarMask collar_mask(const DomainSpec& domain, double theta, double R,
                       const GridSpec& grid);

}  // namespace vvlab
