#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vvlab/radial_profile.hpp"
#include "vvlab/vec.hpp"

namespace vvlab {

/// Generalized polynomial sum c_k r^k with integer powers that may be
/// negative (homogeneous 1/r parts of stream solutions).
struct GenPoly {
    int min_pow = 0;
    std::vector<double> c;  // coefficient of r^{min_pow + i}

    double eval(double r) const;
    GenPoly deriv() const;
    double coef(int power) const;
    void add(int power, double value);
};

/// Exact steady 2D Euler vortex with radial vorticity profile, placed at
/// `center`. All evaluators are closed forms of the 1D profile.
struct RadialVortex2D {
    RadialProfilePtr profile;
    Vec2 center{0, 0};

    double support_radius() const { return profile->support_radius(); }
    double mass() const { return profile->mass(); }

    Vec2 velocity(Vec2 x) const;
    Mat2 velocity_grad(Vec2 x) const;
    double vorticity(Vec2 x) const;
    double vorticity_grad_norm(Vec2 x) const;
    double psi(Vec2 x) const;          // log-kernel normalization
    Vec2 psi_grad(Vec2 x) const;
    /// Bernoulli pressure; valid for the centered steady vortex.
    double pressure(double rho) const { return profile->pressure(rho); }
    Vec2 pressure_grad(Vec2 x) const;
};

/// Superposition of radial vortices: the analytic carrier for every 2D
/// reference flow (single vortices, off-center dipoles, v-parts).
struct Flow2D {
    std::vector<RadialVortex2D> parts;

    double mass() const;
    /// Radius of the smallest origin-centered ball containing supp(omega).
    double support_radius() const;

    Vec2 velocity(Vec2 x) const;
    Mat2 velocity_grad(Vec2 x) const;
    double vorticity(Vec2 x) const;
    double psi(Vec2 x) const;
    Vec2 psi_grad(Vec2 x) const;
    double velocity_sup() const;  // sup |u| over a dense probe set

    bool single_centered() const;
    const RadialVortex2D& primary() const { return parts.front(); }
};

/// Hill-type spherical vortex: vorticity omega_phi = lambda * rho * h(r)
/// supported in the ball r <= a; h == 1 recovers the classical vortex that
/// translates with speed U. Velocity and vector stream function come from
/// the exact piecewise solution of f'' - 2 f / r^2 = -lambda r^2 h(r).
class HillVortex3D {
  public:
    /// h given as polynomial pieces on [lo, hi] covering [0, a];
    /// classical: single piece {1}.
    struct HPiece {
        double lo, hi;
        std::vector<double> coef;
    };

    HillVortex3D(double a, double U, std::vector<HPiece> h, bool classical);
    static HillVortex3D classical(double a, double U);
    /// C^3 polynomial smooth-step taper of relative width w near r = a.
    static HillVortex3D mollified(double a, double U, double w);

    double radius() const { return a_; }
    double speed() const { return U_; }
    bool is_classical() const { return classical_; }

    Vec3 velocity(Vec3 x) const;
    Mat3 velocity_grad(Vec3 x) const;
    Vec3 vorticity(Vec3 x) const;
    Vec3 velocity_laplacian(Vec3 x) const;  // = -curl(omega), zero outside supp
    Vec3 stream(Vec3 x) const;            // Psi, -Lap Psi = omega, decays at inf
    Mat3 stream_partial(Vec3 x) const;    // column k = d_k Psi
    double stokes_stream(double rho, double z) const;
    /// Pressure of the (classical) translating vortex at t = 0; the field
    /// is steady in the co-moving frame so Bernoulli applies.
    double pressure(Vec3 x) const;
    /// d/dt Psi at t = 0 for the translating classical vortex: -U dPsi/dz.
    Vec3 stream_dt(Vec3 x) const;

    double velocity_sup() const;

  private:
    double a_, U_, lambda_;
    bool classical_;
    std::vector<double> edges_;            // piece edges, 0 .. a
    std::vector<GenPoly> f_, fd_, G_, Gd_, H_, Hd_;  // per piece (+ tail piece)
    std::vector<HPiece> h_;

    size_t piece_index(double r) const;
    double h_eval(double r) const;
    // scalar helpers at radius r
    void radial_factors(double r, double& G, double& Gd, double& H, double& Hd) const;
};

/// Catalog entry; exactly one of flow2d / flow3d is set.
struct ReferenceFlow {
    std::string name;
    int dimension;
    std::string case_tag;   // "I", "II", "III"
    double smoothness;      // honest C^s tag (0 for patches)
    std::shared_ptr<const Flow2D> flow2d;
    std::shared_ptr<const HillVortex3D> flow3d;
};

/// Named exact reference flows used as ground truth everywhere.
const std::vector<ReferenceFlow>& catalog();
const ReferenceFlow& flow_by_name(const std::string& name);

double bernoulli_pressure(const RadialVortex2D& flow, double r);

struct SupportBound {
    double bound;        // R0 + sup|u| * T
    double exact_RT;     // R0 for the steady catalog flows
};
SupportBound support_radius_bound(const ReferenceFlow& flow, double T);

/// Flow translated by offset (used for off-center projection / gap tests).
Flow2D translate(const Flow2D& flow, Vec2 offset);

}  // namespace vvlab
