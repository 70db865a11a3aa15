#pragma once

#include <functional>
#include <memory>
#include <string>

#include "vvlab/cutoff.hpp"
#include "vvlab/flows.hpp"

namespace vvlab {

/// Stream normalization fed into T_R:
///   kernel        - the raw log-kernel stream (m = 0 flows)
///   boundary_zero - subtract psi_sigma(Gamma_R) = (m/2pi) log R (disk, m != 0)
///   mean_zero     - subtract the collar mean (non-disk failure-mode runs)
enum class StreamNormalization { kernel, boundary_zero, mean_zero_collar };

/// u^R = T_R u = perp-grad(phi^R psi) together with its two-term expansion
/// u^R = phi^R u + psi perp-grad(phi^R) and the exact gradient.
class TruncatedField2D {
  public:
    TruncatedField2D(std::shared_ptr<const Flow2D> flow,
                     std::shared_ptr<const CutoffFunction> cutoff, double psi_shift);

    Vec2 value(Vec2 x) const;
    Vec2 phi_u_term(Vec2 x) const;
    Vec2 stream_term(Vec2 x) const;   // psi perp-grad(phi^R)
    Mat2 gradient(Vec2 x) const;
    Vec2 diff(Vec2 x) const;          // u^R - u, supported in Sigma_R
    Mat2 grad_diff(Vec2 x) const;
    double divergence_fd(Vec2 x, double h) const;

    /// Radial fast path (disk + centered radial flow): the truncated field is
    /// w(rho) in the angular direction; returns w and the derived scalars.
    bool radial() const;
    double w_radial(double rho) const;
    double w_radial_d(double rho) const;
    double diff_radial(double rho) const;      // |u^R - u| at radius rho
    double diff_radial_d(double rho) const;    // d/drho of the difference scalar
    double laplacian_radial(double rho) const; // |Lap u^R| at radius rho
    double stream_term_radial(double rho) const;

    double psi_shift() const { return shift_; }
    const Flow2D& flow() const { return *flow_; }
    const CutoffFunction& cutoff() const { return *cutoff_; }

  private:
    std::shared_ptr<const Flow2D> flow_;
    std::shared_ptr<const CutoffFunction> cutoff_;
    double shift_;

    // cutoff as a function of rho on the disk: value and three derivatives
    void phi_rho(double rho, double& f, double& d1, double& d2, double& d3) const;
};

/// Build the 2D truncation. Validates stream/velocity consistency on probe
/// points, picks the psi normalization (explicit or by the rules above) and
/// rejects m != 0 on non-disk domains unless mean_zero_collar is forced.
TruncatedField2D truncate_2d(std::shared_ptr<const Flow2D> flow,
                             std::shared_ptr<const CutoffFunction> cutoff,
                             std::optional<StreamNormalization> normalization = {});

/// 3D analogue u^R = curl(phi^R Psi) = phi^R u + grad(phi^R) x Psi on the
/// ball with theta = 1; gradient assembled per the four-term expansion.
class TruncatedField3D {
  public:
    TruncatedField3D(std::shared_ptr<const HillVortex3D> flow,
                     std::shared_ptr<const CutoffFunction> cutoff);

    Vec3 value(Vec3 x) const;
    Vec3 phi_u_term(Vec3 x) const;
    Vec3 stream_term(Vec3 x) const;  // grad(phi^R) x Psi
    Mat3 gradient(Vec3 x) const;
    Vec3 diff(Vec3 x) const;
    Mat3 grad_diff(Vec3 x) const;

    const HillVortex3D& flow() const { return *flow_; }
    const CutoffFunction& cutoff() const { return *cutoff_; }

  private:
    std::shared_ptr<const HillVortex3D> flow_;
    std::shared_ptr<const CutoffFunction> cutoff_;
};

TruncatedField3D truncate_3d(std::shared_ptr<const HillVortex3D> flow,
                             std::shared_ptr<const CutoffFunction> cutoff);

/// W_R u on the disk of radius R: the unique H(Omega_R) field sharing the
/// vorticity of u (vorticity route) or u minus the harmonic Neumann gradient
/// (helmholtz route).
struct ProjectionResult {
    std::function<Vec2(Vec2)> W;
    std::function<Vec2(Vec2)> grad_p;       // u - W
    std::function<double(Vec2)> psi_tilde;  // vorticity route: solved stream
    std::string route;
    double mean_flux = 0.0;   // helmholtz: mean of u.n over Gamma_R
    double residual = 0.0;    // vorticity route: FD Laplacian self-check
};

struct ProjectionOptions {
    /// Angular mode cap. Off-center flows near the half-radius need ~128
    /// modes before the unresolved tail drops under 1e-6 of |u|.
    int modes = 128;
    int radial_panels = 48;
    int angular_nodes = 512;
    int boundary_nodes = 1024;
    /// Radial smoothness breaks of omega (centered patch edges); quadrature
    /// panels are aligned to these. Filled from the flow when empty.
    std::vector<double> radial_breakpoints;
};

/// Union of profile breakpoints of the origin-centered parts of a flow.
std::vector<double> centered_breakpoints(const Flow2D& flow);

ProjectionResult project_W_vorticity(std::shared_ptr<const Flow2D> u, double R,
                                     const ProjectionOptions& opt = {});
ProjectionResult project_W_helmholtz(std::shared_ptr<const Flow2D> u, double R,
                                     const ProjectionOptions& opt = {});
/// Generic-velocity entry: accepts any evaluator (the flux-compatibility
/// error path needs inputs that are not divergence-free).
ProjectionResult project_W_helmholtz(std::function<Vec2(Vec2)> velocity, double R,
                                     const ProjectionOptions& opt = {});

/// F(R) = |W_R u - u|_{L2(Omega_R)} from the boundary Fourier series alone:
/// F^2 = pi R^2 sum_k (c_k^2 + s_k^2)/k for the flux coefficients of u.n.
double initial_gap_norm(const Flow2D& u, double R, const ProjectionOptions& opt = {});

/// L2(Omega_R) residual of the truncated steady-Euler identity
/// phi^R (u . grad u + grad p) for a centered radial steady flow. p comes
/// from the radial Bernoulli relation; sampled_nodes > 0 switches the
/// pressure gradient to a 2nd-order FD of sampled p values.
double euler_identity_residual(const Flow2D& flow, const CutoffFunction& cutoff,
                               int sampled_nodes = 0);

}  // namespace vvlab
