#pragma once

#include <functional>
#include <vector>

#include "vvlab/field.hpp"
#include "vvlab/rates.hpp"

namespace vvlab {

enum class StreamProvenance { analytic_radial, quadrature };

struct StreamFunction2D {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> grad;
    StreamProvenance provenance = StreamProvenance::analytic_radial;
};

struct StreamFunction3D {
    std::function<Vec3(Vec3)> value;
    std::function<Mat3(Vec3)> partial;  // column k = d_k Psi
    StreamProvenance provenance = StreamProvenance::analytic_radial;
};

/// Singular-kernel quadrature controls. The cell-exclusion rule integrates
/// node-by-node, drops the self cell (odd kernels: exact principal value;
/// log kernel: analytic self-cell patch) and therefore accepts interior
/// evaluation points only right on a source node; anywhere else inside the
/// support requires the regularized kernel sqrt(|z|^2 + eps^2).
struct KernelQuadrature {
    enum class Rule { cell_exclusion, regularized };
    Rule rule = Rule::cell_exclusion;
    double epsilon = 0.0;       // regularized rule; must be <= half the spacing
    int radial_panels = 48;     // polar-aligned source (analytic profiles)
    int angular_nodes = 256;
    int cartesian_nodes = 256;  // midpoint source grid (sampled fields)

    void validate(double spacing) const;
};

/// (K * omega)(x) with K = z_perp / (2 pi |z|^2). Analytic inputs use the
/// exact radial formula unless force_quadrature is set.
Vec2 velocity_2d(const CompactVorticity& omega, Vec2 x,
                 const KernelQuadrature& quad = {}, bool force_quadrature = false);

/// Log-kernel stream function (no additive constant).
StreamFunction2D stream_2d(const CompactVorticity& omega,
                           const KernelQuadrature& quad = {},
                           bool force_quadrature = false);

/// 3D Biot-Savart velocity of a Hill-type vorticity by quadrature
/// (the closed form lives on HillVortex3D itself; this is the measured route).
Vec3 velocity_3d_quadrature(const HillVortex3D& flow, Vec3 x,
                            const KernelQuadrature& quad = {});

/// Newtonian potential E = 1/(4 pi |x|): E * f and d_k(E * f) for a radial
/// source f supported in B_L, evaluated outside the support by smooth
/// quadrature.
struct RadialSource3D {
    std::function<double(double)> f;   // f(|y|)
    double L;                          // support radius
    std::vector<double> breakpoints;   // radial smoothness breaks of f
    int radial_panels = 24;
    int mu_panels = 12;
    int angular_nodes = 32;
};
double newtonian_potential(const RadialSource3D& src, Vec3 x);
Vec3 newtonian_potential_grad(const RadialSource3D& src, Vec3 x);

/// Collar-norm growth/decay probe for E * f over Sigma_R of the ball:
/// per R, the four quantities (L2, L2 of grad, Linf, Linf of grad) plus
/// log-log fits against the predicted exponents {1/2, -1/2, -1, -2}.
struct DecayProbeResult {
    std::vector<double> R;
    std::vector<double> l2, l2_grad, linf, linf_grad;
    RateFit fit_l2, fit_l2_grad, fit_linf, fit_linf_grad;
};
DecayProbeResult convolution_decay_probe(const RadialSource3D& src,
                                         std::vector<double> R_grid);

}  // namespace vvlab
