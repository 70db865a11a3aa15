#pragma once

#include <functional>
#include <span>
#include <string>

#include "vvlab/geometry.hpp"

namespace vvlab {

enum class NormKind { L2, Linf, H1semi };

struct QuadratureOptions {
    int base_panels = 8;
    double rel_tol = 0.005;  // adaptive doubling stops at 0.5% change
    double abs_tol = 0.0;    // values below this count as converged (zero data)
    int max_levels = 6;
    double scale = 1.0;      // global resolution multiplier
};

struct NormReport {
    std::string region;
    NormKind kind = NormKind::L2;
    double value = 0.0;
    int resolution = 0;      // panels at convergence
    double quad_error = 0.0; // relative change on the last doubling
};

/// L2 norms integrate the squared magnitude; Linf takes the max over the
/// refined node set; H1semi is L2 applied to a caller-supplied gradient
/// magnitude. All adaptively double panels until the report moves < rel_tol.
/// Throws std::runtime_error when the refinement does not settle.

/// 2D radial integrand over the annulus a <= rho <= b, weight 2 pi rho.
NormReport norm_radial_2d(const std::function<double(double)>& magnitude,
                          double a, double b, std::span<const double> breakpoints,
                          NormKind kind, const QuadratureOptions& opt = {});

/// 3D radial integrand over the shell a <= r <= b, weight 4 pi r^2.
NormReport norm_radial_3d(const std::function<double(double)>& magnitude,
                          double a, double b, std::span<const double> breakpoints,
                          NormKind kind, const QuadratureOptions& opt = {});

/// Polar tensor quadrature over the annulus (disk-shaped domains, general
/// integrand).
NormReport norm_polar_2d(const std::function<double(Vec2)>& magnitude,
                         double a, double b, NormKind kind,
                         const QuadratureOptions& opt = {});

/// Collar Sigma_R in tubular coordinates with the exact Jacobian.
NormReport norm_collar_2d(const std::function<double(Vec2)>& magnitude,
                          const TubularChart& chart, NormKind kind,
                          const QuadratureOptions& opt = {});

/// Axisymmetric 3D integrand f(rho, z) over the shell a <= r <= b
/// (meridian half-plane quadrature, weight 2 pi rho).
NormReport norm_shell_3d(const std::function<double(double, double)>& magnitude,
                         double a, double b, NormKind kind,
                         const QuadratureOptions& opt = {},
                         std::span<const double> breakpoints = {});

/// 4th-order central-difference gradient for evaluators without an analytic
/// derivative.
Vec2 fd_gradient(const std::function<double(Vec2)>& f, Vec2 x, double h);

}  // namespace vvlab
