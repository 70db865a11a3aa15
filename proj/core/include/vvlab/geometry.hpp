#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vvlab/vec.hpp"

namespace vvlab {

enum class Shape { disk, ellipse };  // "disk" doubles as the ball in 3D

/// Scaled domain Omega_R = R * Omega_1, with Omega_1 either the unit
/// disk/ball or an ellipse with semi-axes (a, b).
struct DomainSpec {
    int dimension = 2;          // 2 or 3
    Shape shape = Shape::disk;
    double a = 1.0, b = 1.0;    // ellipse semi-axes (ignored for disk)
    double R = 1.0;             // dilation factor

    bool is_disk() const { return shape == Shape::disk; }
    /// Maximum curvature of Gamma_1 (sectional curvature for the ball).
    double max_curvature() const;
    /// Distance from the origin to Gamma_1.
    double min_boundary_distance() const;
    std::string shape_name() const;

    void validate() const;  // throws std::invalid_argument
};

enum class CoordSystem { cartesian, polar };

/// Structured grid descriptor. Polar grids put radial nodes at
/// r_j = (j + 1/2) h so the axis r = 0 carries no node.
struct GridSpec {
    int dimension = 2;
    CoordSystem coords = CoordSystem::cartesian;
    std::array<int, 3> nodes{2, 2, 1};
    std::array<double, 3> lo{0, 0, 0};   // cartesian: lower corner
    std::array<double, 3> hi{1, 1, 1};   // cartesian: upper corner; polar: hi[0]=rmax
    int total_nodes() const;
    double spacing(int axis) const;
    /// Physical position of a node (polar grids map (r, angle) to x-y).
    Vec3 position(int flat_index) const;
    void validate() const;
};

/// Arc-length parametrized boundary Gamma_R with inward-normal collar
/// coordinates (s, r). Charts are built once per (shape, R) and immutable.
class TubularChart {
  public:
    TubularChart(const DomainSpec& domain, double theta);

    const DomainSpec& domain() const { return domain_; }
    double theta() const { return theta_; }
    /// Collar half-width parameter: delta_1 = 1/(2 kappa_max), possibly
    /// halved until the collar excludes the origin.
    double delta1() const { return delta1_; }
    double width() const { return width_; }            // delta_1 R^theta
    double boundary_length() const { return length_; } // |Gamma_R|

    Vec2 boundary_point(double s) const;
    Vec2 inward_normal(double s) const;
    Vec2 tangent(double s) const;
    double curvature(double s) const;  // curvature of Gamma_R at arc length s

    /// Forward map (s, r) -> x in Sigma_R.
    Vec2 from_chart(double s, double r) const;
    /// Area element of the (s, r) coordinates: J = 1 - kappa(s) r.
    double jacobian(double s, double r) const;

    /// Inverse map: nearest-boundary-point search. Returns false when x is
    /// farther than `width()` from Gamma_R (outside the collar) or outside
    /// the domain closure.
    bool to_chart(Vec2 x, double& s, double& r) const;
    /// Signed inward distance to Gamma_R (positive inside), any x.
    double boundary_distance(Vec2 x) const;

    /// Nearest-boundary-point data in one solve: inward normal, tangent and
    /// curvature at the foot point, plus the signed distance.
    void foot(Vec2 x, Vec2& nu, Vec2& tang, double& kappa, double& dist) const;

    bool inside_domain(Vec2 x) const { return boundary_distance(x) >= 0; }
    bool in_collar(Vec2 x) const;

  private:
    DomainSpec domain_;
    double theta_;
    double delta1_;
    double width_;
    double length_;

    // ellipse arc-length table: s(t) at uniform t samples, for inversion
    std::vector<double> t_samples_;
    std::vector<double> s_samples_;
    double ellipse_speed(double t) const;
    double param_from_arclength(double s) const;  // t(s) via Newton on cached table
    double nearest_param(Vec2 x) const;           // argmin_t |x - gamma_R(t)|
    Vec2 ellipse_point_t(double t) const;
};

}  // namespace vvlab
