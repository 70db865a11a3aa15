#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vvlab {

/// Gauss-Legendre nodes/weights on [-1,1]; n in {4, 8, 16}.
std::span<const double> gauss_nodes(int n);
std::span<const double> gauss_weights(int n);

/// Integrate f over [a,b] with an npanel x GL(order) composite rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int npanels, int order = 16);

/// Adaptive panel-doubling integration: refines until the relative change
/// between successive levels drops below rel_tol or max_levels is hit.
/// Throws std::runtime_error on non-convergence when strict, else returns
/// the last estimate.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int initial_panels = 8,
                          int max_levels = 12, bool strict = true);

/// Panelization of [a,b] honoring interior breakpoints, for integrands that
/// are smooth per sub-interval only. Every breakpoint lands on a panel edge.
std::vector<double> make_panels(double a, double b,
                                std::span<const double> breakpoints,
                                int panels_per_piece);

/// Integrate f over panel edges E with GL(order) per panel.
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> edges, int order = 16);

/// Cumulative quadrature of an integrand on a fixed panelization: supports
/// exact-in-quadrature evaluation of F(t) = int_a^t f at arbitrary t by
/// combining stored per-panel sums with a partial-panel Gauss rule.
class CumulativeQuadrature {
  public:
    CumulativeQuadrature() = default;
    CumulativeQuadrature(std::function<double(double)> f,
                         std::vector<double> edges, int order = 16);

    double lower() const { return edges_.front(); }
    double upper() const { return edges_.back(); }
    /// F(t) = integral from lower() to t.
    double operator()(double t) const;
    double total() const { return cumsum_.back(); }

  private:
    std::function<double(double)> f_;
    std::vector<double> edges_;
    std::vector<double> cumsum_;  // cumsum_[i] = integral over first i panels
    int order_ = 16;
};

}  // namespace vvlab
