#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vvlab {

enum class FitSemantics { upper_bound, sharp };

/// Log-log regression of values against a geometric abscissa grid, judged
/// against a predicted exponent. `vacuous` marks an identically-zero data
/// set (exact truncation, frozen dynamics) whose rate claim is empty.
struct RateFit {
    std::vector<double> abscissa;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;     // log of the fitted constant
    double max_residual = 0.0;  // in log space
    double predicted = 0.0;
    FitSemantics semantics = FitSemantics::upper_bound;
    bool pass = false;
    bool vacuous = false;
    std::string quantity;

    std::string verdict() const;
};

/// OLS on (log a_i, log v_i). Requires >= 4 points on a geometric grid and
/// positive values; an all-(near-)zero data set yields a vacuous fit, mixed
/// signs/zeros throw std::invalid_argument. Pass criteria:
///   upper_bound: slope <= predicted + 0.1
///   sharp:       |slope - predicted| <= 0.1
RateFit fit_rate(std::vector<double> abscissa, std::vector<double> values,
                 double predicted, FitSemantics semantics,
                 std::string quantity = {});

/// Sample |field| at geometrically spaced radii along a ray and fit the
/// decay exponent; radiiast r0 * ratio^k, k = 0..n-1.
RateFit ray_decay_fit(const std::function<double(double)>& magnitude_at_radius,
                      double r0, double ratio, int n, double predicted,
                      FitSemantics semantics, std::string quantity = {});

}  // namespace vvlab
