#include "vvlab/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace vvlab {

std::string RateFit::verdict() const {
    if (vacuous) return "identically zero, rate vacuous";
    return pass ? "pass" : "fail";
}

RateFit fit_rate(std::vector<double> abscissa, std::vector<double> values,
                 double predicted, FitSemantics semantics, std::string quantity) {
    if (abscissa.size() != values.size())
        throw std::invalid_argument("fit_rate: abscissa/value size mismatch");
    if (abscissa.size() < 4)
        throw std::invalid_argument("fit_rate: need >= 4 points");
    for (double a : abscissa)
        if (a <= 0) throw std::invalid_argument("fit_rate: abscissae must be positive");
    // geometric grid check
    const double ratio = abscissa[1] / abscissa[0];
    for (size_t i = 0; i + 1 < abscissa.size(); ++i) {
        const double r = abscissa[i + 1] / abscissa[i];
        if (std::abs(r - ratio) > 1e-9 * ratio)
            throw std::invalid_argument("fit_rate: abscissae must be geometric");
    }

    RateFit fit;
    fit.abscissa = std::move(abscissa);
    fit.values = std::move(values);
    fit.predicted = predicted;
    fit.semantics = semantics;
    fit.quantity = std::move(quantity);

    // identically-zero data (exact truncation, frozen dynamics): the rate
    // claim is empty; roundoff-level values count as zero
    double vmax = 0;
    for (double v : fit.values) vmax = std::max(vmax, std::abs(v));
    if (vmax <= 1e-13) {
        fit.vacuous = true;
        fit.pass = true;
        return fit;
    }
    for (double v : fit.values)
        if (v <= 0)
            throw std::invalid_argument("fit_rate: non-positive values, log undefined");

    const size_t n = fit.values.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(fit.abscissa[i]);
        ly[i] = std::log(fit.values[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < n; ++i)
        fit.max_residual = std::max(
            fit.max_residual, std::abs(ly[i] - fit.slope * lx[i] - fit.intercept));

    if (semantics == FitSemantics::upper_bound)
        fit.pass = fit.slope <= predicted + 0.1;
    else
        fit.pass = std::abs(fit.slope - predicted) <= 0.1;
    return fit;
}

RateFit ray_decay_fit(const std::function<double(double)>& magnitude_at_radius,
                      double r0, double ratio, int n, double predicted,
                      FitSemantics semantics, std::string quantity) {
    if (n < 4) throw std::invalid_argument("ray_decay_fit: need >= 4 radii");
    if (ratio <= 1.0) throw std::invalid_argument("ray_decay_fit: ratio must exceed 1");
    std::vector<double> rs(n), vs(n);
    double r = r0;
    for (int i = 0; i < n; ++i) {
        rs[i] = r;
        vs[i] = magnitude_at_radius(r);
        r *= ratio;
    }
    return fit_rate(std::move(rs), std::move(vs), predicted, semantics,
                    std::move(quantity));
}

}  // namespace vvlab
