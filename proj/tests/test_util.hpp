#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vvlab/flows.hpp"
#include "vvlab/radial_profile.hpp"

namespace vvtest {

// test-local adaptive Simpson, independent of the library quadrature
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 4096) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// 2D midpoint quadrature over a box, independent mass oracle
inline double box_integral(const std::function<double(vvlab::Vec2)>& f, double lo,
                           double hi, int n = 512) {
    const double h = (hi - lo) / n;
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += f({lo + (i + 0.5) * h, lo + (j + 0.5) * h});
    return s * h * h;
}

inline double fd1(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

// seeded random piecewise-polynomial radial profile (property tests)
inline vvlab::RadialProfilePtr random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.2, 1.0);
    std::uniform_int_distribution<int> deg(0, 3);
    const int npieces = 1 + static_cast<int>(rng() % 3);
    std::vector<vvlab::PiecewisePolyProfile::Piece> pieces;
    double lo = 0;
    for (int p = 0; p < npieces; ++p) {
        const double hi = lo + U(rng);
        std::vector<double> coef(deg(rng) + 1);
        for (auto& c : coef) c = 2.0 * U(rng) - 1.0;
        pieces.push_back(vvlab::poly_piece(lo, hi, coef));
        lo = hi;
    }
    return std::make_shared<vvlab::PiecewisePolyProfile>(pieces);
}

inline const vvlab::ReferenceFlow& flow(const char* name) {
    return vvlab::flow_by_name(name);
}

}  // namespace vvtest
