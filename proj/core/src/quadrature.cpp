#include "vvlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

namespace {

const double g4x[] = {-0.8611363115940525752, -0.3399810435848562648,
                      0.3399810435848562648, 0.8611363115940525752};
const double g4w[] = {0.3478548451374538574, 0.6521451548625461426,
                      0.6521451548625461426, 0.3478548451374538574};

const double g8x[] = {-0.9602898564975362317, -0.7966664774136267395,
                      -0.5255324099163289858, -0.1834346424956498049,
                      0.1834346424956498049,  0.5255324099163289858,
                      0.7966664774136267395,  0.9602898564975362317};
const double g8w[] = {0.1012285362903762592, 0.2223810344533744705,
                      0.3137066458778872873, 0.3626837833783619830,
                      0.3626837833783619830, 0.3137066458778872873,
                      0.2223810344533744705, 0.1012285362903762592};

const double g16x[] = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.0950125098376374402, 0.0950125098376374402,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};
const double g16w[] = {
    0.0271524594117540949, 0.0622535239386478929, 0.0951585116824927848,
    0.1246289712555338720, 0.1495959888165767320, 0.1691565193950025382,
    0.1826034150449235889, 0.1894506104550684963, 0.1894506104550684963,
    0.1826034150449235889, 0.1691565193950025382, 0.1495959888165767320,
    0.1246289712555338720, 0.0951585116824927848, 0.0622535239386478929,
    0.0271524594117540949};

double panel_sum(const std::function<double(double)>& f, double a, double b,
                 int order) {
    auto xs = gauss_nodes(order);
    auto ws = gauss_weights(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (size_t i = 0; i < xs.size(); ++i) s += ws[i] * f(mid + half * xs[i]);
    return s * half;
}

}  // namespace

std::span<const double> gauss_nodes(int n) {
    switch (n) {
        case 4: return {g4x, 4};
        case 8: return {g8x, 8};
        case 16: return {g16x, 16};
        default: throw std::invalid_argument("gauss_nodes: order must be 4, 8 or 16");
    }
}

std::span<const double> gauss_weights(int n) {
    switch (n) {
        case 4: return {g4w, 4};
        case 8: return {g8w, 8};
        case 16: return {g16w, 16};
        default: throw std::invalid_argument("gauss_weights: order must be 4, 8 or 16");
    }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int npanels, int order) {
    if (npanels < 1) throw std::invalid_argument("integrate: npanels < 1");
    const double h = (b - a) / npanels;
    double s = 0;
    for (int p = 0; p < npanels; ++p)
        s += panel_sum(f, a + p * h, a + (p + 1) * h, order);
    return s;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int initial_panels,
                          int max_levels, bool strict) {
    int n = initial_panels;
    double prev = integrate(f, a, b, n, 16);
    for (int level = 0; level < max_levels; ++level) {
        n *= 2;
        double cur = integrate(f, a, b, n, 16);
        double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
    }
    if (strict)
        throw std::runtime_error("integrate_adaptive: no convergence to requested tolerance");
    return prev;
}

std::vector<double> make_panels(double a, double b,
                                std::span<const double> breakpoints,
                                int panels_per_piece) {
    std::vector<double> knots{a, b};
    for (double t : breakpoints)
        if (t > a && t < b) knots.push_back(t);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> edges;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        for (int p = 0; p < panels_per_piece; ++p)
            edges.push_back(lo + (hi - lo) * p / panels_per_piece);
    }
    edges.push_back(b);
    return edges;
}

double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> edges, int order) {
    double s = 0;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        s += panel_sum(f, edges[i], edges[i + 1], order);
    return s;
}

CumulativeQuadrature::CumulativeQuadrature(std::function<double(double)> f,
                                           std::vector<double> edges, int order)
    : f_(std::move(f)), edges_(std::move(edges)), order_(order) {
    if (edges_.size() < 2)
        throw std::invalid_argument("CumulativeQuadrature: need at least one panel");
    cumsum_.resize(edges_.size());
    cumsum_[0] = 0;
    for (size_t i = 0; i + 1 < edges_.size(); ++i)
        cumsum_[i + 1] = cumsum_[i] + panel_sum(f_, edges_[i], edges_[i + 1], order_);
}

double CumulativeQuadrature::operator()(double t) const {
    if (t <= edges_.front()) return 0;
    if (t >= edges_.back()) return cumsum_.back();
    auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
    size_t p = static_cast<size_t>(it - edges_.begin()) - 1;
    return cumsum_[p] + panel_sum(f_, edges_[p], t, order_);
}

}  // namespace vvlab
