#include "vvlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

using std::numbers::pi;

void SampledField::validate() const {
    grid.validate();
    if (components < 1 || components > 3)
        throw std::invalid_argument("SampledField: components must be 1..3");
    if (values.size() != static_cast<size_t>(grid.total_nodes()) * components)
        throw std::invalid_argument("SampledField: value array length mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("SampledField: non-finite entry");
}

namespace {

// one-dimensional 2nd-order derivative along an axis, one-sided at edges
double d_axis(const SampledField& f, int comp, const std::array<int, 3>& idx,
              int axis) {
    const auto& g = f.grid;
    const double h = g.spacing(axis);
    const int n = g.nodes[axis];
    auto flat = [&](std::array<int, 3> i) {
        int stride = 1, k = 0;
        for (int d = 0; d < g.dimension; ++d) {
            k += i[d] * stride;
            stride *= g.nodes[d];
        }
        return k;
    };
    std::array<int, 3> ip = idx, im = idx;
    const int i = idx[axis];
    if (i == 0) {
        ip[axis] = 1;
        im[axis] = 2;
        return (-3.0 * f.at(flat(idx), comp) + 4.0 * f.at(flat(ip), comp) -
                f.at(flat(im), comp)) /
               (2.0 * h);
    }
    if (i == n - 1) {
        ip[axis] = n - 2;
        im[axis] = n - 3;
        return (3.0 * f.at(flat(idx), comp) - 4.0 * f.at(flat(ip), comp) +
                f.at(flat(im), comp)) /
               (2.0 * h);
    }
    ip[axis] = i + 1;
    im[axis] = i - 1;
    return (f.at(flat(ip), comp) - f.at(flat(im), comp)) / (2.0 * h);
}

}  // namespace

SampledField curl(const SampledField& field) {
    field.validate();
    if (field.grid.coords != CoordSystem::cartesian)
        throw std::invalid_argument("curl: cartesian grid required");
    if (field.components < 2)
        throw std::invalid_argument("curl: input must be a vector field");
    const auto& g = field.grid;
    if (field.components != g.dimension)
        throw std::invalid_argument("curl: components must match grid dimension");
    for (int d = 0; d < g.dimension; ++d)
        if (g.nodes[d] < 3)
            throw std::invalid_argument("curl: need >= 3 nodes per axis");

    SampledField out;
    out.grid = g;
    out.components = g.dimension == 2 ? 1 : 3;
    out.values.assign(static_cast<size_t>(g.total_nodes()) * out.components, 0.0);

    const int n = g.total_nodes();
    for (int node = 0; node < n; ++node) {
        std::array<int, 3> idx{0, 0, 0};
        int rem = node;
        for (int d = 0; d < g.dimension; ++d) {
            idx[d] = rem % g.nodes[d];
            rem /= g.nodes[d];
        }
        if (g.dimension == 2) {
            out.at(node, 0) = d_axis(field, 1, idx, 0) - d_axis(field, 0, idx, 1);
        } else {
            out.at(node, 0) = d_axis(field, 2, idx, 1) - d_axis(field, 1, idx, 2);
            out.at(node, 1) = d_axis(field, 0, idx, 2) - d_axis(field, 2, idx, 0);
            out.at(node, 2) = d_axis(field, 1, idx, 0) - d_axis(field, 0, idx, 1);
        }
    }
    return out;
}

double CompactVorticity::omega(Vec2 x) const {
    if (analytic) return analytic->vorticity(x);
    // nearest-node lookup on the sampled grid
    const auto& g = sampled->grid;
    if (g.coords != CoordSystem::cartesian)
        throw std::invalid_argument("CompactVorticity: sampled path requires cartesian grid");
    std::array<int, 3> idx{0, 0, 0};
    const double pos[2] = {x.x, x.y};
    for (int d = 0; d < 2; ++d) {
        const double t = (pos[d] - g.lo[d]) / g.spacing(d);
        idx[d] = std::clamp(static_cast<int>(std::lround(t)), 0, g.nodes[d] - 1);
    }
    return sampled->at(idx[0] + g.nodes[0] * idx[1], 0);
}

double CompactVorticity::mass() const {
    if (analytic) {
        double m = 0;
        for (const auto& p : analytic->parts) m += p.mass();
        return m;
    }
    const auto& g = sampled->grid;
    const double cell = g.spacing(0) * g.spacing(1);
    double m = 0;
    for (int i = 0; i < g.total_nodes(); ++i) m += sampled->at(i, 0);
    return m * cell;
}

void CompactVorticity::validate() const {
    if (!analytic && !sampled)
        throw std::invalid_argument("CompactVorticity: empty");
    if (analytic && analytic->support_radius() > R0 * (1 + 1e-12))
        throw std::invalid_argument("CompactVorticity: support exceeds declared R0");
    if (sampled) sampled->validate();
}

CompactVorticity CompactVorticity::from_flow(std::shared_ptr<const Flow2D> f) {
    CompactVorticity cv;
    cv.R0 = f->support_radius();
    cv.analytic = std::move(f);
    return cv;
}

CompactVorticity CompactVorticity::from_samples(SampledField f, double R0) {
    CompactVorticity cv;
    cv.R0 = R0;
    cv.sampled = std::move(f);
    cv.validate();
    return cv;
}

RadialVortex2D make_sigma(const RadialProfilePtr& phi, double R0) {
    if (R0 <= 0) throw std::invalid_argument("make_sigma: R0 must be positive");
    if (phi->support_radius() > R0 * (1 + 1e-12))
        throw std::invalid_argument("make_sigma: profile support exceeds R0");
    // distinguished sign: no sign change over a dense scan
    int sign = 0;
    for (int i = 0; i <= 4096; ++i) {
        const double w = phi->omega(phi->support_radius() * i / 4096.0);
        if (w == 0.0) continue;
        const int s = w > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign)
            throw std::invalid_argument("make_sigma: profile must be single-signed");
    }
    return RadialVortex2D{phi, {0, 0}};
}

EmDecomposition em_decompose(const CompactVorticity& omega) {
    omega.validate();
    if (!omega.is_analytic())
        throw std::invalid_argument("em_decompose: analytic vorticity required");

    EmDecomposition out;
    out.m = omega.mass();
    auto bump = sigma_bump_profile(out.m, omega.R0);
    out.sigma = RadialVortex2D{bump, {0, 0}};
    out.bump_description = "exp(1 - 1/(1 - (r/R0)^2)) scaled to mass m on [0, R0)";

    out.v_part = *omega.analytic;
    // omega(v) = omega(u) - omega(sigma): append the negated bump
    auto neg = sigma_bump_profile(-out.m, omega.R0);
    out.v_part.parts.push_back(RadialVortex2D{neg, {0, 0}});
    return out;
}

}  // namespace vvlab
