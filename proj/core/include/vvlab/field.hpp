#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "vvlab/flows.hpp"
#include "vvlab/geometry.hpp"

namespace vvlab {

/// Scalar or vector field sampled on a structured grid.
struct SampledField {
    GridSpec grid;
    int components = 1;
    std::vector<double> values;  // node-major: values[node * components + c]

    double& at(int node, int c) { return values[static_cast<size_t>(node) * components + c]; }
    double at(int node, int c) const { return values[static_cast<size_t>(node) * components + c]; }
    void validate() const;  // size and finiteness
};

/// 2nd-order curl on cartesian grids: scalar in 2D, 3-vector in 3D.
/// One-sided 2nd-order stencils at grid edges. Rejects scalar input.
SampledField curl(const SampledField& field);

/// Compactly supported vorticity: analytic superposition of radial pieces
/// or a sampled grid field. 2D only (the 3D carrier is HillVortex3D).
struct CompactVorticity {
    double R0 = 1.0;  // support radius about the origin
    std::shared_ptr<const Flow2D> analytic;     // preferred representation
    std::optional<SampledField> sampled;        // fallback

    bool is_analytic() const { return analytic != nullptr; }
    double omega(Vec2 x) const;
    /// Total mass by quadrature (trusted to 1e-10 analytic / 1e-6 sampled).
    double mass() const;
    void validate() const;

    static CompactVorticity from_flow(std::shared_ptr<const Flow2D> f);
    static CompactVorticity from_samples(SampledField f, double R0);
};

/// u = v + sigma splitting of a finite-mass 2D flow: sigma is a fixed-bump
/// radial vortex carrying the total mass, v has zero-mass vorticity.
struct EmDecomposition {
    Flow2D v_part;          // omega(v) = omega(u) - omega(sigma), zero mass
    RadialVortex2D sigma;   // bump vortex, mass m, support in B_{R0}
    double m = 0.0;
    std::string bump_description;
};

/// Build sigma from a radial profile phi supported in [0, R0]:
/// u_theta = (1/r) int_0^r s phi ds. Rejects sign-changing phi and R0 <= 0.
RadialVortex2D make_sigma(const RadialProfilePtr& phi, double R0);

/// Decompose omega into the canonical bump sigma plus a zero-mass remainder.
/// Fails if the support of omega exceeds the declared R0.
EmDecomposition em_decompose(const CompactVorticity& omega);

}  // namespace vvlab
