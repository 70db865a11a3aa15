#pragma once

#include <map>
#include <string>
#include <vector>

#include "vvlab/flows.hpp"
#include "vvlab/norms.hpp"
#include "vvlab/rates.hpp"

namespace vvlab {

/// Measured truncation estimates per R: the uniformly-bounded quantities
/// (gradient/sup/Laplacian norms of u^R) plus every decaying quantity fed
/// to a log-log fit with its predicted exponent.
struct Prop51Report {
    std::string flow;
    int dimension = 2;
    double theta = 0;
    double alpha = 0, beta = 0;
    std::vector<double> R_grid;
    // rows[item][i] = value at R_grid[i]
    std::map<std::string, std::vector<double>> rows;

    struct BoundedCheck {
        std::string item;
        double max_over_min = 0;
        bool pass = false;
    };
    std::vector<BoundedCheck> bounded;  // items (1),(2),(3),(5)
    std::vector<RateFit> fits;          // items (4),(6),(6b),(7) + collar norms
};

struct Prop51Options {
    double resolution_scale = 1.0;
    bool include_laplacian = true;  // item (5), s >= 2 flows only
    double bounded_ratio = 1.25;
};

/// 2D report on the disk for a centered radial flow, or 3D on the ball for
/// the Hill vortex (theta forced to 1 in 3D).
Prop51Report proposition51_report(const ReferenceFlow& flow, double theta,
                                  std::vector<double> R_grid,
                                  const Prop51Options& opt = {});

/// Predicted truncation-error exponents per dimension, collar exponent and
/// vorticity-mass branch.
double alpha_exponent(int dimension, double theta, double mass);
double beta_exponent(int dimension, double theta, double mass);

}  // namespace vvlab
