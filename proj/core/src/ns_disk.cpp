#include "vvlab/ns_disk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

#include "vvlab/truncation.hpp"

namespace vvlab {

using std::numbers::pi;

RadialMesh build_radial_mesh(const RadialNSProblem& prob) {
    const double R = prob.R;
    const double h_base = R / std::max(128, prob.base_nodes);
    const double layer = prob.nu > 0 ? std::sqrt(prob.nu * prob.T) : R;
    const double h_fine = std::clamp(layer / 8.0, R * 1e-8, h_base);
    const double h_core =
        prob.core_radius > 0 ? std::min(prob.core_radius / 128.0, h_base) : h_base;
    const double grow = 0.25;

    auto target = [&](double rho) {
        double h = h_base;
        if (prob.core_radius > 0) {
            const double d = std::max(0.0, rho - prob.core_radius);
            h = std::min(h, h_core + grow * d);
        }
        for (double b : prob.breakpoints)
            h = std::min(h, std::max(h_fine, h_core / 2) + grow * std::abs(rho - b));
        h = std::min(h, h_fine + grow * (R - rho));
        return h;
    };

    RadialMesh mesh;
    mesh.faces.push_back(0.0);
    double rho = 0.0;
    while (rho < R) {
        double h = target(rho);
        if (rho + h > R - 0.5 * h_fine) {
            // land exactly on the wall
            mesh.faces.push_back(R);
            break;
        }
        rho += h;
        mesh.faces.push_back(rho);
    }
    if (mesh.faces.back() != R) mesh.faces.push_back(R);
    const int n = static_cast<int>(mesh.faces.size()) - 1;
    mesh.centers.resize(n);
    mesh.widths.resize(n);
    for (int i = 0; i < n; ++i) {
        mesh.centers[i] = 0.5 * (mesh.faces[i] + mesh.faces[i + 1]);
        mesh.widths[i] = mesh.faces[i + 1] - mesh.faces[i];
    }
    return mesh;
}

namespace {

// tridiagonal Thomas solve, in place on rhs
void tridiag_solve(std::vector<double>& a, std::vector<double>& b,
                   std::vector<double>& c, std::vector<double>& rhs) {
    const size_t n = b.size();
    for (size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

struct Operator {
    // (L u)_i = [F_{i+1} - F_i]/(rho_i h_i) - u_i/rho_i^2 with face fluxes
    // F_j = f_j (u_j - u_{j-1}) / (rho_j - rho_{j-1}); wall: u(R) = 0.
    std::vector<double> lower, diag, upper;  // L as a tridiagonal matrix
    std::vector<double> weight;              // rho_i h_i (L2 weight / 2 pi)

    explicit Operator(const RadialMesh& mesh) {
        const int n = mesh.cells();
        lower.assign(n, 0.0);
        diag.assign(n, 0.0);
        upper.assign(n, 0.0);
        weight.resize(n);
        for (int i = 0; i < n; ++i) {
            const double rho = mesh.centers[i], h = mesh.widths[i];
            weight[i] = rho * h;
            const double inv = 1.0 / (rho * h);
            if (i > 0) {
                const double f = mesh.faces[i];
                const double d = mesh.centers[i] - mesh.centers[i - 1];
                lower[i] += inv * f / d;
                diag[i] -= inv * f / d;
            }
            if (i < n - 1) {
                const double f = mesh.faces[i + 1];
                const double d = mesh.centers[i + 1] - mesh.centers[i];
                upper[i] += inv * f / d;
                diag[i] -= inv * f / d;
            } else {
                // wall face: u = 0 at rho = R, one-sided gradient
                const double f = mesh.faces[i + 1];
                const double d = mesh.faces[i + 1] - mesh.centers[i];
                diag[i] -= inv * f / d;
            }
            diag[i] -= 1.0 / (rho * rho);
        }
    }

    void apply(std::span<const double> u, std::vector<double>& out) const {
        const size_t n = diag.size();
        out.resize(n);
        for (size_t i = 0; i < n; ++i) {
            double v = diag[i] * u[i];
            if (i > 0) v += lower[i] * u[i - 1];
            if (i + 1 < n) v += upper[i] * u[i + 1];
            out[i] = v;
        }
    }
};

}  // namespace

RadialNSSolution solve_radial_ns(const RadialNSProblem& prob) {
    if (prob.nu < 0) throw std::invalid_argument("solve_radial_ns: negative viscosity");
    if (prob.R <= 0 || prob.T < 0) throw std::invalid_argument("solve_radial_ns: bad R or T");
    if (prob.base_nodes < 128)
        throw std::invalid_argument("solve_radial_ns: need >= 128 radial nodes");
    if (prob.time_samples < 2)
        throw std::invalid_argument("solve_radial_ns: need >= 2 time samples");

    RadialNSSolution sol;
    sol.mesh = build_radial_mesh(prob);
    const int n = sol.mesh.cells();
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = prob.u0(sol.mesh.centers[i]);

    const int nsamp = std::max(prob.time_samples, 2);
    sol.sample_times.resize(nsamp);
    for (int k = 0; k < nsamp; ++k)
        sol.sample_times[k] = prob.T * k / (nsamp - 1);

    Operator L(sol.mesh);
    auto energy = [&](std::span<const double> v) {
        double e = 0;
        for (int i = 0; i < n; ++i) e += v[i] * v[i] * L.weight[i];
        return 2 * pi * e;
    };

    sol.energy.push_back(energy(u));
    if (prob.nu == 0.0) {
        // frozen dynamics
        for (int k = 0; k < nsamp; ++k) sol.samples.push_back(u);
        return sol;
    }

    const double dt = prob.T / prob.steps;
    std::vector<double> Lu, rhs(n), a(n), b(n), c(n);
    int next_sample = 0;
    double t = 0;
    auto maybe_sample = [&](double tcur) {
        while (next_sample < nsamp && sol.sample_times[next_sample] <= tcur + 1e-12 * prob.T) {
            sol.samples.push_back(u);
            ++next_sample;
        }
    };
    maybe_sample(0.0);

    auto step = [&](double tau, double theta_impl) {
        // (I - theta tau nu L) u' = (I + (1-theta) tau nu L) u
        L.apply(u, Lu);
        for (int i = 0; i < n; ++i)
            rhs[i] = u[i] + (1.0 - theta_impl) * tau * prob.nu * Lu[i];
        for (int i = 0; i < n; ++i) {
            a[i] = -theta_impl * tau * prob.nu * L.lower[i];
            b[i] = 1.0 - theta_impl * tau * prob.nu * L.diag[i];
            c[i] = -theta_impl * tau * prob.nu * L.upper[i];
        }
        tridiag_solve(a, b, c, rhs);
        // Crank-Nicolson energy identity: E' - E = 2 nu tau <L u_half, u_half>
        if (theta_impl == 0.5) {
            std::vector<double> half(n);
            for (int i = 0; i < n; ++i) half[i] = 0.5 * (u[i] + rhs[i]);
            L.apply(half, Lu);
            double diss = 0;
            for (int i = 0; i < n; ++i) diss += Lu[i] * half[i] * L.weight[i];
            const double e0 = energy(u);
            const double e1 = energy(rhs);
            const double defect = std::abs(e1 - e0 - 2 * prob.nu * tau * 2 * pi * diss);
            sol.max_energy_identity_defect =
                std::max(sol.max_energy_identity_defect,
                         defect / std::max(1e-300, e0));
        }
        u = rhs;
        const double e = energy(u);
        if (e > sol.energy.back() * (1 + 1e-12)) sol.energy_monotone = false;
        sol.energy.push_back(e);
    };

    // Rannacher start: two backward-Euler half steps smooth the impulsive
    // no-slip mismatch, then Crank-Nicolson
    step(0.5 * dt, 1.0);
    step(0.5 * dt, 1.0);
    t = dt;
    maybe_sample(t);
    for (int k = 1; k < prob.steps; ++k) {
        step(dt, 0.5);
        t += dt;
        maybe_sample(t);
    }
    maybe_sample(prob.T + 1e-9 * prob.T);
    while (static_cast<int>(sol.samples.size()) < nsamp) sol.samples.push_back(u);
    return sol;
}

double mesh_l2_error(const RadialMesh& mesh, std::span<const double> u,
                     const std::function<double(double)>& ref) {
    double acc = 0;
    for (int i = 0; i < mesh.cells(); ++i) {
        const double d = u[i] - ref(mesh.centers[i]);
        acc += d * d * mesh.centers[i] * mesh.widths[i];
    }
    return std::sqrt(2 * pi * acc);
}

namespace {

SurfaceCell run_cell(const ReferenceFlow& flow, double nu, double R, double T,
                     int base_nodes, int steps) {
    const auto& pr = *flow.flow2d->primary().profile;
    RadialNSProblem prob;
    prob.R = R;
    prob.nu = nu;
    prob.T = T;
    prob.u0 = [&pr](double rho) { return pr.u_theta(rho); };
    prob.breakpoints = pr.breakpoints();
    prob.core_radius = pr.support_radius();
    prob.base_nodes = base_nodes;
    prob.steps = steps;
    auto sol = solve_radial_ns(prob);

    SurfaceCell cell;
    cell.nu = nu;
    cell.R = R;
    cell.F = 0.0;  // centered radial data: W_R u0 = u0 restricted
    double sup = 0;
    for (const auto& snap : sol.samples)
        sup = std::max(sup, mesh_l2_error(sol.mesh, snap,
                                          [&pr](double rho) { return pr.u_theta(rho); }));
    cell.error = sup;
    cell.vacuous = nu == 0.0;
    return cell;
}

}  // namespace

ConvergenceSurface theorem11_experiment(const ReferenceFlow& flow,
                                        const Theorem11Options& opt) {
    if (flow.dimension != 2 || !flow.flow2d->single_centered())
        throw std::invalid_argument("theorem11_experiment: centered radial 2D flow required");
    for (auto* grid : {&opt.nu_grid, &opt.R_grid})
        if (grid->size() < 2)
            throw std::invalid_argument("theorem11_experiment: grids need >= 2 entries");

    ConvergenceSurface surf;
    surf.flow = flow.name;
    surf.case_tag = flow.case_tag;
    surf.theta = opt.theta;
    surf.T = opt.T;
    const double m = flow.flow2d->mass();
    surf.alpha = std::abs(m) > 1e-12 ? 0.5 - 0.5 * opt.theta : 0.5 + 0.5 * opt.theta;
    surf.nu_grid = opt.nu_grid;
    surf.R_grid = opt.R_grid;

    const int base_nodes =
        std::max(128, static_cast<int>(std::lround(opt.base_nodes * opt.resolution_scale)));
    const int steps = std::max(64, static_cast<int>(std::lround(opt.steps * opt.resolution_scale)));

    // cells in deterministic nu-major order; work pool over cell index
    struct Job {
        double nu, R;
    };
    std::vector<Job> jobs;
    for (double nu : opt.nu_grid)
        for (double R : opt.R_grid) jobs.push_back({nu, R});
    surf.cells.resize(jobs.size());
    const int nthreads = std::max(1, opt.jobs);
    std::vector<std::future<void>> fut;
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) return;
            surf.cells[i] =
                run_cell(flow, jobs[i].nu, jobs[i].R, opt.T, base_nodes, steps);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        for (int t = 0; t < nthreads; ++t) fut.push_back(std::async(std::launch::async, worker));
        for (auto& f : fut) f.get();
    }

    // smallest single constant C with error <= (C (sqrt(nu) + R^-alpha) + F) e^{CT}
    auto envelope_holds = [&](double C) {
        for (const auto& cell : surf.cells) {
            if (cell.vacuous) continue;
            const double env =
                (C * (std::sqrt(cell.nu) + std::pow(cell.R, -surf.alpha)) + cell.F) *
                std::exp(C * opt.T);
            if (cell.error > env) return false;
        }
        return true;
    };
    double hi = 1.0;
    while (!envelope_holds(hi) && hi < 1e6) hi *= 2;
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (envelope_holds(mid) ? hi : lo) = mid;
    }
    surf.fitted_C = hi;
    surf.envelope_pass = envelope_holds(hi) && hi < 1e6;
    for (auto& cell : surf.cells) {
        cell.envelope =
            (surf.fitted_C * (std::sqrt(cell.nu) + std::pow(cell.R, -surf.alpha)) + cell.F) *
            std::exp(surf.fitted_C * opt.T);
        cell.pass = cell.vacuous ? cell.error == 0.0 : cell.error <= cell.envelope;
    }

    // nu-marginal at a larger radius, where the theorem's nu-rate dominates
    surf.nu_marginal_R = opt.nu_marginal_R_factor * opt.R_grid.back();
    surf.nu_marginal_required = flow.smoothness >= 2.0 ? 1.0 : 0.5;
    {
        std::vector<double> errs;
        for (double nu : opt.nu_marginal_grid)
            errs.push_back(
                run_cell(flow, nu, surf.nu_marginal_R, opt.T, base_nodes, steps).error);
        surf.nu_marginal = fit_rate(opt.nu_marginal_grid, errs, surf.nu_marginal_required,
                                    FitSemantics::sharp, "error vs nu");
        // the theorem demands the error shrink at least this fast: the check
        // is one-sided from below, overriding the sharp-fit verdict
        surf.nu_marginal_pass = surf.nu_marginal.slope >= surf.nu_marginal_required - 0.1;
        surf.nu_marginal.pass = surf.nu_marginal_pass || surf.nu_marginal.vacuous;
    }
    // R-marginal at the smallest positive nu (needs a fittable grid)
    if (opt.R_grid.size() >= 4) {
        double nu_min = 0;
        for (double nu : opt.nu_grid)
            if (nu > 0 && (nu_min == 0 || nu < nu_min)) nu_min = nu;
        std::vector<double> errs;
        for (double R : opt.R_grid) {
            double e = 0;
            for (const auto& cell : surf.cells)
                if (cell.nu == nu_min && cell.R == R) e = cell.error;
            errs.push_back(e);
        }
        surf.R_marginal =
            fit_rate(opt.R_grid, errs, -surf.alpha, FitSemantics::upper_bound, "error vs R");
    }
    // wall-layer monotonicity: error non-decreasing in nu at fixed R
    {
        std::vector<double> nus = opt.nu_grid;
        std::sort(nus.begin(), nus.end());
        for (double R : opt.R_grid) {
            double prev = -1e300;
            for (double nu : nus)
                for (const auto& cell : surf.cells)
                    if (cell.nu == nu && cell.R == R) {
                        if (cell.error < prev * (1 - 1e-9)) surf.monotone_in_nu = false;
                        prev = cell.error;
                    }
        }
    }
    // diagonal schedule R(nu): largest nu/smallest R -> smallest nu/largest R
    {
        std::vector<double> nus = opt.nu_grid, Rs = opt.R_grid;
        std::sort(nus.begin(), nus.end(), std::greater<>());
        std::sort(Rs.begin(), Rs.end());
        const size_t d = std::min(nus.size(), Rs.size());
        double first = -1, last = -1, unorm = 0;
        {
            const auto& pr = *flow.flow2d->primary().profile;
            const double Rbig = Rs.back();
            double acc = 0;
            for (int i = 0; i < 4096; ++i) {
                const double rho = Rbig * (i + 0.5) / 4096;
                acc += 2 * pi * rho * (Rbig / 4096) * std::pow(pr.u_theta(rho), 2);
            }
            unorm = std::sqrt(acc);
        }
        for (size_t i = 0; i < d; ++i) {
            double e = 0;
            for (const auto& cell : surf.cells)
                if (cell.nu == nus[i] && cell.R == Rs[i]) e = cell.error;
            if (i == 0) first = e;
            if (i + 1 == d) last = e;
        }
        surf.diagonal_decreasing = last < first && last < 0.1 * unorm;
    }
    return surf;
}

double initial_gap_F(const ReferenceFlow& flow, double R, GapMode mode) {
    if (flow.dimension != 2)
        throw std::invalid_argument("initial_gap_F: 2D flows only");
    const double R0 = flow.flow2d->support_radius();
    if (R < 2 * R0)
        throw std::invalid_argument("initial_gap_F: requires R >= 2 R0");
    if (mode == GapMode::raw_restriction) return 0.0;
    return initial_gap_norm(*flow.flow2d, R);
}

}  // namespace vvlab
