// Acceptance suite: property-based rate verification at desk scale.
// One line per criterion; exit status reflects the aggregate verdict.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "vvlab/biot_savart.hpp"
#include "vvlab/experiment.hpp"
#include "vvlab/field.hpp"
#include "vvlab/norms.hpp"
#include "vvlab/ns_disk.hpp"
#include "vvlab/prop51.hpp"
#include "vvlab/truncation.hpp"

using namespace vvlab;
using std::numbers::pi;

namespace {

int g_failures = 0;

void record(const std::string& name, bool pass, const std::string& detail = {}) {
    std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

RunManifest run_text(const std::string& text) {
    auto cfg = ExperimentConfig::parse_text(text);
    cfg.validate();
    return run(cfg);
}

// criterion 1: 2D truncation rates, case I (alpha = 1 at theta = 1, beta = 2)
void criterion1() {
    for (const char* flow : {"patch-I-off", "smooth-I-off"}) {
        const auto& f = flow_by_name(flow);
        DomainSpec disk{2, Shape::disk, 1, 1, 1};
        std::vector<double> Rs{16, 32, 64, 128};
        std::vector<double> diff, grad;
        for (double R : Rs) {
            auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(disk, 1.0, R));
            auto tf = truncate_2d(f.flow2d, cutoff, {});
            QuadratureOptions q;
            diff.push_back(norm_collar_2d([&](Vec2 x) { return tf.diff(x).norm(); },
                                          cutoff->chart(), NormKind::L2, q)
                               .value);
            grad.push_back(norm_collar_2d([&](Vec2 x) { return tf.grad_diff(x).frobenius(); },
                                          cutoff->chart(), NormKind::L2, q)
                               .value);
        }
        auto fd = fit_rate(Rs, diff, -1.0, FitSemantics::upper_bound, "u - T_R u");
        auto fg = fit_rate(Rs, grad, -2.0, FitSemantics::upper_bound, "grad(u - T_R u)");
        std::ostringstream os;
        os << "slope=" << fd.slope << " (<= -0.9), grad slope=" << fg.slope << " (<= -1.9)";
        record(std::string("criterion 1: 2D case I truncation rate, ") + flow,
               fd.slope <= -0.9 && fg.slope <= -1.9, os.str());
    }
}

// criterion 2: 2D case II at theta = 1/3 plus the theta-dependence check
void criterion2() {
    for (const char* flow : {"patch-II", "smooth-II"}) {
        auto m = run_text(std::string("experiment = truncation-rates-2d\nflow = ") + flow +
                          "\ntheta = 0.33333333333333331\nR_grid = 27 81 243 729\n");
        const auto& f = flow_by_name(flow);
        DomainSpec disk{2, Shape::disk, 1, 1, 1};
        std::vector<double> Rs{27, 81, 243, 729}, diff;
        for (double R : Rs) {
            auto cutoff =
                std::make_shared<CutoffFunction>(build_cutoff(disk, 1.0 / 3.0, R));
            auto tf = truncate_2d(f.flow2d, cutoff, {});
            std::vector<double> bp{R - 0.5 * cutoff->collar_width()};
            diff.push_back(norm_radial_2d(
                               [&](double r) { return std::abs(tf.diff_radial(r)); },
                               R - cutoff->collar_width(), R, bp, NormKind::L2)
                               .value);
        }
        auto fit = fit_rate(Rs, diff, -1.0 / 3.0, FitSemantics::upper_bound, "u - T_R u");
        std::ostringstream os;
        os << "slope=" << fit.slope << " (<= " << -1.0 / 3 + 0.1 << "), manifest "
           << (m.pass ? "pass" : "fail");
        record(std::string("criterion 2: 2D case II truncation rate, ") + flow,
               fit.slope <= -1.0 / 3.0 + 0.1 && m.pass, os.str());
    }
    // theta-dependence: at theta = 1 with m != 0 the branch exponent is 0
    const auto& f = flow_by_name("patch-II");
    DomainSpec disk{2, Shape::disk, 1, 1, 1};
    std::vector<double> Rs{27, 81, 243, 729}, diff;
    for (double R : Rs) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(disk, 1.0, R));
        auto tf = truncate_2d(f.flow2d, cutoff, {});
        std::vector<double> bp{R - 0.5 * cutoff->collar_width()};
        diff.push_back(
            norm_radial_2d([&](double r) { return std::abs(tf.diff_radial(r)); },
                           R - cutoff->collar_width(), R, bp, NormKind::L2)
                .value);
    }
    auto fit = fit_rate(Rs, diff, 0.0, FitSemantics::upper_bound, "u - T_R u theta=1");
    std::ostringstream os;
    os << "slope=" << fit.slope << " (<= 0.1)";
    record("criterion 2: theta-dependence (theta = 1, m != 0)", fit.slope <= 0.1, os.str());
}

// criterion 3: 3D truncation rates for the mollified Hill vortex
void criterion3() {
    auto m = run_text(
        "experiment = truncation-rates-3d\nflow = hill-III\nR_grid = 8 16 32 64\n");
    const auto& f = flow_by_name("hill-III");
    DomainSpec ball{3, Shape::disk, 1, 1, 1};
    std::vector<double> Rs{8, 16, 32, 64}, diff, grad;
    for (double R : Rs) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(ball, 1.0, R));
        auto tf = truncate_3d(f.flow3d, cutoff);
        const double edge = R - cutoff->collar_width();
        std::vector<double> bp{R - 0.5 * cutoff->collar_width()};
        diff.push_back(norm_shell_3d(
                           [&](double rho, double z) {
                               return tf.diff({rho, 0.0, z}).norm();
                           },
                           edge, R, NormKind::L2, {}, bp)
                           .value);
        grad.push_back(norm_shell_3d(
                           [&](double rho, double z) {
                               return tf.grad_diff({rho, 0.0, z}).frobenius();
                           },
                           edge, R, NormKind::L2, {}, bp)
                           .value);
    }
    auto fd = fit_rate(Rs, diff, -0.5, FitSemantics::upper_bound, "u - T_R u 3D");
    auto fg = fit_rate(Rs, grad, -1.5, FitSemantics::upper_bound, "grad(u - T_R u) 3D");
    std::ostringstream os;
    os << "slope=" << fd.slope << " (<= -0.4), grad slope=" << fg.slope << " (<= -1.4)";
    record("criterion 3: 3D truncation rates (mollified Hill)",
           fd.slope <= -0.4 && fg.slope <= -1.4 && m.pass, os.str());
}

// criterion 4: far-field decay suite
void criterion4() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> U(0.1, 2 * pi);
    struct Probe {
        std::string name;
        Flow2D v;
    };
    std::vector<Probe> probes;
    probes.push_back({"patch-I-off", *flow_by_name("patch-I-off").flow2d});
    probes.push_back({"smooth-I-off", *flow_by_name("smooth-I-off").flow2d});
    {
        auto dec = em_decompose(
            CompactVorticity::from_flow(flow_by_name("smooth-II-off").flow2d));
        probes.push_back({"v-part of smooth-II-off", dec.v_part});
    }
    for (const auto& p : probes) {
        const double R0 = 2.0;  // all supports sit inside B_2
        const double ang = U(rng);
        const Vec2 dir{std::cos(ang), std::sin(ang)};
        auto fv = ray_decay_fit([&](double r) { return p.v.velocity(r * dir).norm(); },
                                2 * R0, 2.0, 6, -2.0, FitSemantics::upper_bound, "v");
        auto fg = ray_decay_fit(
            [&](double r) { return p.v.velocity_grad(r * dir).frobenius(); }, 2 * R0,
            2.0, 6, -3.0, FitSemantics::upper_bound, "grad v");
        auto fp = ray_decay_fit([&](double r) { return std::abs(p.v.psi(r * dir)); },
                                2 * R0, 2.0, 6, -1.0, FitSemantics::upper_bound, "psi_v");
        std::ostringstream os;
        os << "v=" << fv.slope << " (<= -1.9), grad v=" << fg.slope
           << " (<= -2.9), psi_v=" << fp.slope << " (<= -0.9)";
        record("criterion 4: zero-mass decay, " + p.name,
               fv.slope <= -1.9 && fg.slope <= -2.9 && fp.slope <= -0.9, os.str());
    }
    const auto& hill = *flow_by_name("hill-III").flow3d;
    const double a1 = U(rng), a2 = U(rng);
    Vec3 dir{std::cos(a1) * std::sin(a2), std::sin(a1) * std::sin(a2), std::cos(a2)};
    auto fh = ray_decay_fit([&](double r) { return hill.velocity(r * dir).norm(); }, 2.0,
                            2.0, 6, -2.0, FitSemantics::upper_bound, "hill");
    std::ostringstream os;
    os << "slope=" << fh.slope << " (<= -1.9)";
    record("criterion 4: 3D Hill far-field decay", fh.pass, os.str());
}

// criterion 5: Newtonian-potential collar norms
void criterion5() {
    auto m = run_text("experiment = lemma81-probe\nR_grid = 8 16 32 64\n");
    RadialSource3D src;
    src.f = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
    src.L = 1.0;
    src.breakpoints = {1.0};
    auto probe = convolution_decay_probe(src, {8, 16, 32, 64});
    const bool pass = std::abs(probe.fit_l2.slope - 0.5) <= 0.1 &&
                      std::abs(probe.fit_l2_grad.slope + 0.5) <= 0.1 &&
                      std::abs(probe.fit_linf.slope + 1.0) <= 0.1 &&
                      std::abs(probe.fit_linf_grad.slope + 2.0) <= 0.1;
    std::ostringstream os;
    os << "exponents: " << probe.fit_l2.slope << ", " << probe.fit_l2_grad.slope << ", "
       << probe.fit_linf.slope << ", " << probe.fit_linf_grad.slope
       << " vs {0.5, -0.5, -1, -2} +- 0.1";
    record("criterion 5: Newtonian potential collar-norm exponents", pass && m.pass,
           os.str());
}

// criterion 6: the two W_R routes agree; orthogonality battery
void criterion6() {
    auto m = run_text("experiment = projection-equivalence\nR_grid = 6\n");
    record("criterion 6: projection equivalence (vorticity vs helmholtz)", m.pass,
           m.pass ? "route discrepancies <= 1e-6, orthogonality <= 1e-8 on 3 flows"
                  : "see manifest checks");
}

// criterion 7: theorem 1.1 surfaces
void criterion7() {
    for (const char* flow : {"patch-II", "smooth-II"}) {
        Theorem11Options opt;
        opt.nu_grid = {0.0, 1e-5, 1e-4, 1e-3, 1e-2};
        opt.R_grid = {27, 81, 243, 729};
        opt.T = 1.0;
        opt.theta = 1.0 / 3.0;
        opt.jobs = 2;
        auto surf = theorem11_experiment(flow_by_name(flow), opt);
        bool cells_ok = true;
        double zero_col = 0;
        int covered = 0;
        for (const auto& cell : surf.cells) {
            if (cell.vacuous) {
                zero_col = std::max(zero_col, cell.error);
            } else {
                cells_ok &= cell.error <= cell.envelope;
                ++covered;
            }
        }
        std::ostringstream os;
        os << "fitted C=" << surf.fitted_C << ", " << covered
           << " cells covered=" << cells_ok << ", nu=0 column max error=" << zero_col;
        const bool is_smooth = std::string(flow) == "smooth-II";
        bool pass = surf.envelope_pass && cells_ok && zero_col == 0.0 &&
                    surf.monotone_in_nu && surf.diagonal_decreasing;
        if (is_smooth) {
            os << ", nu-marginal slope=" << surf.nu_marginal.slope << " (>= 0.9 at R="
               << surf.nu_marginal_R << ")";
            pass &= surf.nu_marginal_pass;
        }
        record(std::string("criterion 7: theorem 1.1 surface, ") + flow, pass, os.str());
    }
}

// criterion 8: the ellipse failure mode
void criterion8() {
    auto m = run_text(
        "experiment = non-disk-failure\nflow = patch-II\nshape = ellipse\n"
        "ellipse_a = 1.0\nellipse_b = 0.5\ntheta = 1.0\nR_grid = 16 32 64 128\n");
    const auto& f = flow_by_name("patch-II");
    DomainSpec ell{2, Shape::ellipse, 1.0, 0.5, 1};
    std::vector<double> Rs{16, 32, 64, 128}, diff;
    for (double R : Rs) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(ell, 1.0, R));
        auto tf = truncate_2d(f.flow2d, cutoff, StreamNormalization::mean_zero_collar);
        diff.push_back(norm_collar_2d([&](Vec2 x) { return tf.diff(x).norm(); },
                                      cutoff->chart(), NormKind::L2)
                           .value);
    }
    auto fit = fit_rate(Rs, diff, 0.0, FitSemantics::upper_bound, "ellipse diff");
    std::ostringstream os;
    os << "slope=" << fit.slope << " (>= -0.05: no decay)";
    record("criterion 8: non-disk failure mode (mean-zero ellipse, m != 0)",
           fit.slope >= -0.05 && m.pass, os.str());
}

// criterion 9: oracle suites
void criterion9() {
    auto patch = CompactVorticity::from_flow(flow_by_name("patch-II").flow2d);
    KernelQuadrature q;
    q.radial_panels = 96;
    q.angular_nodes = 256;
    double worst2d = 0;
    for (Vec2 x : {Vec2{2.0, 0.0}, Vec2{1.3, -0.8}, Vec2{-2.5, 0.7}}) {
        const Vec2 exact = velocity_2d(patch, x);
        worst2d = std::max(worst2d,
                           (velocity_2d(patch, x, q, true) - exact).norm() / exact.norm());
    }
    const auto& hill = *flow_by_name("hill-classical").flow3d;
    const Vec3 uq = velocity_3d_quadrature(hill, {0, 0, 0}, q);
    const double rel3d = std::abs(uq.z - 2.5) / 2.5;
    std::ostringstream os;
    os << "2D rel err=" << worst2d << ", 3D center rel err=" << rel3d << " (<= 1e-6)";
    record("criterion 9: Biot-Savart quadrature vs closed forms",
           worst2d <= 1e-6 && rel3d <= 1e-6, os.str());

    const double kJ11 = 3.8317059702075123156;
    const double R = 2.0, nu = 1e-2;
    const double T = R * R / (nu * kJ11 * kJ11);
    RadialNSProblem prob;
    prob.R = R;
    prob.nu = nu;
    prob.T = T;
    prob.u0 = [&](double rho) { return std::cyl_bessel_j(1, kJ11 * rho / R); };
    prob.base_nodes = 512;
    prob.steps = 512;
    auto sol = solve_radial_ns(prob);
    double num = 0, den = 0;
    const auto& u = sol.samples.back();
    for (int i = 0; i < sol.mesh.cells(); ++i) {
        const double exact =
            std::exp(-1.0) * std::cyl_bessel_j(1, kJ11 * sol.mesh.centers[i] / R);
        const double w = sol.mesh.centers[i] * sol.mesh.widths[i];
        num += w * std::pow(u[i] - exact, 2);
        den += w * exact * exact;
    }
    const double bessel_rel = std::sqrt(num / den);
    std::ostringstream os2;
    os2 << "relative error=" << bessel_rel << " (<= 1e-4)";
    record("criterion 9: NS solver vs Bessel eigen-decay", bessel_rel <= 1e-4, os2.str());

    auto err_at = [&](int nodes, int steps) {
        RadialNSProblem p2;
        p2.R = R;
        p2.nu = 5e-2;
        p2.T = 2.0;
        p2.u0 = [&](double rho) { return std::cyl_bessel_j(1, kJ11 * rho / R); };
        p2.base_nodes = nodes;
        p2.steps = steps;
        auto s = solve_radial_ns(p2);
        const double decay = std::exp(-p2.nu * std::pow(kJ11 / R, 2) * p2.T);
        double acc = 0;
        const auto& uu = s.samples.back();
        for (int i = 0; i < s.mesh.cells(); ++i) {
            const double exact =
                decay * std::cyl_bessel_j(1, kJ11 * s.mesh.centers[i] / R);
            acc += s.mesh.centers[i] * s.mesh.widths[i] * std::pow(uu[i] - exact, 2);
        }
        return std::sqrt(acc);
    };
    const double e1 = err_at(128, 24), e2 = err_at(256, 48), e3 = err_at(512, 96);
    const double ord1 = std::log(e1 / e2) / std::log(2.0);
    const double ord2 = std::log(e2 / e3) / std::log(2.0);
    std::ostringstream os3;
    os3 << "orders: " << ord1 << ", " << ord2 << " (in [1.8, 2.2])";
    record("criterion 9: scheme refinement order",
           ord1 >= 1.8 && ord1 <= 2.2 && ord2 >= 1.8 && ord2 <= 2.2, os3.str());
}

// criterion 10: byte-identical reruns
void criterion10() {
    bool pass = true;
    for (const char* text :
         {"experiment = decay-probe\nflow = patch-I-off\nseed = 11\n",
          "experiment = truncation-rates-2d\nflow = patch-II\ntheta = "
          "0.33333333333333331\nR_grid = 27 81 243 729\n",
          "experiment = lemma81-probe\nR_grid = 8 16 32 64\n"}) {
        auto a = run_text(text);
        auto b = run_text(text);
        pass &= a.json == b.json && a.csv == b.csv;
    }
    record("criterion 10: determinism (byte-identical CSVs and manifests)", pass);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("----\n%s (%lld s total)\n",
                g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
                (long long)std::chrono::duration_cast<std::chrono::seconds>(t1 - t0).count());
    return g_failures == 0 ? 0 : 1;
}
