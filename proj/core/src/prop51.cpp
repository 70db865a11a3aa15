#include "vvlab/prop51.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvlab/cutoff.hpp"
#include "vvlab/truncation.hpp"

namespace vvlab {

using std::numbers::pi;

double alpha_exponent(int dimension, double theta, double mass) {
    if (dimension == 3) return 0.5;
    return std::abs(mass) > 1e-12 ? 0.5 - 0.5 * theta : 0.5 + 0.5 * theta;
}

double beta_exponent(int dimension, double theta, double mass) {
    if (dimension == 3) return 1.5;
    return std::abs(mass) > 1e-12 ? 0.5 + 0.5 * theta : 0.5 + 1.5 * theta;
}

namespace {

void check_bounded(Prop51Report& rep, const std::string& item, double ratio_limit) {
    const auto& vals = rep.rows.at(item);
    double lo = 1e300, hi = 0;
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.bounded.push_back({item, lo > 0 ? hi / lo : 1e300, lo > 0 && hi / lo <= ratio_limit});
}

void report_2d(const ReferenceFlow& flow, double theta, Prop51Report& rep,
               const Prop51Options& opt) {
    const auto& pr = *flow.flow2d->primary().profile;
    QuadratureOptions q;
    q.scale = opt.resolution_scale;
    DomainSpec disk{2, Shape::disk, 1, 1, 1};
    const double m = pr.mass();
    const bool has_mass = std::abs(m) > 1e-12;

    for (double R : rep.R_grid) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(disk, theta, R));
        auto tf = truncate_2d(flow.flow2d, cutoff, {});
        const double w = cutoff->collar_width();
        const double edge = R - w;
        std::vector<double> bp = pr.breakpoints();
        bp.push_back(edge);
        bp.push_back(R - 0.5 * w);
        std::vector<double> collar_bp{R - 0.5 * w};

        auto grad_mag = [&](double rho) {
            const double wv = tf.w_radial(rho), wd = tf.w_radial_d(rho);
            return rho > 0 ? std::sqrt(wd * wd + wv * wv / (rho * rho)) : std::abs(wd);
        };
        rep.rows["grad_uR_L2"].push_back(
            norm_radial_2d(grad_mag, 0.0, R, bp, NormKind::L2, q).value);
        rep.rows["uR_Linf"].push_back(
            norm_radial_2d([&](double r) { return std::abs(tf.w_radial(r)); }, 0.0, R,
                           bp, NormKind::Linf, q)
                .value);
        rep.rows["grad_uR_Linf"].push_back(
            norm_radial_2d(grad_mag, 0.0, R, bp, NormKind::Linf, q).value);

        // (4a): |p grad(phi)| on the collar; the d_t psi term vanishes for
        // steady flows and is recorded as zero
        rep.rows["p_gradphi_L2"].push_back(
            norm_radial_2d(
                [&](double rho) {
                    double f, d1, d2, d3;
                    cutoff->radial_derivs(R - rho, f, d1, d2, d3);
                    return std::abs(pr.pressure(rho)) * std::abs(d1);
                },
                edge, R, collar_bp, NormKind::L2, q)
                .value);
        rep.rows["dtpsi_gradphi_L2"].push_back(0.0);

        if (opt.include_laplacian && flow.smoothness >= 2.0)
            rep.rows["lap_uR_L2"].push_back(
                norm_radial_2d([&](double r) { return std::abs(tf.laplacian_radial(r)); },
                               0.0, R, bp, NormKind::L2, q)
                    .value);

        rep.rows["diff_L2"].push_back(
            norm_radial_2d([&](double r) { return std::abs(tf.diff_radial(r)); }, edge,
                           R, collar_bp, NormKind::L2, q)
                .value);
        rep.rows["stream_term_L2"].push_back(
            norm_radial_2d([&](double r) { return std::abs(tf.stream_term_radial(r)); },
                           edge, R, collar_bp, NormKind::L2, q)
                .value);
        rep.rows["grad_diff_L2"].push_back(
            norm_radial_2d(
                [&](double rho) {
                    const double d = tf.diff_radial(rho), dd = tf.diff_radial_d(rho);
                    return rho > 0 ? std::sqrt(dd * dd + d * d / (rho * rho))
                                   : std::abs(dd);
                },
                edge, R, collar_bp, NormKind::L2, q)
                .value);

        // collar norms of the untruncated flow (far-field decay bounds)
        rep.rows["u_L2_Sigma"].push_back(
            norm_radial_2d([&](double r) { return std::abs(pr.u_theta(r)); }, edge, R,
                           collar_bp, NormKind::L2, q)
                .value);
        rep.rows["grad_u_L2_Sigma"].push_back(
            norm_radial_2d(
                [&](double rho) {
                    const double uv = pr.u_theta(rho), ud = pr.u_theta_d(rho);
                    return std::sqrt(ud * ud + uv * uv / (rho * rho));
                },
                edge, R, collar_bp, NormKind::L2, q)
                .value);
        rep.rows["psi_L2_Sigma"].push_back(
            norm_radial_2d([&](double r) { return std::abs(pr.psi(r) - tf.psi_shift()); },
                           edge, R, collar_bp, NormKind::L2, q)
                .value);
    }

    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["p_gradphi_L2"], -theta,
                                FitSemantics::upper_bound, "p grad(phi) L2 (4a)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["diff_L2"], -rep.alpha,
                                FitSemantics::upper_bound, "u - T_R u L2 (6)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["stream_term_L2"], -rep.alpha,
                                FitSemantics::upper_bound, "u^R - phi u L2 (6b)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["grad_diff_L2"], -rep.beta,
                                FitSemantics::upper_bound, "grad(u - T_R u) L2 (7)"));
    const double u_sig = has_mass ? 0.5 * theta - 0.5 : 0.5 * theta - 1.5;
    const double gu_sig = has_mass ? 0.5 * theta - 1.5 : 0.5 * theta - 2.5;
    const double psi_sig = has_mass ? 1.5 * theta - 0.5 : 0.5 * theta - 0.5;
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["u_L2_Sigma"], u_sig,
                                FitSemantics::upper_bound, "u L2(Sigma_R)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["grad_u_L2_Sigma"], gu_sig,
                                FitSemantics::upper_bound, "grad u L2(Sigma_R)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["psi_L2_Sigma"], psi_sig,
                                FitSemantics::upper_bound, "psi L2(Sigma_R)"));
}

void report_3d(const ReferenceFlow& flow, Prop51Report& rep, const Prop51Options& opt) {
    QuadratureOptions q;
    q.scale = opt.resolution_scale;
    DomainSpec ball{3, Shape::disk, 1, 1, 1};
    auto hill = flow.flow3d;
    const double a = hill->radius();
    // classical closed-form pressure companions for item (4b)
    auto classical = std::make_shared<HillVortex3D>(
        HillVortex3D::classical(hill->radius(), hill->speed()));

    for (double R : rep.R_grid) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(ball, 1.0, R));
        auto tf = truncate_3d(hill, cutoff);
        auto tfc = truncate_3d(classical, cutoff);
        const double w = cutoff->collar_width();
        const double edge = R - w;
        std::vector<double> bp{a * 0.9, a, edge, R - 0.5 * w};
        std::vector<double> collar_bp{R - 0.5 * w};

        auto at = [](double rho, double z) { return Vec3{rho, 0.0, z}; };
        auto grad_mag = [&](double rho, double z) {
            return tf.gradient(at(rho, z)).frobenius();
        };
        rep.rows["grad_uR_L2"].push_back(
            norm_shell_3d(grad_mag, 0.0, R, NormKind::L2, q, bp).value);
        rep.rows["uR_Linf"].push_back(
            norm_shell_3d([&](double rho, double z) { return tf.value(at(rho, z)).norm(); },
                          0.0, R, NormKind::Linf, q, bp)
                .value);
        rep.rows["grad_uR_Linf"].push_back(
            norm_shell_3d(grad_mag, 0.0, R, NormKind::Linf, q, bp).value);

        // (4b): classical Hill carries the Bernoulli pressure and the
        // translating-frame d_t Psi
        rep.rows["p_gradphi_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) {
                    const Vec3 x = at(rho, z);
                    return std::abs(classical->pressure(x)) * cutoff->grad3(x).norm();
                },
                edge, R, NormKind::L2, q, collar_bp)
                .value);
        rep.rows["dtpsi_gradphi_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) {
                    const Vec3 x = at(rho, z);
                    return cutoff->grad3(x).cross(classical->stream_dt(x)).norm();
                },
                edge, R, NormKind::L2, q, collar_bp)
                .value);

        if (opt.include_laplacian) {
            // interior: closed form; collar: 2nd-order FD of the evaluator
            const std::vector<double> hill_bp{a * 0.9, a};
            const double interior =
                norm_shell_3d(
                    [&](double rho, double z) {
                        return hill->velocity_laplacian(at(rho, z)).norm();
                    },
                    0.0, edge, NormKind::L2, q, hill_bp)
                    .value;
            const double hfd = 1e-4 * R;
            auto lap_fd = [&](double rho, double z) {
                const Vec3 x = at(rho, z);
                Vec3 acc{0, 0, 0};
                for (int axis = 0; axis < 3; ++axis) {
                    Vec3 e{0, 0, 0};
                    (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = hfd;
                    acc += tf.value(x + e) + tf.value(x - e) - 2.0 * tf.value(x);
                }
                return acc.norm() / (hfd * hfd);
            };
            const double collar =
                norm_shell_3d(lap_fd, edge, R, NormKind::L2, q, collar_bp).value;
            rep.rows["lap_uR_L2"].push_back(
                std::sqrt(interior * interior + collar * collar));
        }

        rep.rows["diff_L2"].push_back(
            norm_shell_3d([&](double rho, double z) { return tf.diff(at(rho, z)).norm(); },
                          edge, R, NormKind::L2, q, collar_bp)
                .value);
        rep.rows["stream_term_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) { return tf.stream_term(at(rho, z)).norm(); },
                edge, R, NormKind::L2, q, collar_bp)
                .value);
        rep.rows["grad_diff_L2"].push_back(
            norm_shell_3d(
                [&](double rho, double z) { return tf.grad_diff(at(rho, z)).frobenius(); },
                edge, R, NormKind::L2, q, collar_bp)
                .value);
        (void)tfc;
    }

    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["p_gradphi_L2"], -1.0,
                                FitSemantics::upper_bound, "p grad(phi) L2 (4b)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["dtpsi_gradphi_L2"], -1.0,
                                FitSemantics::upper_bound, "grad(phi) x dtPsi L2 (4b)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["diff_L2"], -rep.alpha,
                                FitSemantics::upper_bound, "u - T_R u L2 (6)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["stream_term_L2"], -rep.alpha,
                                FitSemantics::upper_bound, "u^R - phi u L2 (6b)"));
    rep.fits.push_back(fit_rate(rep.R_grid, rep.rows["grad_diff_L2"], -rep.beta,
                                FitSemantics::upper_bound, "grad(u - T_R u) L2 (7)"));
}

}  // namespace

Prop51Report proposition51_report(const ReferenceFlow& flow, double theta,
                                  std::vector<double> R_grid,
                                  const Prop51Options& opt) {
    if (R_grid.size() < 4)
        throw std::invalid_argument("proposition51_report: need >= 4 radii");
    Prop51Report rep;
    rep.flow = flow.name;
    rep.dimension = flow.dimension;
    rep.theta = flow.dimension == 3 ? 1.0 : theta;
    rep.R_grid = std::move(R_grid);
    const double m = flow.dimension == 2 ? flow.flow2d->mass() : 0.0;
    rep.alpha = alpha_exponent(flow.dimension, rep.theta, m);
    rep.beta = beta_exponent(flow.dimension, rep.theta, m);

    if (flow.dimension == 2) {
        if (!flow.flow2d->single_centered())
            throw std::invalid_argument(
                "proposition51_report: centered radial 2D flow required (steady reference)");
        report_2d(flow, rep.theta, rep, opt);
    } else {
        report_3d(flow, rep, opt);
    }

    // item (1) doubles as the R-independence of C in the gradient bound:
    // the fitted constant may drift by at most 10% across the sweep
    check_bounded(rep, "grad_uR_L2", 1.10);
    check_bounded(rep, "uR_Linf", opt.bounded_ratio);
    check_bounded(rep, "grad_uR_Linf", opt.bounded_ratio);
    if (rep.rows.count("lap_uR_L2")) check_bounded(rep, "lap_uR_L2", opt.bounded_ratio);
    return rep;
}

}  // namespace vvlab
