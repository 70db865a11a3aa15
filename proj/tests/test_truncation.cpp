#include <doctest.h>

#include <numbers>
#include <random>

#include "vvlab/norms.hpp"
#include "vvlab/ns_disk.hpp"
#include "vvlab/truncation.hpp"
#include "test_util.hpp"

using namespace vvlab;
using std::numbers::pi;

namespace {

const DomainSpec kDisk{2, Shape::disk, 1, 1, 1};
const DomainSpec kEllipse{2, Shape::ellipse, 1.0, 0.5, 1};
const DomainSpec kBall{3, Shape::disk, 1, 1, 1};

TruncatedField2D make_tf(const char* flow, double theta, double R,
                         const DomainSpec& dom = kDisk,
                         std::optional<StreamNormalization> norm = {}) {
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(dom, theta, R));
    return truncate_2d(vvtest::flow(flow).flow2d, cutoff, norm);
}

}  // namespace

TEST_CASE("truncation is the identity off the collar and vanishes on the boundary") {
    auto tf = make_tf("patch-II", 1.0 / 3.0, 40.0);
    // phi = 1 at |x| = 2
    const Vec2 x{1.2, 1.6};
    CHECK((tf.value(x) - tf.flow().velocity(x)).norm() == 0.0);
    CHECK(tf.diff(x).norm() == 0.0);
    // on Gamma_R the field vanishes identically (phi = 0, grad phi = 0)
    for (int i = 0; i < 8; ++i) {
        const double ang = 2 * pi * i / 8.0;
        const Vec2 b{40.0 * std::cos(ang), 40.0 * std::sin(ang)};
        CHECK(tf.value(b).norm() <= 1e-10);
    }
}

TEST_CASE("centered zero-mass flows truncate exactly") {
    auto tf = make_tf("patch-I", 1.0, 32.0);
    for (double rho : {16.5, 24.0, 30.0, 31.9}) {
        CHECK(std::abs(tf.diff_radial(rho)) <= 1e-15);
        CHECK(std::abs(tf.stream_term_radial(rho)) <= 1e-15);
    }
}

TEST_CASE("m = 0 off-center flow: error bounded by C/R with stable C (theta = 1)") {
    std::vector<double> Rs{16, 32, 64};
    std::vector<double> Cs;
    QuadratureOptions q;
    for (double R : Rs) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(kDisk, 1.0, R));
        auto tf = truncate_2d(vvtest::flow("patch-I-off").flow2d, cutoff, {});
        const double err =
            norm_collar_2d([&](Vec2 x) { return tf.diff(x).norm(); }, cutoff->chart(),
                           NormKind::L2, q)
                .value;
        Cs.push_back(err * R);
    }
    const double cmin = *std::min_element(Cs.begin(), Cs.end());
    const double cmax = *std::max_element(Cs.begin(), Cs.end());
    CHECK(cmax / cmin <= 1.2 / 0.8);  // stable within +-20%
}

TEST_CASE("disk normalization: psi shift is (m/2pi) log R; mean-zero needs opt-in") {
    auto tf = make_tf("patch-II", 1.0, 16.0);
    CHECK(tf.psi_shift() == doctest::Approx(pi / (2 * pi) * std::log(16.0)).epsilon(1e-12));
    // m != 0 off the disk is rejected unless the mean-zero normalization is forced
    CHECK_THROWS_AS(make_tf("patch-II", 1.0, 16.0, kEllipse), std::invalid_argument);
    auto tfe = make_tf("patch-II", 1.0, 16.0, kEllipse,
                       StreamNormalization::mean_zero_collar);
    // collar mean of psi - shift vanishes relative to the psi variation
    const auto& chart = tfe.cutoff().chart();
    double num = 0, den = 0, lo = 1e300, hi = -1e300;
    for (int i = 0; i < 512; ++i)
        for (int j = 0; j < 24; ++j) {
            const double s = chart.boundary_length() * (i + 0.5) / 512;
            const double r = chart.width() * (j + 0.5) / 24;
            const double J = chart.jacobian(s, r);
            const double v = tfe.flow().psi(chart.from_chart(s, r)) - tfe.psi_shift();
            num += J * v;
            den += J;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    CHECK(std::abs(num / den) <= 2e-3 * (hi - lo));  // midpoint-oracle accuracy
}

TEST_CASE("collar must clear the vorticity support") {
    // patch-I has support radius 2; at R = 2 the collar reaches inside
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(kDisk, 1.0, 2.0));
    CHECK_THROWS_AS(truncate_2d(vvtest::flow("patch-I").flow2d, cutoff, {}),
                    std::invalid_argument);
}

TEST_CASE("2D truncated gradient matches finite differences (disk and ellipse)") {
    std::mt19937_64 rng(41);
    struct Case {
        const char* flow;
        DomainSpec dom;
        std::optional<StreamNormalization> norm;
    };
    for (const auto& c :
         {Case{"patch-II", kDisk, {}},
          Case{"patch-I-off", kDisk, {}},
          Case{"patch-II", kEllipse, StreamNormalization::mean_zero_collar}}) {
        auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(c.dom, 0.6, 24.0));
        auto tf = truncate_2d(vvtest::flow(c.flow).flow2d, cutoff, c.norm);
        const auto& chart = cutoff->chart();
        std::uniform_real_distribution<double> Us(0.0, chart.boundary_length());
        std::uniform_real_distribution<double> Ur(0.1 * chart.width(), 0.9 * chart.width());
        for (int trial = 0; trial < 6; ++trial) {
            const Vec2 x = chart.from_chart(Us(rng), Ur(rng));
            const Mat2 g = tf.gradient(x);
            const double h = 1e-5;
            Mat2 gfd;
            for (int axis = 0; axis < 2; ++axis) {
                Vec2 xp = x, xm = x;
                (axis == 0 ? xp.x : xp.y) += h;
                (axis == 0 ? xm.x : xm.y) -= h;
                const Vec2 a = tf.value(xp), b = tf.value(xm);
                gfd.m[0][axis] = (a.x - b.x) / (2 * h);
                gfd.m[1][axis] = (a.y - b.y) / (2 * h);
            }
            CHECK((g - gfd).frobenius() <= 2e-4 * std::max(1.0, g.frobenius()));
            // diff/grad_diff consistency
            CHECK((tf.grad_diff(x) - (g - tf.flow().velocity_grad(x))).frobenius() <= 1e-12);
        }
    }
}

TEST_CASE("radial fast path agrees with the 2D evaluators") {
    auto tf = make_tf("smooth-II", 0.5, 20.0);
    REQUIRE(tf.radial());
    for (double rho : {16.0, 18.5, 19.2, 19.9}) {
        const Vec2 x{rho * std::cos(0.8), rho * std::sin(0.8)};
        CHECK(tf.value(x).norm() == doctest::Approx(std::abs(tf.w_radial(rho))).epsilon(1e-10));
        CHECK(tf.diff(x).norm() == doctest::Approx(std::abs(tf.diff_radial(rho))).epsilon(1e-10));
        // |grad u^R|^2 = w'^2 + (w/rho)^2 for an angular field
        const double w = tf.w_radial(rho), wd = tf.w_radial_d(rho);
        CHECK(tf.gradient(x).frobenius() ==
              doctest::Approx(std::sqrt(wd * wd + w * w / (rho * rho))).epsilon(1e-8));
    }
}

TEST_CASE("divergence of the truncated field vanishes at 2nd order") {
    auto tf = make_tf("patch-II", 1.0 / 3.0, 32.0);
    const Vec2 x = tf.cutoff().chart().from_chart(11.0, 0.4 * tf.cutoff().collar_width());
    std::vector<double> hs{1e-2, 5e-3, 2.5e-3}, divs;
    for (double h : hs) divs.push_back(std::abs(tf.divergence_fd(x, h)));
    // second-order stencil on an exactly solenoidal field: FD error ~ h^2
    CHECK(divs[2] <= divs[0] * 0.15 + 1e-13);
}

TEST_CASE("3D truncation: interior identity, boundary trace, FD gradient") {
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(kBall, 1.0, 16.0));
    auto tf = truncate_3d(vvtest::flow("hill-III").flow3d, cutoff);
    const Vec3 xin{1.0, 0.5, 1.5};
    CHECK((tf.value(xin) - tf.flow().velocity(xin)).norm() == 0.0);
    for (const Vec3& dir : {Vec3{1, 0, 0}, Vec3{0, 0.6, 0.8}, Vec3{-0.6, 0.64, 0.48}}) {
        const Vec3 b = (16.0 / dir.norm()) * dir;
        CHECK(tf.value(b).norm() <= 1e-10);
    }
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        Vec3 dir{U(rng), U(rng), U(rng)};
        dir = (1.0 / dir.norm()) * dir;
        const Vec3 x = (16.0 - 0.35 * cutoff->collar_width()) * dir;
        const Mat3 g = tf.gradient(x);
        const double h = 1e-4;
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 xp = x, xm = x;
            (axis == 0 ? xp.x : axis == 1 ? xp.y : xp.z) += h;
            (axis == 0 ? xm.x : axis == 1 ? xm.y : xm.z) -= h;
            const Vec3 a = tf.value(xp), b = tf.value(xm);
            const Vec3 col{(a.x - b.x) / (2 * h), (a.y - b.y) / (2 * h),
                           (a.z - b.z) / (2 * h)};
            const Vec3 gc{g.m[0][axis], g.m[1][axis], g.m[2][axis]};
            CHECK((gc - col).norm() <= 5e-5 * std::max(0.01, gc.norm()));
        }
    }
    // wrong cutoff variant is rejected
    auto cut2d = std::make_shared<CutoffFunction>(build_cutoff(kDisk, 1.0, 16.0));
    CHECK_THROWS_AS(truncate_3d(vvtest::flow("hill-III").flow3d, cut2d),
                    std::invalid_argument);
}

TEST_CASE("W_R vorticity route: centered flows and harmonic gradients") {
    // centered radial vortex: W_R u = u restricted
    auto patch = vvtest::flow("patch-II").flow2d;
    auto WA = project_W_vorticity(patch, 8.0);
    for (double rho : {0.5, 2.0, 6.0}) {
        const Vec2 x{rho * std::cos(1.1), rho * std::sin(1.1)};
        CHECK((WA.W(x) - patch->velocity(x)).norm() <= 1e-8 * std::max(1.0, patch->velocity(x).norm()));
    }
    CHECK(WA.residual <= 1e-5);

    // uniform stream u = (1, 0) = grad(x1): both routes give W = 0
    auto uni = std::make_shared<Flow2D>();
    {
        auto zero = std::make_shared<PiecewisePolyProfile>(
            std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 1, {0.0})});
        uni->parts.push_back(RadialVortex2D{zero, {0, 0}});
    }
    // uniform stream is not representable as a radial superposition; test the
    // helmholtz route directly with a custom evaluator via the vorticity route
    // of a zero field plus analytic checks on the Neumann series
    auto WB0 = project_W_helmholtz(patch, 8.0);
    for (double rho : {0.5, 2.0, 6.0}) {
        const Vec2 x{rho * std::cos(0.4), rho * std::sin(0.4)};
        CHECK(WB0.grad_p(x).norm() <= 1e-12);  // u.n = 0 for the centered vortex
    }
}

TEST_CASE("W_R routes agree with the image-vortex oracle for an off-center bump") {
    const double R = 6.0;
    const Vec2 c{2.5, 0.0};
    auto off = std::make_shared<Flow2D>(translate(*vvtest::flow("smooth-II").flow2d, c));
    const double m = off->mass();
    ProjectionOptions opt;
    opt.modes = 96;  // the 64-mode default sits right at 1e-6 pointwise
    auto WA = project_W_vorticity(off, R, opt);
    auto WB = project_W_helmholtz(off, R, opt);
    // image point c* = R^2 c / |c|^2; the Dirichlet stream correction is the
    // image log vortex, so W u = u - (m/2pi) perp((x - c*)/|x - c*|^2)
    const Vec2 cstar{R * R * c.x / c.dot(c), R * R * c.y / c.dot(c)};
    auto oracle = [&](Vec2 x) {
        const Vec2 z = x - cstar;
        return off->velocity(x) - (m / (2 * pi)) * (1.0 / z.dot(z)) * z.perp();
    };
    double worstA = 0, worstB = 0, scale = 0;
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        Vec2 x{U(rng) * R, U(rng) * R};
        if (x.norm() >= 0.98 * R) x = (0.7 * R / x.norm()) * x;
        worstA = std::max(worstA, (WA.W(x) - oracle(x)).norm());
        worstB = std::max(worstB, (WB.W(x) - oracle(x)).norm());
        scale = std::max(scale, oracle(x).norm());
    }
    CHECK(worstA <= 5e-7 * scale);
    CHECK(worstB <= 1e-12 * scale);
    // tangency of the vorticity route on the boundary
    for (int i = 0; i < 12; ++i) {
        const double ang = 2 * pi * i / 12.0;
        const Vec2 n{std::cos(ang), std::sin(ang)};
        CHECK(std::abs(WA.W(R * n).dot(n)) <= 1e-9);
    }
}

TEST_CASE("W_R routes on an off-center patch: mode-cap-limited agreement") {
    // a patch has an O(1/k) angular spectrum; the unresolved tail above the
    // mode cap bounds the route agreement at ~1e-4, not 1e-6
    const double R = 6.0;
    auto off = std::make_shared<Flow2D>(
        translate(*vvtest::flow("patch-II").flow2d, {3.0, 0.0}));
    auto WA = project_W_vorticity(off, R);
    auto WB = project_W_helmholtz(off, R);
    double worst = 0, scale = 0;
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (int i = 0; i < 25; ++i) {
        Vec2 x{U(rng) * R, U(rng) * R};
        if (x.norm() >= 0.95 * R) x = (0.7 * R / x.norm()) * x;
        worst = std::max(worst, (WA.W(x) - WB.W(x)).norm());
        scale = std::max(scale, off->velocity(x).norm());
    }
    CHECK(worst <= 5e-3 * scale);
    CHECK(worst > 1e-8 * scale);  // genuinely limited by the angular tail
}

TEST_CASE("W_R helmholtz route flags incompatible flux") {
    // u = x/|x|^2 carries unit flux through every circle around the origin:
    // the Neumann data has nonzero mean and the route must refuse it
    auto monopole = [](Vec2 x) {
        const double r2 = x.dot(x);
        return (1.0 / r2) * x;
    };
    CHECK_THROWS_AS(project_W_helmholtz(monopole, 6.0), std::invalid_argument);
    // a compatible generic evaluator goes through
    auto patch = vvtest::flow("patch-II").flow2d;
    auto ok = project_W_helmholtz([patch](Vec2 x) { return patch->velocity(x); }, 6.0);
    CHECK(std::abs(ok.mean_flux) <= 1e-12);
}

TEST_CASE("euler identity residual: steady radial flows") {
    auto cutoff = build_cutoff(kDisk, 1.0, 16.0);
    const auto& patch = *vvtest::flow("patch-II").flow2d;
    const double res = euler_identity_residual(patch, cutoff);
    // |u| ~ 1/2, so the contract threshold 1e-8 |u| is ample
    CHECK(res <= 1e-8 * 0.5);

    // zero flow
    auto zf = std::make_shared<Flow2D>();
    auto zero = std::make_shared<PiecewisePolyProfile>(
        std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 1, {0.0})});
    zf->parts.push_back(RadialVortex2D{zero, {0, 0}});
    CHECK(euler_identity_residual(*zf, cutoff) == 0.0);

    // sampled-pressure path converges at >= 2nd order on a smooth flow
    // (the patch pressure has a kink at the vorticity edge)
    const auto& smooth = *vvtest::flow("smooth-II").flow2d;
    std::vector<double> ns{128, 256, 512}, res_n;
    for (double n : ns)
        res_n.push_back(euler_identity_residual(smooth, cutoff, static_cast<int>(n)));
    for (size_t i = 0; i + 1 < res_n.size(); ++i) {
        const double order = std::log(res_n[i] / res_n[i + 1]) / std::log(2.0);
        CHECK(order >= 1.8);
        CHECK(order <= 2.3);
    }

    // non-steady (off-center, not a steady solution) inputs are rejected
    CHECK_THROWS_AS(euler_identity_residual(*vvtest::flow("patch-I-off").flow2d, cutoff),
                    std::invalid_argument);
}

TEST_CASE("initial gap: centered flows have F = 0, off-center decays like R^-alpha") {
    CHECK(initial_gap_F(vvtest::flow("patch-II"), 8.0, GapMode::projection) <= 1e-12);
    CHECK(initial_gap_F(vvtest::flow("patch-II"), 8.0, GapMode::raw_restriction) == 0.0);
    CHECK_THROWS_AS(initial_gap_F(vvtest::flow("patch-II"), 1.5, GapMode::projection),
                    std::invalid_argument);

    // off-center flow: fitted slope <= -alpha + 0.1 with alpha = 1/2 - theta/2
    // at theta = 1/3 -> 1/3; the helmholtz-series norm is the oracle route
    const auto& off = vvtest::flow("smooth-II-off");
    std::vector<double> Rs{8, 16, 32, 64}, Fs;
    for (double R : Rs) Fs.push_back(initial_gap_F(off, R, GapMode::projection));
    auto fit = fit_rate(Rs, Fs, -1.0 / 3.0, FitSemantics::upper_bound, "F(R)");
    CHECK(fit.pass);
}
