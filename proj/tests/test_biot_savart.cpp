#include <doctest.h>

#include <numbers>
#include <random>

#include "vvlab/biot_savart.hpp"
#include "test_util.hpp"

using namespace vvlab;
using std::numbers::pi;

TEST_CASE("velocity_2d: analytic shortcut values") {
    auto patch = CompactVorticity::from_flow(vvtest::flow("patch-II").flow2d);
    const Vec2 u = velocity_2d(patch, {2.0, 0.0});
    CHECK(u.x == doctest::Approx(0.0));
    CHECK(u.y == doctest::Approx(0.25).epsilon(1e-13));

    // zero vorticity
    auto zero_profile = std::make_shared<PiecewisePolyProfile>(
        std::vector<PiecewisePolyProfile::Piece>{poly_piece(0, 1, {0.0})});
    auto zf = std::make_shared<Flow2D>();
    zf->parts.push_back(RadialVortex2D{zero_profile, {0, 0}});
    auto zero = CompactVorticity::from_flow(zf);
    CHECK(velocity_2d(zero, {0.3, 0.3}).norm() == 0.0);

    // zero-mass annulus has u = 0 outside its support, exactly
    auto annular = CompactVorticity::from_flow(vvtest::flow("patch-I").flow2d);
    CHECK(velocity_2d(annular, {3.0, 0.0}).norm() <= 1e-12);
}

TEST_CASE("velocity_2d quadrature matches the closed form to 1e-6 outside the support") {
    auto patch = CompactVorticity::from_flow(vvtest::flow("patch-II").flow2d);
    KernelQuadrature q;
    q.radial_panels = 96;
    q.angular_nodes = 256;
    for (Vec2 x : {Vec2{2.0, 0.0}, Vec2{1.4, -0.9}, Vec2{-3.0, 0.4}}) {
        const Vec2 exact = velocity_2d(patch, x);
        const Vec2 quad = velocity_2d(patch, x, q, true);
        CHECK((quad - exact).norm() <= 1e-6 * exact.norm());
    }
    // zero-mass annulus: analytic zero at |x| = 3, quadrature agrees to 1e-12
    auto annular = CompactVorticity::from_flow(vvtest::flow("patch-I").flow2d);
    CHECK(velocity_2d(annular, {0.0, 3.0}, q, true).norm() <= 1e-12);
}

TEST_CASE("velocity_2d quadrature: interior evaluation rules") {
    auto smooth = CompactVorticity::from_flow(vvtest::flow("smooth-II").flow2d);
    KernelQuadrature q;
    // cell-exclusion refuses generic interior points
    CHECK_THROWS_AS(velocity_2d(smooth, {0.4, 0.1}, q, true), std::invalid_argument);
    // the regularized rule accepts them
    KernelQuadrature qr;
    qr.rule = KernelQuadrature::Rule::regularized;
    qr.epsilon = 1e-3;
    const Vec2 exact = velocity_2d(smooth, {0.4, 0.1});
    const Vec2 reg = velocity_2d(smooth, {0.4, 0.1}, qr, true);
    CHECK((reg - exact).norm() <= 5e-3 * std::max(1.0, exact.norm()));
    // epsilon cap: half the source spacing
    KernelQuadrature qbad = qr;
    qbad.epsilon = 1.0;
    CHECK_THROWS_AS(velocity_2d(smooth, {0.4, 0.1}, qbad, true), std::invalid_argument);
}

TEST_CASE("stream_2d: analytic values and quadrature cross-check") {
    auto patch = CompactVorticity::from_flow(vvtest::flow("patch-II").flow2d);
    auto sf = stream_2d(patch);
    CHECK(sf.provenance == StreamProvenance::analytic_radial);
    CHECK(sf.value({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sf.value({0.0, 0.0}) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(sf.value({10.0, 0.0}) == doctest::Approx(0.5 * std::log(10.0)).epsilon(1e-14));

    KernelQuadrature q;
    q.radial_panels = 96;
    q.angular_nodes = 256;
    auto sq = stream_2d(patch, q, true);
    CHECK(sq.provenance == StreamProvenance::quadrature);
    for (Vec2 x : {Vec2{1.7, 0.4}, Vec2{0.0, 2.5}}) {
        CHECK(sq.value(x) == doctest::Approx(sf.value(x)).epsilon(1e-6));
        CHECK((sq.grad(x) - sf.grad(x)).norm() <= 1e-6 * std::max(1.0, sf.grad(x).norm()));
    }

    // zero-mass stream vanishes beyond the support
    auto annular = CompactVorticity::from_flow(vvtest::flow("patch-I").flow2d);
    auto sa = stream_2d(annular);
    CHECK(sa.value({2.0, 0.0}) == 0.0);
    CHECK(sa.value({0.0, 5.0}) == 0.0);
}

TEST_CASE("log-kernel self cell: closed form vs polar quadrature oracle") {
    // int over the square [-a,a]^2 of log|z| dA, a = h/2
    const double h = 0.37;
    const double closed = 0.5 * h * h * (2 * std::log(0.5 * h) + std::log(2.0) - 3.0 + 0.5 * pi);
    // oracle: integrate log r over the square in polar coordinates (8 triangles)
    const double a = 0.5 * h;
    const double oracle = 8.0 * vvtest::simpson(
        [&](double phi) {
            const double rmax = a / std::cos(phi);
            // int_0^rmax log(r) r dr = rmax^2/2 (log rmax - 1/2)
            return 0.5 * rmax * rmax * (std::log(rmax) - 0.5);
        },
        0.0, pi / 4, 4096);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("sampled-vorticity quadrature path with node-centered evaluation") {
    // sample the smooth-II vorticity on a grid and reconstruct the velocity
    const auto& flow = *vvtest::flow("smooth-II").flow2d;
    const int n = 128;
    SampledField f;
    f.grid.dimension = 2;
    f.grid.coords = CoordSystem::cartesian;
    f.grid.nodes = {n, n, 1};
    f.grid.lo = {-1.0, -1.0, 0};
    f.grid.hi = {1.0, 1.0, 0};
    f.components = 1;
    f.values.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) {
        const Vec3 p = f.grid.position(i);
        f.at(i, 0) = flow.vorticity({p.x, p.y});
    }
    auto cv = CompactVorticity::from_samples(f, 1.0);
    KernelQuadrature q;
    q.cartesian_nodes = 128;
    // outside the support
    const Vec2 out = velocity_2d(cv, {1.5, 0.2}, q);
    CHECK((out - flow.velocity({1.5, 0.2})).norm() <= 2e-3);
    // exactly on a source node inside: the self cell is dropped (odd kernel)
    const double hsp = 2.0 / 128;
    const Vec2 node{-1.0 + (64 + 0.5) * hsp, -1.0 + (40 + 0.5) * hsp};
    const Vec2 in = velocity_2d(cv, node, q);
    CHECK((in - flow.velocity(node)).norm() <= 5e-3 * std::max(1.0, flow.velocity(node).norm()));
    // off-node interior evaluation is refused under cell exclusion
    CHECK_THROWS_AS(velocity_2d(cv, {0.31, 0.17}, q), std::invalid_argument);
}

TEST_CASE("velocity_3d quadrature recovers the Hill center velocity") {
    const auto& hill = *vvtest::flow("hill-classical").flow3d;
    KernelQuadrature q;
    q.radial_panels = 96;
    q.angular_nodes = 256;  // meridian angles scale from this
    const Vec3 u0 = velocity_3d_quadrature(hill, {0, 0, 0}, q);
    CHECK(std::abs(u0.x) <= 1e-10);
    CHECK(std::abs(u0.y) <= 1e-10);
    CHECK(u0.z == doctest::Approx(2.5).epsilon(1e-6));
    // far-field check at |x| = 8 against the closed form
    const Vec3 xf{4.0, 2.0, 6.0};
    const Vec3 uq = velocity_3d_quadrature(hill, xf, q);
    CHECK((uq - hill.velocity(xf)).norm() <= 1e-8);
}

TEST_CASE("newtonian potential of the unit-ball indicator: closed forms") {
    RadialSource3D src;
    src.f = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
    src.L = 1.0;
    src.breakpoints = {1.0};
    // E * 1_ball = vol(B1)/(4 pi |x|) = 1/(3 |x|) outside the ball
    CHECK(newtonian_potential(src, {2.0, 0.0, 0.0}) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(newtonian_potential(src, {0.0, 0.0, 5.0}) ==
          doctest::Approx(1.0 / 15.0).epsilon(1e-9));
    const Vec3 g = newtonian_potential_grad(src, {2.0, 0.0, 0.0});
    CHECK(g.x == doctest::Approx(-1.0 / 12.0).epsilon(1e-8));
    CHECK(std::abs(g.y) <= 1e-12);

    // Linf ratio across collars: value at R=16 over R=8 is ~1/2 (point-mass law)
    const double v8 = newtonian_potential(src, {0, 0, 8.0 * 0.5});
    const double v16 = newtonian_potential(src, {0, 0, 16.0 * 0.5});
    CHECK(v16 / v8 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("convolution decay probe: exponents {1/2, -1/2, -1, -2} and validation") {
    RadialSource3D src;
    src.f = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
    src.L = 1.0;
    src.breakpoints = {1.0};
    CHECK_THROWS_AS(convolution_decay_probe(src, {2.0, 4.0, 8.0, 16.0}),
                    std::invalid_argument);  // Sigma_R not outside B_{2L}
    auto probe = convolution_decay_probe(src, {8, 16, 32, 64});
    CHECK(probe.fit_l2.pass);
    CHECK(probe.fit_l2.slope == doctest::Approx(0.5).epsilon(0.2));
    CHECK(probe.fit_l2_grad.pass);
    CHECK(probe.fit_linf.pass);
    CHECK(probe.fit_linf_grad.pass);
    // zero source: all norms vanish
    RadialSource3D zsrc;
    zsrc.f = [](double) { return 0.0; };
    zsrc.L = 1.0;
    auto zp = convolution_decay_probe(zsrc, {8, 16, 32, 64});
    for (double v : zp.l2) CHECK(v == 0.0);
    CHECK(zp.fit_l2.vacuous);
}

TEST_CASE("perp-grad psi equals the velocity on random radial flows (property)") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-2.5, 2.5);
    for (int trial = 0; trial < 15; ++trial) {
        auto f = std::make_shared<Flow2D>();
        f->parts.push_back(RadialVortex2D{vvtest::random_profile(rng), {0.2, -0.3}});
        f->parts.push_back(RadialVortex2D{vvtest::random_profile(rng), {-0.5, 0.1}});
        auto cv = CompactVorticity::from_flow(f);
        auto sf = stream_2d(cv);
        const Vec2 x{U(rng), U(rng)};
        const Vec2 g = sf.grad(x);
        const Vec2 u = velocity_2d(cv, x);
        CHECK(std::abs(-g.y - u.x) <= 1e-10 * std::max(1.0, u.norm()));
        CHECK(std::abs(g.x - u.y) <= 1e-10 * std::max(1.0, u.norm()));
    }
}

TEST_CASE("zero-mass far field: dipole rates along rays") {
    const auto& dip = *vvtest::flow("patch-I-off").flow2d;
    const double R0 = dip.support_radius();
    const Vec2 dir{std::cos(0.6), std::sin(0.6)};
    auto vfit = ray_decay_fit([&](double r) { return dip.velocity(r * dir).norm(); },
                              2 * R0, 2.0, 6, -2.0, FitSemantics::upper_bound, "v");
    CHECK(vfit.pass);
    auto gfit = ray_decay_fit([&](double r) { return dip.velocity_grad(r * dir).frobenius(); },
                              2 * R0, 2.0, 6, -3.0, FitSemantics::upper_bound, "grad v");
    CHECK(gfit.pass);
    auto pfit = ray_decay_fit([&](double r) { return std::abs(dip.psi(r * dir)); },
                              2 * R0, 2.0, 6, -1.0, FitSemantics::upper_bound, "psi_v");
    CHECK(pfit.pass);
}

TEST_CASE("reconstruction round trip: curl of the Biot-Savart velocity is omega") {
    // 2nd-order grid convergence on the smooth profile
    const auto& flow = *vvtest::flow("smooth-II").flow2d;
    auto cv = CompactVorticity::from_flow(vvtest::flow("smooth-II").flow2d);
    std::vector<double> hs, errs;
    for (int n : {33, 65, 129}) {
        const double L = 1.4;
        SampledField f;
        f.grid.dimension = 2;
        f.grid.coords = CoordSystem::cartesian;
        f.grid.nodes = {n, n, 1};
        f.grid.lo = {-L, -L, 0};
        f.grid.hi = {L, L, 0};
        f.components = 2;
        f.values.resize(static_cast<size_t>(n) * n * 2);
        for (int i = 0; i < n * n; ++i) {
            const Vec3 p = f.grid.position(i);
            const Vec2 u = velocity_2d(cv, {p.x, p.y});
            f.at(i, 0) = u.x;
            f.at(i, 1) = u.y;
        }
        auto w = curl(f);
        double worst = 0;
        for (int i = 0; i < n * n; ++i) {
            const Vec3 p = f.grid.position(i);
            worst = std::max(worst, std::abs(w.at(i, 0) - flow.vorticity({p.x, p.y})));
        }
        hs.push_back(f.grid.spacing(0));
        errs.push_back(worst);
    }
    for (size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log(errs[i] / errs[i + 1]) / std::log(hs[i] / hs[i + 1]);
        CHECK(order >= 1.8);
        CHECK(order <= 2.2);
    }
}
