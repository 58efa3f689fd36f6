#include <doctest.h>

#include <hitchin/elliptic_classical.hpp>
#include <hitchin/io.hpp>

using namespace hitchin;

namespace {

double max_bracket(const EllipticPhasePoint &pt) {
    const auto obs = hamiltonian_observables(pt.ctx(), pt.n(), pt.sites());
    double b = 0.0;
    for (std::size_t x = 0; x < obs.size(); ++x)
        for (std::size_t y = x + 1; y < obs.size(); ++y)
            b = std::max(b, elliptic_bracket(obs[x].gradient(pt), obs[y].gradient(pt), pt).relative());
    return b;
}

} // namespace

TEST_CASE("dynamical r-matrix identity") {
    for (double q : {0.1, 0.3})
        for (int n : {2, 3})
            for (int N : {1, 2, 3})
                for (bool constrained : {false, true}) {
                    ThetaContext ctx(q);
                    Rng rng(100 * n + 10 * N + constrained);
                    EllipticSampleOptions opt;
                    opt.constrained = constrained;
                    const auto pt = random_elliptic_point(ctx, n, N, rng, opt);
                    const cplx z = random_spectral_point(pt, rng), w = random_spectral_point(pt, rng, {z});
                    CHECK(verify_dynamical_rmatrix(pt, z, w).relative() < 1e-9);
                    if (constrained) CHECK(pt.charges().cwiseAbs().maxCoeff() < 1e-12);
                }
}

TEST_CASE("r-matrix structure") {
    ThetaContext ctx(0.3);
    CVec t(3);
    t << cplx(1.1, 0.2), cplx(0.9, -0.1), cplx(1.0, 0.3);
    const cplx z(0.8, 0.5), w(1.3, -0.2), c(0.6, 0.9);
    const CMat r = r_matrix(ctx, z, w, t);
    CHECK(max_abs(r - r_matrix(ctx, z * c, w * c, t)) < 1e-12 * max_abs(r));
    const CMat rho = rho_matrix(ctx, z, w, t);
    CHECK(max_abs(rho - rho_matrix(ctx, z * c, w * c, t)) < 1e-12 * max_abs(rho));
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(rho(a * 3 + a, b * 3 + b) == cplx(0.0));
    for (int a = 0; a < 3; ++a) CHECK(std::abs(r(a * 3 + a, a * 3 + a)) == 0.0);
    CHECK(max_abs(r21_matrix(ctx, z, w, t) - swap_matrix(3) * r_matrix(ctx, w, z, t) * swap_matrix(3)) == 0.0);
}

TEST_CASE("charge coefficient is the limit of the shifted kernel combination") {
    ThetaContext ctx(0.3);
    CVec t(2);
    t << cplx(0.8, 0.3), 1.0;
    const cplx s = t(1) / t(0), x(1.2, -0.4), tp = ctx.theta_prime_one();
    const auto f = [&](cplx z, cplx w) {
        return ctx.kernel(s, z) * ctx.kernel(1.0 / s, w) + ctx.kernel(s, z / w) * (ctx.logderiv(z) - ctx.logderiv(w)) / tp;
    };
    // F(xw, w) as w -> 1, extrapolated
    const double h = 1e-3;
    const cplx a = f(x * std::exp(cplx(h)), std::exp(cplx(h))), b = f(x * std::exp(cplx(h / 2)), std::exp(cplx(h / 2)));
    const cplx limit = 2.0 * b - a;
    const CMat rho = rho_matrix(ctx, x, 1.0, t);
    CHECK(std::abs(rho(0 * 2 + 1, 1 * 2 + 0) + limit) < 1e-9 * std::abs(limit));
}

TEST_CASE("rank one has no off-diagonal dynamics") {
    ThetaContext ctx(0.3);
    Rng rng(1);
    const auto pt = random_elliptic_point(ctx, 1, 2, rng);
    const cplx z = random_spectral_point(pt, rng), w = random_spectral_point(pt, rng, {z});
    const auto rc = verify_dynamical_rmatrix(pt, z, w);
    CHECK(rc.residual == doctest::Approx(0.0));
    CHECK(rc.scale == doctest::Approx(0.0));
    const cplx tp = ctx.theta_prime_one();
    cplx expect = pt.p()(0) / tp;
    for (int i = 0; i < 2; ++i) expect += ctx.logderiv(z / pt.site(i)) * pt.eta(i)(0, 0) / tp;
    CHECK(std::abs(lax_elliptic(pt, z)(0, 0) - expect) < 1e-13);
}

TEST_CASE("Lax matrix quasi-periodicity and residues") {
    for (int n : {2, 3}) {
        ThetaContext ctx(cplx(0.3, 0.1));
        Rng rng(7 + n);
        const auto pt = random_elliptic_point(ctx, n, 2, rng);
        for (int k = 0; k < 5; ++k) {
            const cplx z = random_spectral_point(pt, rng);
            CHECK(quasi_periodicity_residual(pt, z) < 1e-10 * std::max(1.0, max_abs(lax_elliptic(pt, z))));
        }
        // (z - z_i) xi(z) -> z_i eta_i / theta'(1): L and the kernels both have residue 1 / theta'(1) scaled
        const double eps = 1e-7;
        const cplx zi = pt.site(0);
        const CMat res = (eps * zi) * lax_elliptic(pt, zi * (1.0 + eps));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const cplx expect = zi * pt.eta(0)(a, b) / ctx.theta_prime_one();
                CHECK(std::abs(res(a, b) - expect) < 1e-5 * std::max(1.0, pt.scale()));
            }
    }
}

TEST_CASE("trace expansion") {
    for (int n : {2, 3})
        for (int N : {1, 2, 3}) {
            ThetaContext ctx(0.2);
            Rng rng(31 * n + N);
            const auto pt = random_elliptic_point(ctx, n, N, rng);
            for (int k = 0; k < 4; ++k) {
                const auto te = trace_expansion(pt, random_spectral_point(pt, rng));
                CHECK(te.relative() < 1e-9);
            }
        }
}

TEST_CASE("free system") {
    ThetaContext ctx(0.3);
    CVec p(2), t(2);
    p << 0.7, -0.2;
    t << cplx(1.1, 0.1), 1.0;
    EllipticPhasePoint pt(ctx, p, t, {CMat::Zero(2, 2)}, {cplx(1.0)});
    const auto h = hamiltonians_elliptic(pt);
    CHECK(std::abs(h.h0 - (0.49 + 0.04)) < 1e-14);
    CHECK(std::abs(h.h[0]) < 1e-14);
    const auto te = trace_expansion(pt, cplx(0.6, 0.9));
    CHECK(te.residual < 1e-13);
}

TEST_CASE("Hamiltonians Poisson-commute on the constraint surface") {
    for (double q : {0.1, 0.3})
        for (int n : {2, 3})
            for (int N : {1, 2, 3}) {
                ThetaContext ctx(q);
                Rng rng(7 * n + N + static_cast<int>(10 * q));
                EllipticSampleOptions opt;
                opt.constrained = true;
                CHECK(max_bracket(random_elliptic_point(ctx, n, N, rng, opt)) < 1e-8);
            }
}

TEST_CASE("brackets fail off the constraint surface") {
    ThetaContext ctx(0.3);
    Rng rng(3);
    CHECK(max_bracket(random_elliptic_point(ctx, 2, 2, rng)) > 1e-6);
}

TEST_CASE("observable gradients match finite differences") {
    ThetaContext ctx(0.3);
    Rng rng(44);
    const auto pt = random_elliptic_point(ctx, 2, 2, rng);
    const auto obs = hamiltonian_observables(ctx, 2, pt.sites());
    const double h = 1e-6;
    for (const auto &o : obs) {
        const auto g = o.gradient(pt);
        for (int a = 0; a < 2; ++a) {
            CVec pp = pt.p(), pm = pt.p();
            pp(a) += h;
            pm(a) -= h;
            const cplx fd = (o.value(pt.with(pp, pt.t(), pt.eta())) - o.value(pt.with(pm, pt.t(), pt.eta()))) / (2 * h);
            CHECK(std::abs(fd - g.dp(a)) < 1e-6 * std::max(1.0, std::abs(fd)));
            CVec tp = pt.t(), tm = pt.t();
            tp(a) *= std::exp(h);
            tm(a) *= std::exp(-h);
            const cplx fdt = (o.value(pt.with(pt.p(), tp, pt.eta())) - o.value(pt.with(pt.p(), tm, pt.eta()))) / (2 * h);
            CHECK(std::abs(fdt - g.dt(a)) < 1e-6 * std::max(1.0, std::abs(fdt)));
        }
    }
}

TEST_CASE("degeneration to the rational kernel") {
    const auto rows = degeneration_family(2, 2, 5, {0.1, 0.01, 0.001});
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].lax_gap < rows[1].lax_gap);
    CHECK(rows[1].lax_gap < rows[0].lax_gap);
    CHECK(rows[2].lax_gap < 0.05 * rows[0].lax_gap);
    for (const auto &r : rows) CHECK(r.max_bracket < 1e-8);
}

TEST_CASE("elliptic phase points round-trip through JSON") {
    ThetaContext ctx(cplx(0.2, 0.1));
    Rng rng(2);
    const auto pt = random_elliptic_point(ctx, 3, 2, rng);
    const auto back = elliptic_point_from_json(elliptic_point_to_json(pt));
    CHECK(back.ctx().q() == pt.ctx().q());
    CHECK(max_abs(back.p() - pt.p()) == 0.0);
    CHECK(max_abs(back.t() - pt.t()) == 0.0);
    CHECK(max_abs(back.eta(1) - pt.eta(1)) == 0.0);
}
