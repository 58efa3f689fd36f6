#include <doctest.h>

#include <cmath>

#include <hitchin/random.hpp>
#include <hitchin/theta_expr.hpp>
#include <hitchin/theta_identities.hpp>

#include "oracles.hpp"

using namespace hitchin;

namespace {

const std::vector<cplx> nomes{0.1, 0.3, cplx(0.5, 0.1)};

cplx point(const ThetaContext &ctx, Rng &rng) {
    for (;;) {
        cplx z = rng.annulus(0.5, 1.8);
        if (!ctx.near_pole(z)) return z;
    }
}

} // namespace

TEST_CASE("theta agrees with the bilateral series") {
    for (cplx q : nomes) {
        ThetaContext ctx(q);
        Rng rng(11);
        for (int k = 0; k < 20; ++k) {
            const cplx z = point(ctx, rng);
            CHECK(std::abs(ctx.theta(z) - oracle::theta_series(q, z)) < 1e-12);
        }
    }
}

TEST_CASE("theta vanishes on the lattice and the guard reports it") {
    ThetaContext ctx(0.3);
    CHECK(std::abs(ctx.theta(1.0)) == 0.0);
    CHECK_THROWS_AS(ctx.logderiv(0.3), PoleError);
    CHECK_THROWS_AS(ctx.wp(1.0 / 0.09), PoleError);
    try {
        ctx.logderiv(0.09 * (1.0 + 1e-14));
    } catch (const PoleError &e) {
        CHECK(std::abs(e.lattice_point() - 0.09) < 1e-12);
    }
}

TEST_CASE("derivative at one is minus the squared Euler product") {
    for (cplx q : nomes) {
        ThetaContext ctx(q);
        cplx prod = 1.0;
        for (int i = 1; i < 200; ++i) prod *= (1.0 - std::pow(q, i)) * (1.0 - std::pow(q, i));
        CHECK(std::abs(ctx.theta_prime_one() + prod) < 1e-14);
        // theta'(1) = lim theta(z) / (z - 1)
        const double h = 1e-6;
        const cplx fd = (ctx.theta(1.0 + h) - ctx.theta(1.0 - h)) / (2 * h);
        CHECK(std::abs(fd - ctx.theta_prime_one()) < 1e-8);
    }
}

TEST_CASE("wp constant matches Richardson extrapolation of the Laurent tail") {
    for (cplx q : nomes) {
        ThetaContext ctx(q);
        CHECK(std::abs(ctx.wp_constant() - oracle::wp_constant_richardson(ctx)) < 1e-8);
        // wp(e^tau) - 1/tau^2 = O(tau^2): halving tau divides the remainder by four
        const auto rest = [&](double tau) { return std::abs(ctx.wp(std::exp(cplx(tau))) - 1.0 / (tau * tau)); };
        CHECK(rest(5e-3) / rest(1e-2) == doctest::Approx(0.25).epsilon(0.01));
    }
}

TEST_CASE("logarithmic derivative has unit residue at one") {
    ThetaContext ctx(0.3);
    for (double e : {1e-4, -1e-4, 1e-5}) {
        const cplx z = 1.0 + cplx(e, e / 2);
        CHECK(std::abs((z - 1.0) * ctx.logderiv(z) - 1.0) < 10 * std::abs(e));
    }
}

TEST_CASE("functional equations and the logarithmic derivative shift") {
    for (cplx q : nomes) {
        ThetaContext ctx(q);
        Rng rng(5);
        for (int k = 0; k < 100; ++k) {
            const cplx z = point(ctx, rng);
            CHECK(functional_equation_residual(ctx, z) < 1e-10);
            CHECK(inversion_residual(ctx, z) < 1e-10);
            CHECK(logderiv_shift_residual(ctx, z) < 1e-10);
            CHECK(logderiv_reflection_residual(ctx, z) < 1e-10);
            CHECK(wp_even_residual(ctx, z) < 1e-10);
        }
    }
}

TEST_CASE("the sign-flipped inversion law does not hold") {
    ThetaContext ctx(0.3);
    CHECK(inversion_variant_residual(ctx, cplx(0.8, 0.4)) > 1e-3);
}

TEST_CASE("kernel identities hold on random points") {
    for (cplx q : nomes) {
        ThetaContext ctx(q);
        Rng rng(9);
        for (int k = 0; k < 100; ++k) {
            IdentityPoint p{point(ctx, rng), point(ctx, rng), point(ctx, rng), point(ctx, rng)};
            for (auto id : {ThetaIdentity::A, ThetaIdentity::B, ThetaIdentity::C}) {
                const double r = check_theta_identity(ctx, id, p);
                CHECK_MESSAGE(r < 1e-10, to_string(id));
            }
            CHECK(wp_kernel_product_residual(ctx, p.t, p.w) < 1e-10);
            CHECK(logderiv_square_residual(ctx, p.z, p.w, p.t) < 1e-10);
        }
    }
}

TEST_CASE("identity names parse") {
    CHECK(parse_theta_identity("B") == ThetaIdentity::B);
    CHECK(to_string(ThetaIdentity::C) == "C");
    CHECK_THROWS(parse_theta_identity("D"));
}

TEST_CASE("Euler derivatives of expressions match centered differences") {
    ThetaContext ctx(cplx(0.3, 0.05));
    const ThetaExpr e = ThetaExpr::kernel(1.0, 1, cplx(0.7, 0.2), 0) * ThetaExpr::wp(2.0, -1) +
                        ThetaExpr::logderiv(0.5, 2, 1) * ThetaExpr::theta(cplx(1.3, 0.1), 1) + ThetaExpr::var(3);
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        const cplx x = rng.annulus(0.8, 1.25);
        const auto f = [&](cplx u) { return e.evaluate(ctx, u); };
        for (int order = 1; order <= 2; ++order) {
            const cplx exact = e.euler_derivative(order).evaluate(ctx, x);
            CHECK(std::abs(exact - oracle::euler_fd(f, x, order)) < 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("closed-form Euler derivatives of theta, L and wp") {
    ThetaContext ctx(0.1);
    const cplx z(0.9, 0.6);
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::abs(ctx.theta_d(z, k) - oracle::euler_fd([&](cplx u) { return ctx.theta(u); }, z, k)) < 1e-5);
        CHECK(std::abs(ctx.logderiv_d(z, k) - oracle::euler_fd([&](cplx u) { return ctx.logderiv(u); }, z, k)) <
              1e-5);
        CHECK(std::abs(ctx.wp_d(z, k) - oracle::euler_fd([&](cplx u) { return ctx.wp(u); }, z, k)) < 1e-4);
    }
}

TEST_CASE("expression algebra simplifies exactly") {
    const ThetaExpr a = ThetaExpr::theta(cplx(0.4), 1);
    CHECK((a - a).is_zero());
    CHECK((a / a) == ThetaExpr(1.0));
    CHECK((ThetaExpr::var(2) * ThetaExpr::var(-2)) == ThetaExpr(1.0));
    ThetaContext ctx(0.3);
    const cplx x(1.1, 0.2);
    const ThetaExpr quotient = ThetaExpr(1.0) / (a + ThetaExpr(2.0));
    CHECK(std::abs(quotient.evaluate(ctx, x) - 1.0 / (a.evaluate(ctx, x) + 2.0)) < 1e-14);
    CHECK(std::abs(quotient.euler_derivative().evaluate(ctx, x) -
                   oracle::euler_fd([&](cplx u) { return quotient.evaluate(ctx, u); }, x, 1)) < 1e-7);
}
