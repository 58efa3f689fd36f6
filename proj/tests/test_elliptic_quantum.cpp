#include <doctest.h>

#include <hitchin/elliptic_quantum.hpp>

using namespace hitchin;

namespace {

QuantumEllipticParams params_for(cplx q, int k, std::vector<int> weights, std::uint64_t seed) {
    ThetaContext ctx(q);
    Rng rng(seed);
    std::vector<cplx> sites;
    while (sites.size() < weights.size()) {
        const cplx z = rng.annulus(0.75, 1.33);
        bool ok = true;
        for (cplx s : sites) ok = ok && !ctx.near_pole(z / s);
        if (ok) sites.push_back(z);
    }
    return {ctx, k, std::move(weights), std::move(sites)};
}

std::vector<cplx> torus_points(const ThetaContext &ctx, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> ts;
    for (int j = 0; j < count; ++j) ts.push_back(random_torus_point(ctx, rng));
    return ts;
}

const std::vector<int> window{-2, -1, 0, 1, 2};

} // namespace

TEST_CASE("reduced Hamiltonians commute on weight zero") {
    for (int k : {0, 2})
        for (const std::vector<int> &w : {std::vector<int>{2}, {1, 1}, {2, 2}, {1, 1, 2}}) {
            const auto p = params_for(0.3, k, w, 10 + k);
            const auto ops = quantum_hamiltonians(p);
            CHECK(ops.size() == w.size() + 1);
            const auto check = check_reduced_commutativity(p, ops, torus_points(p.ctx, 4, 3), window);
            CHECK_MESSAGE(check.passes(1e-8), "worst residual ", check.max_residual, " scale ", check.max_scale);
        }
}

TEST_CASE("the probe family detects a non-commuting pair") {
    const auto p = params_for(0.3, 0, {1, 1}, 4);
    const auto ops = quantum_hamiltonians(p);
    const auto space = quantum_space(p);
    const auto h = EulerDiffOp::constant(space.site_rep(unit(2, 0, 1), 0) + space.site_rep(unit(2, 1, 0), 1));
    const auto check = check_reduced_commutativity(p, {ops[0], h}, torus_points(p.ctx, 2, 5), window);
    CHECK_FALSE(check.passes(1e-8));
}

TEST_CASE("printed relative constants do not commute") {
    const auto p = params_for(0.3, 0, {1, 1}, 6);
    const auto check = check_reduced_commutativity(p, quantum_hamiltonians(p, QuantumConstants::printed()),
                                                   torus_points(p.ctx, 2, 7), window);
    CHECK(check.max_residual > 1e-6 * std::max(1.0, check.max_scale));
}

TEST_CASE("single-site form commutes identically") {
    const auto p = params_for(0.2, 2, {2}, 8);
    const auto space = quantum_space(p);
    const auto terms = single_site_terms(p);
    REQUIRE(terms.size() == 2);
    CHECK(commutator(terms[0].realize(space, p.k), terms[1].realize(space, p.k)).is_zero());
}

TEST_CASE("symbols reproduce the classical Hamiltonians") {
    for (const std::vector<int> &w : {std::vector<int>{2}, {1, 1}, {1, 2, 1}}) {
        const auto p = params_for(cplx(0.3, 0.05), 2, w, 20);
        const auto sc = check_symbols(p, 20, 21);
        CHECK(sc.residual < 1e-9 * std::max(1.0, sc.scale));
    }
}

TEST_CASE("Lax symbol is the classical Lax matrix") {
    const auto p = params_for(0.3, 0, {1, 1}, 30);
    Rng rng(31);
    for (int j = 0; j < 10; ++j) {
        const auto pt = random_reduced_point(p.ctx, p.sites, rng);
        const cplx z = random_spectral_point(pt, rng);
        const CMat cl = lax_elliptic(pt, z);
        CHECK(max_abs(lax_quantum_symbol(p, z, pt) - cl) < 1e-12 * std::max(1.0, max_abs(cl)));
    }
}

TEST_CASE("Lax operator without sites is the diagonal momentum") {
    QuantumEllipticParams p{ThetaContext(0.3), 1, {}, {}};
    const auto lax = lax_quantum(p, cplx(0.7, 0.4));
    const cplx t(1.1, 0.2);
    const auto d = lax[0].evaluate(p.ctx, t);
    const auto mom = momentum_operator(1, 1).scaled(0.25 / p.ctx.theta_prime_one()).evaluate(p.ctx, t);
    CHECK(coefficient_distance(d, mom) < 1e-14);
    CHECK(lax[1].is_zero());
    CHECK(lax[2].is_zero());
}

TEST_CASE("Weyl and lattice invariance of the Lax operator") {
    for (int k : {0, 2}) {
        const auto p = params_for(0.3, k, {1, 2}, 40 + k);
        Rng rng(41);
        for (int j = 0; j < 5; ++j) {
            const auto pt = random_reduced_point(p.ctx, p.sites, rng);
            const cplx z = random_spectral_point(pt, rng), t = random_torus_point(p.ctx, rng);
            CHECK(weyl_invariance_residual(p, z, t) < 1e-10);
            CHECK(lattice_invariance_residual(p, 0, z, t) < 1e-10);
            CHECK(lattice_invariance_residual(p, 1, z, t) < 1e-10);
            CHECK(quantum_quasi_periodicity_residual(p, z, t) < 1e-10);
        }
    }
}

TEST_CASE("momentum operator") {
    const ThetaContext ctx(0.3);
    const auto p = momentum_operator(1, 2);
    CHECK(p.degree() == 1);
    const cplx t(1.1, 0.3);
    const auto c = p.evaluate(ctx, t);
    CHECK(std::abs(c[1](0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(c[0](0, 0) - 4.0 * ctx.logderiv(t * t)) < 1e-13);
}

TEST_CASE("parameter validation") {
    QuantumEllipticParams p{ThetaContext(0.3), 0, {1, 1}, {cplx(1.0)}};
    CHECK_THROWS_AS(p.validate(), DomainError);
    QuantumEllipticParams coincide{ThetaContext(0.3), 0, {1, 1}, {cplx(1.0), cplx(0.3)}};
    CHECK_THROWS_AS(coincide.validate(), PoleError);
}
