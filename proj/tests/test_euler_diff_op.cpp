#include <doctest.h>

#include <hitchin/euler_diff_op.hpp>
#include <hitchin/random.hpp>

#include "oracles.hpp"

using namespace hitchin;

namespace {

const ThetaContext ctx(cplx(0.3, 0.05));

EulerDiffOp random_op(Rng &rng, int dim) {
    EulerDiffOp op(dim);
    const ThetaExpr fs[] = {ThetaExpr::logderiv(cplx(0.9, 0.1), 2), ThetaExpr::wp(1.0, 2), ThetaExpr::var(1),
                            ThetaExpr::theta(cplx(1.2, -0.3), 1), ThetaExpr(1.0)};
    for (int d = 0; d <= 2; ++d)
        for (int k = 0; k < 2; ++k) {
            const auto &f = fs[static_cast<std::size_t>(rng.uniform(0, 5)) % 5];
            op.add(d, f, rng.gaussian_matrix(dim, dim));
        }
    return op;
}

// operator applied to a test function g(t) v, evaluated at t
CVec apply(const EulerDiffOp &op, const std::function<cplx(cplx)> &g, const CVec &v, cplx t) {
    const auto coeffs = op.evaluate(ctx, t);
    CVec out = CVec::Zero(v.size());
    for (std::size_t d = 0; d < coeffs.size(); ++d)
        out += coeffs[d] * v * (d == 0 ? g(t) : oracle::euler_fd(g, t, static_cast<int>(d)));
    return out;
}

} // namespace

TEST_CASE("composition is associative") {
    Rng rng(1);
    const auto a = random_op(rng, 2), b = random_op(rng, 2), c = random_op(rng, 2);
    const auto lhs = (a * b) * c, rhs = a * (b * c);
    for (cplx t : {cplx(1.1, 0.2), cplx(0.8, -0.4)}) {
        const double scale = std::max(1.0, (a * b * c).magnitude(ctx, t, 0));
        CHECK(coefficient_distance(lhs.evaluate(ctx, t), rhs.evaluate(ctx, t)) < 1e-10 * scale);
    }
}

TEST_CASE("derivative commutes with multiplication into the Euler derivative") {
    const CMat id = CMat::Identity(1, 1);
    const auto lhs = commutator(EulerDiffOp::derivative(1), EulerDiffOp::multiplication(
                                                                 ThetaExpr::logderiv(1.0, 2) * ThetaExpr::wp(0.5, 1), id));
    const auto rhs = EulerDiffOp::multiplication((ThetaExpr::logderiv(1.0, 2) * ThetaExpr::wp(0.5, 1)).euler_derivative(), id);
    const cplx t(1.05, 0.3);
    CHECK(lhs.degree() == 0);
    CHECK(coefficient_distance(lhs.evaluate(ctx, t), rhs.evaluate(ctx, t)) < 1e-12);
}

TEST_CASE("composition agrees with applying the operators in turn") {
    Rng rng(2);
    const auto a = random_op(rng, 2), b = random_op(rng, 2);
    const CVec v = rng.gaussian_matrix(2, 1);
    const cplx t(1.1, 0.15);
    const auto ab = a * b;
    for (int m : {-1, 0, 2}) {
        // B t^m v as a function of u, then A applied with contour-integral derivatives
        const auto bv = [&](cplx u) -> CVec { return std::pow(u, m) * b.apply_monomial(ctx, u, m, v); };
        const auto coeffs = a.evaluate(ctx, t);
        CVec expect = CVec::Zero(2);
        for (std::size_t d = 0; d < coeffs.size(); ++d)
            for (int r = 0; r < 2; ++r) {
                const auto comp = [&](cplx u) { return bv(u)(r); };
                const cplx dv = d == 0 ? comp(t) : oracle::euler_fd(comp, t, static_cast<int>(d));
                expect += coeffs[d].col(r) * dv;
            }
        const CVec got = std::pow(t, m) * ab.apply_monomial(ctx, t, m, v);
        CHECK((got - expect).norm() < 1e-7 * std::max(1.0, expect.norm()));
    }
}

TEST_CASE("monomial application equals the coefficient sum") {
    Rng rng(3);
    const auto a = random_op(rng, 2);
    const CVec v = rng.gaussian_matrix(2, 1);
    const cplx t(0.9, 0.2);
    const int m = 3;
    const CVec direct = apply(a, [&](cplx u) { return std::pow(u, m); }, v, t) / std::pow(t, m);
    CHECK((direct - a.apply_monomial(ctx, t, m, v)).norm() < 1e-8 * std::max(1.0, direct.norm()));
}

TEST_CASE("gauge shift") {
    Rng rng(4);
    const auto a = random_op(rng, 2);
    const cplx t(1.2, -0.1);
    const int c = 2, m = -1;
    const CVec v = rng.gaussian_matrix(2, 1);
    // t^{-c} A t^{c} applied to t^m v is A applied to t^{m+c} v
    const auto shifted = shift_derivative(a.evaluate(ctx, t), cplx(c));
    CVec lhs = CVec::Zero(2);
    for (std::size_t d = 0; d < shifted.size(); ++d) lhs += std::pow(cplx(m), static_cast<int>(d)) * shifted[d] * v;
    CHECK((lhs - a.apply_monomial(ctx, t, m + c, v)).norm() < 1e-12 * std::max(1.0, lhs.norm()));
    CHECK(coefficient_distance(shift_derivative(a.evaluate(ctx, t), 0.0), a.evaluate(ctx, t)) == 0.0);
}

TEST_CASE("ring structure") {
    Rng rng(5);
    const auto a = random_op(rng, 2);
    CHECK((a - a).is_zero());
    CHECK((a - a).degree() == -1);
    CHECK(commutator(a, a).is_zero());
    const auto id = EulerDiffOp::identity(2);
    const cplx t(1.0, 0.4);
    CHECK(coefficient_distance((id * a).evaluate(ctx, t), a.evaluate(ctx, t)) < 1e-13);
    CHECK(coefficient_distance((a * id).evaluate(ctx, t), a.evaluate(ctx, t)) < 1e-13);
    CHECK(EulerDiffOp::derivative(2).degree() == 1);
    CHECK((EulerDiffOp::derivative(2) * EulerDiffOp::derivative(2)).degree() == 2);
    const auto twice = a.scaled(2.0);
    CHECK(coefficient_distance((a + a).evaluate(ctx, t), twice.evaluate(ctx, t)) < 1e-13);
    CHECK(max_abs(a.principal(ctx, t) - a.evaluate(ctx, t).back()) == 0.0);
}

TEST_CASE("multiplication requires a polynomial coefficient") {
    const ThetaExpr quotient = ThetaExpr(1.0) / (ThetaExpr::theta(cplx(0.5), 1) + ThetaExpr(1.0));
    CHECK_THROWS_AS(EulerDiffOp::multiplication(quotient, CMat::Identity(1, 1)), DomainError);
}

TEST_CASE("pole guard on evaluation") {
    const auto op = EulerDiffOp::multiplication(ThetaExpr::logderiv(1.0, 2), CMat::Identity(1, 1));
    CHECK_THROWS_AS(op.evaluate(ctx, 1.0), PoleError);
}
