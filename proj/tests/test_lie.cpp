#include <doctest.h>

#include <hitchin/lie.hpp>

using namespace hitchin;

TEST_CASE("sl2 irreps satisfy the commutation relations") {
    for (int lambda = 0; lambda <= 5; ++lambda) {
        const auto t = sl2_irrep(lambda);
        CHECK(max_abs(commutator(t.e, t.f) - t.h) == 0.0);
        CHECK(max_abs(commutator(t.h, t.e) - 2.0 * t.e) == 0.0);
        CHECK(max_abs(commutator(t.h, t.f) + 2.0 * t.f) == 0.0);
        // Casimir ef + fe + h^2/2 = lambda(lambda + 2)/2
        const CMat cas = t.e * t.f + t.f * t.e + 0.5 * t.h * t.h;
        CHECK(max_abs(cas - 0.5 * lambda * (lambda + 2) * CMat::Identity(lambda + 1, lambda + 1)) < 1e-13);
    }
}

TEST_CASE("integer triples agree with the complex ones") {
    const auto a = sl2_irrep_int(3);
    const auto b = sl2_irrep(3);
    CHECK(max_abs(a.e.cast<double>().cast<cplx>() - b.e) == 0.0);
    CHECK(a.h(0, 0) == 3);
    CHECK(a.f(1, 0) == 1);
    CHECK(a.e(0, 1) == 3);
}

TEST_CASE("matrix algebra basis is orthonormal for the trace form") {
    for (int n : {2, 3, 4})
        for (bool with_id : {false, true}) {
            MatrixAlgebra alg(n, with_id);
            CHECK(alg.dim() == n * n - (with_id ? 0 : 1));
            for (int a = 0; a < alg.dim(); ++a)
                for (int b = 0; b < alg.dim(); ++b) {
                    const cplx g = MatrixAlgebra::form(alg.basis()[a], alg.basis()[b]);
                    CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-14);
                }
        }
}

TEST_CASE("casimir tensor is the swap minus the trace part") {
    for (int n : {2, 3}) {
        MatrixAlgebra sl(n), gl(n, true);
        const CMat p = MatrixAlgebra::permutation(n);
        CHECK(max_abs(gl.casimir_tensor() - p) < 1e-14);
        CHECK(max_abs(sl.casimir_tensor() - (p - CMat::Identity(n * n, n * n) / double(n))) < 1e-14);
    }
}

TEST_CASE("factor representation is a Lie homomorphism of gl2") {
    const auto space = TensorRepSpace::sl2({2, 1, 3});
    MatrixAlgebra gl(2, true);
    for (int i = 0; i < space.sites(); ++i)
        for (const auto &x : gl.basis())
            for (const auto &y : gl.basis()) {
                const CMat lhs = commutator(space.factor_rep(x, i), space.factor_rep(y, i));
                CHECK(max_abs(lhs - space.factor_rep(commutator(x, y), i)) < 1e-13);
            }
}

TEST_CASE("site operators commute across sites and totals add up") {
    const auto space = TensorRepSpace::sl2({1, 2});
    CHECK(space.dim() == 6);
    const auto t0 = sl2_irrep(1), t1 = sl2_irrep(2);
    const CMat a = space.site_operator(t0.e, 0), b = space.site_operator(t1.f, 1);
    CHECK(max_abs(commutator(a, b)) == 0.0);
    const CMat h = space.site_operator(t0.h, 0) + space.site_operator(t1.h, 1);
    CHECK(max_abs(h - space.total_h()) == 0.0);
}

TEST_CASE("weight-zero subspace") {
    const auto space = TensorRepSpace::sl2({1, 1, 2});
    const CMat basis = space.weight_zero_basis();
    CHECK(basis.cols() == static_cast<Eigen::Index>(space.weight_zero_indices().size()));
    CHECK(max_abs(space.total_h() * basis) < 1e-14);
    CHECK(max_abs(basis.adjoint() * basis - CMat::Identity(basis.cols(), basis.cols())) < 1e-14);
    const CMat p = space.weight_zero_projector();
    CHECK(max_abs(p * p - p) < 1e-14);
    CHECK(TensorRepSpace::sl2({1, 2}).weight_zero_indices().empty());
}

TEST_CASE("defining tensor space") {
    const auto space = TensorRepSpace::defining(3, 2);
    CHECK(space.dim() == 9);
    CHECK(space.algebra_rank() == 3);
    CHECK_FALSE(space.is_sl2());
    const CMat x = unit(3, 0, 2);
    CHECK(max_abs(space.total(x) - (space.site_rep(x, 0) + space.site_rep(x, 1))) == 0.0);
}
