#include <doctest.h>

#include <hitchin/random.hpp>
#include <hitchin/rational_quantum.hpp>

using namespace hitchin;

namespace {

std::vector<Rational> rational_sites(std::initializer_list<std::pair<int, int>> v) {
    std::vector<Rational> out;
    for (auto [p, q] : v) out.emplace_back(p, q);
    return out;
}

std::vector<cplx> as_complex(const std::vector<Rational> &v) {
    std::vector<cplx> out;
    for (const auto &r : v) out.emplace_back(static_cast<double>(r), 0.0);
    return out;
}

} // namespace

TEST_CASE("Gaudin Hamiltonians commute exactly at rational sites") {
    const std::vector<std::vector<int>> weight_sets{{1, 1, 1}, {2, 1, 1}, {1, 1, 1, 1}};
    const auto sites = rational_sites({{0, 1}, {1, 1}, {3, 1}, {-5, 2}});
    for (const auto &w : weight_sets) {
        const std::vector<Rational> s(sites.begin(), sites.begin() + w.size());
        GaudinSystem gs(TensorRepSpace::sl2(w), as_complex(s));
        const auto ex = gs.residues_exact(s);
        QMat total = ex[0];
        for (std::size_t i = 1; i < ex.size(); ++i) total += ex[i];
        CHECK(total.is_zero());
        const auto fl = gs.residues();
        for (std::size_t i = 0; i < ex.size(); ++i) {
            CHECK(max_abs(ex[i].to_complex() - fl[i]) < 1e-13);
            for (std::size_t j = i + 1; j < ex.size(); ++j) {
                CHECK(commutator(ex[i], ex[j]).is_zero());
                CHECK(commutator_norm(fl[i], fl[j]) < 1e-12 * fl[i].norm() * fl[j].norm());
            }
        }
    }
}

TEST_CASE("two sites: residues are opposite") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1}), {cplx(0.5), cplx(-1.0)});
    const auto r = gs.residues();
    CHECK(max_abs(r[0] + r[1]) < 1e-15);
    CHECK(max_abs(r[0] - 2.0 * gs.omega(0, 1) / 1.5) < 1e-15);
}

TEST_CASE("omega on two spin one-half factors") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1}), {cplx(0.0), cplx(1.0)});
    Eigen::ComplexEigenSolver<CMat> es(gs.omega(0, 1));
    std::vector<double> ev;
    for (int k = 0; k < 4; ++k) ev.push_back(es.eigenvalues()(k).real());
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-1.5));
    for (int k = 1; k < 4; ++k) CHECK(ev[k] == doctest::Approx(0.5));
    CHECK(max_abs(gs.omega(0, 1) - (MatrixAlgebra::permutation(2) - 0.5 * CMat::Identity(4, 4))) < 1e-14);
}

TEST_CASE("global invariance") {
    GaudinSystem gs(TensorRepSpace::sl2({2, 1, 1}), {cplx(0.0), cplx(1.0), cplx(-2.5)});
    MatrixAlgebra alg(2);
    for (const auto &h : gs.residues())
        for (const auto &x : alg.basis()) CHECK(commutator_norm(h, gs.space().total(x)) < 1e-12);
}

TEST_CASE("defining representation of sl3") {
    GaudinSystem gs(TensorRepSpace::defining(3, 3), {cplx(0.0), cplx(1.0), cplx(2.0)});
    const auto r = gs.residues();
    CHECK(commutator_norm(r[0], r[1]) < 1e-12);
    CHECK(max_abs(gs.casimir(0) - (8.0 / 3.0) * CMat::Identity(27, 27)) < 1e-12);
}

TEST_CASE("quadratic singular vector reproduces the Gaudin quadratic") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 2}), {cplx(0.2), cplx(1.1)});
    const cplx u(0.4, 0.7);
    CHECK(max_abs(ffr_operator(gs, quadratic_spec(gs.algebra()), u) - gs.quadratic(u)) < 1e-13);
    CHECK(max_abs(ffr_operator(gs, {}, u)) == 0.0);
    const CMat x = unit(2, 0, 1);
    const SingularVectorSpec one{{1.0, {{x, 3}}}};
    CMat expect = CMat::Zero(gs.space().dim(), gs.space().dim());
    for (int i = 0; i < 2; ++i) expect += gs.space().site_rep(x, i) / std::pow(u - gs.sites()[i], 3);
    CHECK(max_abs(ffr_operator(gs, one, u) - expect) < 1e-13);
}

TEST_CASE("s polynomials") {
    for (int n = 2; n <= 6; ++n) {
        const auto s = s_polynomials(n, 20);
        CHECK(s.size() == 20);
        CHECK(s[0] == 0);
        CHECK(s[1] == Rational(n, 2));
        CHECK(s[2] == Rational(-2 * n, 3));
        CHECK(s[3] == Rational(n * (n + 6), 8));
        CHECK(s_recursion_residual(n, 20) == 0);
    }
}

TEST_CASE("diagonal element from the characteristic polynomial") {
    const auto h2 = eigen_h(2);
    CHECK(std::abs(h2.h.trace()) < 1e-14);
    CHECK(std::abs(h2.roots[0] * h2.roots[1] - 1.0) < 1e-14);
    CHECK(std::abs(h2.roots[0] + h2.roots[1]) < 1e-14);
    CHECK(std::abs(h2.roots[0].imag()) == doctest::Approx(1.0));
    const auto h3 = eigen_h(3);
    CHECK(h3.residual < 1e-12);
    CHECK(std::abs(h3.h.trace()) < 1e-12);
    for (cplx r : h3.roots) CHECK(std::abs(r * r * r + 1.5 * r + 2.0) < 1e-12);
}

TEST_CASE("Haar samples are special unitary with the right second moment") {
    Rng rng(3);
    double m = 0.0;
    const int samples = 20000;
    for (int k = 0; k < samples; ++k) {
        const CMat u = haar_su(3, rng);
        if (k < 10) {
            CHECK(max_abs(u * u.adjoint() - CMat::Identity(3, 3)) < 1e-13);
            CHECK(std::abs(u.determinant() - 1.0) < 1e-13);
        }
        m += std::norm(u(0, 0));
    }
    // E|U_11|^2 = 1/n with standard deviation below 0.3 / sqrt(samples)
    CHECK(std::abs(m / samples - 1.0 / 3.0) < 4 * 0.3 / std::sqrt(double(samples)));
}

TEST_CASE("Haar-averaged quadratic is proportional to the Gaudin pencil") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1, 1}), {cplx(0.0), cplx(1.0), cplx(3.0)});
    const CMat h = eigen_h(2).h;
    HaarSampler mc;
    mc.samples = 4000;
    mc.seed = 5;
    const auto fit = fit_quadratic_constant(gs, h, mc);
    CHECK(std::abs(fit.constant_re + 2.0 / 3.0) <= 3 * fit.constant_se + 1e-12);
    CHECK(std::abs(fit.constant_im) <= 3 * fit.constant_se + 1e-12);
    CHECK(fit.residual_norm <= 3 * fit.residual_se + 1e-12);

    HaarSampler quad;
    quad.kind = HaarSampler::Kind::Quadrature;
    const auto pen = higher_gaudin(gs, h, 2, quad);
    const auto res = gs.residues();
    for (const auto &[idx, e] : pen.coefficients) {
        const auto i = std::find(idx.begin(), idx.end(), 1) - idx.begin();
        CHECK(max_abs(e.mean - (-2.0 / 3.0) * res[i]) < 1e-12);
    }
    const cplx zeta(0.3, 0.9);
    CHECK(max_abs(pen.evaluate(gs.sites(), zeta) - (-2.0 / 3.0) * gs.quadratic(zeta)) < 1e-11);
}

TEST_CASE("Haar average of a traceless element vanishes") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1}), {cplx(0.0), cplx(2.0)});
    HaarSampler quad;
    quad.kind = HaarSampler::Kind::Quadrature;
    const auto pen = higher_gaudin(gs, eigen_h(2).h, 1, quad);
    for (const auto &t : pen.site_terms) CHECK(max_abs(t.mean) < 1e-12);
    for (const auto &[idx, e] : pen.coefficients) CHECK(max_abs(e.mean) < 1e-12);
}

TEST_CASE("cubic Haar average commutes with the Gaudin Hamiltonians within error") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1, 1}), {cplx(0.0), cplx(1.0), cplx(3.0)});
    const auto res = gs.residues();
    HaarSampler mc;
    mc.samples = 4000;
    mc.seed = 8;
    const auto pen = higher_gaudin(gs, eigen_h(2).h, 3, mc, res);
    for (const auto &[idx, e] : pen.coefficients)
        for (std::size_t p = 0; p < res.size(); ++p)
            CHECK(e.probe_commutator[p].norm() <= 3 * e.probe_se[p] + 1e-12);
}

TEST_CASE("Monte Carlo is deterministic and independent of the thread count") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1, 1}), {cplx(0.0), cplx(1.0), cplx(3.0)});
    HaarSampler a;
    a.samples = 3000;
    a.chunk = 512;
    a.threads = 1;
    HaarSampler b = a;
    b.threads = 3;
    const auto pa = higher_gaudin(gs, eigen_h(2).h, 2, a), pb = higher_gaudin(gs, eigen_h(2).h, 2, b);
    for (const auto &[idx, e] : pa.coefficients) CHECK(max_abs(e.mean - pb.coefficients.at(idx).mean) == 0.0);
}

TEST_CASE("standard-error target is enforced") {
    GaudinSystem gs(TensorRepSpace::sl2({1, 1}), {cplx(0.0), cplx(2.0)});
    HaarSampler mc;
    mc.samples = 100;
    mc.target_se = 1e-9;
    CHECK_THROWS(higher_gaudin(gs, eigen_h(2).h, 3, mc));
}
