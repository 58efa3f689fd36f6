#include <doctest.h>

#include <hitchin/io.hpp>
#include <hitchin/rational_classical.hpp>

using namespace hitchin;

namespace {

CMat sl2_e() { return unit(2, 0, 1); }
CMat sl2_f() { return unit(2, 1, 0); }

double relative_gradient_error(const Gradient &a, const Gradient &b) {
    double e = 0.0, s = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, max_abs(a[i] - b[i]));
        s = std::max(s, max_abs(a[i]));
    }
    return e / s;
}

} // namespace

TEST_CASE("Lax matrix basics") {
    RationalPhasePoint one({CMat::Random(3, 3)}, {0.0});
    CHECK(max_abs(lax_rational(one, 2.0) - one.eta(0) / 2.0) < 1e-15);

    Rng rng(4);
    const auto pt = random_rational_point(2, 3, rng);
    const double eps = 1e-7;
    for (int i = 0; i < 3; ++i)
        CHECK(max_abs(eps * lax_rational(pt, pt.site(i) + eps) - pt.eta(i)) < 1e-5);
    const cplx big = 1e7;
    CHECK(max_abs(big * lax_rational(pt, big) - pt.total_residue()) < 1e-5);
}

TEST_CASE("sl2 units at two sites") {
    RationalPhasePoint pt({sl2_e(), sl2_f()}, {0.0, 1.0});
    const auto hc = hitchin_coeffs(pt, {2});
    CHECK(std::abs(hc.values.at({2, {1, 0}}) + 2.0) < 1e-14);
    CHECK(std::abs(hc.values.at({2, {0, 1}}) - 2.0) < 1e-14);
    for (cplx z : {cplx(0.3, 0.2), cplx(-1.5, 0.7)}) {
        const CMat l = lax_rational(pt, z);
        CHECK(std::abs((l * l).trace() - hc.reconstruct(pt.sites(), 2, z)) < 1e-13);
    }
}

TEST_CASE("single site carries everything in the Casimir") {
    RationalPhasePoint pt({CMat::Random(2, 2)}, {0.5});
    const auto hc = hitchin_coeffs(pt, {2});
    CHECK(std::abs(hc.values.at({2, {1}})) < 1e-14);
    CHECK(std::abs(hc.casimirs.at({2, 0}) - (pt.eta(0) * pt.eta(0)).trace()) < 1e-14);
}

TEST_CASE("coefficients reconstruct power traces") {
    Rng rng(8);
    for (auto [n, N] : {std::pair{2, 3}, {3, 3}, {3, 4}}) {
        const auto pt = random_rational_point(n, N, rng);
        std::vector<int> degrees;
        for (int d = 2; d <= n; ++d) degrees.push_back(d);
        const auto hc = hitchin_coeffs(pt, degrees);
        for (int k = 0; k < 5; ++k) {
            const cplx z = rng.annulus(0.1, 3.0);
            const CMat l = lax_rational(pt, z);
            CMat pd = l;
            for (int d = 2; d <= n; ++d) {
                pd = pd * l;
                CHECK(std::abs(pd.trace() - hc.reconstruct(pt.sites(), d, z)) < 1e-10 * std::max(1.0, std::abs(pd.trace())));
            }
        }
    }
}

TEST_CASE("nilpotent residues have no double pole") {
    Rng rng(2);
    RationalSampleOptions opt;
    opt.nilpotent = true;
    const auto pt = random_rational_point(2, 4, rng, opt);
    const auto hc = hitchin_coeffs(pt, {2});
    for (int i = 0; i < 4; ++i) {
        CHECK(pt.is_nilpotent(i));
        CHECK(std::abs(hc.casimirs.at({2, i})) < 1e-12);
    }
}

TEST_CASE("bracket on coordinates") {
    Rng rng(6);
    const auto pt = random_rational_point(3, 2, rng);
    CHECK(std::abs(kk_bracket(entry_observable(0, 0, 1), entry_observable(1, 1, 2), pt)) == 0.0);
    const auto f = entry_observable(0, 0, 1);
    CHECK(std::abs(kk_bracket(f, f, pt)) < 1e-15);
    // {eta_ab, eta_cd} = delta_bc eta_ad - delta_ad eta_cb
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    const cplx expect = (b == c ? pt.eta(1)(a, d) : 0.0) - (a == d ? pt.eta(1)(c, b) : 0.0);
                    const cplx got = kk_bracket(entry_observable(1, a, b), entry_observable(1, c, d), pt);
                    CHECK(std::abs(got - expect) < 1e-14);
                }
}

TEST_CASE("analytic gradients agree with finite differences") {
    Rng rng(12);
    for (auto [n, N] : {std::pair{2, 3}, {3, 3}}) {
        const auto pt = random_rational_point(n, N, rng);
        std::vector<int> degrees;
        for (int d = 2; d <= n; ++d) degrees.push_back(d);
        for (const auto &[key, v] : hitchin_coeffs(pt, degrees).values) {
            const auto obs = hitchin_observable(key);
            CHECK(relative_gradient_error(hitchin_gradient(pt, key), fd_gradient(obs, pt)) < 1e-6);
        }
    }
}

TEST_CASE("Hitchin coefficients are in involution") {
    Rng rng(21);
    for (auto [n, N] : {std::pair{2, 3}, {2, 4}, {3, 3}})
        for (bool nil : {false, true}) {
            RationalSampleOptions opt;
            opt.nilpotent = nil;
            const auto pt = random_rational_point(n, N, rng, opt);
            std::vector<int> degrees;
            for (int d = 2; d <= n; ++d) degrees.push_back(d);
            std::vector<Gradient> g;
            for (const auto &[key, v] : hitchin_coeffs(pt, degrees).values) g.push_back(hitchin_gradient(pt, key));
            const double scale = std::pow(pt.scale(), 2 * n - 1);
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t b = a + 1; b < g.size(); ++b)
                    CHECK(std::abs(kk_bracket(g[a], g[b], pt)) < 1e-8 * scale);
        }
}

TEST_CASE("finite-difference bracket matches the analytic one") {
    Rng rng(13);
    const auto pt = random_rational_point(2, 3, rng);
    const auto f = hitchin_observable({2, {1, 0, 0}});
    const auto g = entry_observable(1, 0, 1);
    CHECK(std::abs(kk_bracket(f, g, pt) - kk_bracket_fd(f, g, pt)) < 1e-6 * std::max(1.0, pt.scale() * pt.scale()));
}

TEST_CASE("Lax bracket has the rational r-matrix form") {
    Rng rng(14);
    for (int n : {2, 3}) {
        const auto pt = random_rational_point(n, 3, rng);
        const cplx z(0.3, 0.2), w(-1.0, 0.5);
        const CMat lhs = lax_bracket_tensor(pt, z, w);
        CHECK(max_abs(lhs - lax_bracket_rmatrix_form(pt, z, w)) < 1e-12 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("quadratic flow at one site") {
    Rng rng(15);
    const auto pt = random_rational_point(2, 2, rng);
    const auto field = flow_field(pt, {2, {1, 0}});
    const CMat c = commutator(pt.eta(0), pt.eta(1)) / (pt.site(0) - pt.site(1));
    CHECK(max_abs(field[1] + c) < 1e-13);
    CHECK(max_abs(field[0] - c) < 1e-13);
    CHECK(max_abs(field[0] + field[1]) < 1e-13);
}

TEST_CASE("flow field is the Hamiltonian vector field") {
    Rng rng(16);
    const auto pt = random_rational_point(3, 3, rng);
    for (const auto &[key, v] : hitchin_coeffs(pt, {2, 3}).values) {
        const auto field = flow_field(pt, key);
        // d eta_ab / dt = {eta_ab, H} / d, checked through the finite-difference bracket
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const cplx fd = kk_bracket_fd(entry_observable(i, a, b), hitchin_observable(key), pt) /
                                    double(key.degree);
                    CHECK(std::abs(field[i](a, b) - fd) < 1e-8 * std::max(1.0, std::abs(fd)));
                }
    }
}

TEST_CASE("RK4 conserves the spectral invariants with fourth order") {
    Rng rng(17);
    RationalSampleOptions opt;
    opt.nilpotent = true;
    const auto pt = random_rational_point(2, 3, rng, opt);
    FlowOptions fo;
    const auto traj = integrate_flow(pt, {2, {0, 1, 0}}, fo);
    CHECK(traj.max_drift < 1e-8);
    CHECK(traj.max_eigen_drift < 1e-7);
    CHECK(traj.times.back() == doctest::Approx(1.0));

    FlowOptions coarse = fo, fine = fo;
    coarse.dt = 0.1;
    fine.dt = 0.05;
    const double order = std::log2(integrate_flow(pt, {2, {0, 1, 0}}, coarse).max_drift /
                                   integrate_flow(pt, {2, {0, 1, 0}}, fine).max_drift);
    CHECK(order >= 3.7);

    FlowOptions tiny = fo;
    tiny.T = 1e-3;
    CHECK(integrate_flow(pt, {2, {0, 1, 0}}, tiny).max_drift < 1e-14);
}

TEST_CASE("flow stops on blow-up") {
    Rng rng(18);
    const auto pt = random_rational_point(2, 3, rng);
    FlowOptions fo;
    fo.overflow = 1e-3;
    CHECK_THROWS_AS(integrate_flow(pt, {2, {1, 0, 0}}, fo), StepRejectedError);
}

TEST_CASE("phase points round-trip through JSON") {
    Rng rng(19);
    const auto pt = random_rational_point(3, 2, rng);
    const auto back = rational_point_from_json(rational_point_to_json(pt));
    CHECK(back.sites() == pt.sites());
    for (int i = 0; i < 2; ++i) CHECK(max_abs(back.eta(i) - pt.eta(i)) == 0.0);
    CHECK_THROWS_AS(rational_point_from_json("{\"n\": 2}"), DomainError);
}

TEST_CASE("sampler rejects impossible site placement") {
    Rng rng(20);
    RationalSampleOptions opt;
    opt.site_radius = 0.1;
    opt.min_gap = 1.0;
    CHECK_THROWS(random_rational_point(2, 5, rng, opt));
}
