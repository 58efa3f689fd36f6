#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include <hitchin/hitchin.hpp>

namespace hitchin::cli {

using nlohmann::json;

namespace {

constexpr double rounding_floor = 1e3 * std::numeric_limits<double>::epsilon();

class GroupTimer {
public:
    GroupTimer(Report &r, std::string group)
      : report_(r)
      , group_(std::move(group))
      , start_(std::chrono::steady_clock::now()) {}
    ~GroupTimer() {
        std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
        report_.group_seconds[group_] += d.count();
    }

private:
    Report &report_;
    std::string group_;
    std::chrono::steady_clock::time_point start_;
};

std::string join(const std::vector<int> &v, const std::string &sep = " ") {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
    return s;
}

std::string fmt(double x) { return format_real(x); }
std::string fmt(cplx z) { return format_complex(z); }
std::string flag(bool b) { return b ? "true" : "false"; }

json complex_json(cplx z) { return format_complex(z); }

// random point of the annulus 0.5 < |z| < 1.8, resampled away from the pole lattice
cplx theta_point(const ThetaContext &ctx, Rng &rng) {
    for (;;) {
        cplx z = rng.annulus(0.5, 1.8);
        if (!ctx.near_pole(z)) return z;
    }
}

double fd_order(const std::function<cplx(cplx)> &f, const std::function<cplx(cplx)> &df, cplx z, double h) {
    auto err = [&](double s) {
        cplx fd = (f(z * std::exp(s)) - f(z * std::exp(-s))) / (2.0 * s);
        return std::abs(fd - df(z));
    };
    return std::log2(err(h) / err(h / 2));
}

// ---------------------------------------------------------------- theta-check

void run_theta(const ExperimentConfig &cfg, Report &rep) {
    const auto qs = cfg.complex_list("q");
    const int points = static_cast<int>(cfg.integer("points"));
    const double tol = cfg.real("tol");
    const double h = cfg.real("fd_step");
    const std::uint64_t seed = cfg.unsigned_integer("seed");
    if (qs.empty()) throw ConfigError("key 'q' must list at least one value");

    GroupTimer timer(rep, "theta");
    CsvWriter table({"q", "check", "max_residual", "tol", "pass"});
    std::map<std::string, double> worst, printed;
    double min_order = std::numeric_limits<double>::infinity();
    json cq = json::object();

    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const ThetaContext ctx(qs[qi]);
        cq[format_complex(qs[qi])] = complex_json(ctx.wp_constant());
        Rng rng(seed, qi);
        std::map<std::string, double> r;
        std::map<std::string, double> variant;
        auto bump = [](std::map<std::string, double> &m, const std::string &k, double v) {
            m[k] = std::max(m[k], v);
        };
        for (int k = 0; k < points; ++k) {
            const cplx z = theta_point(ctx, rng), w = theta_point(ctx, rng), t = theta_point(ctx, rng),
                       x = theta_point(ctx, rng);
            const IdentityPoint p{z, w, t, x};
            try {
                bump(r, "functional_equation", functional_equation_residual(ctx, z));
                bump(r, "inversion", inversion_residual(ctx, z));
                bump(r, "logderiv_shift", logderiv_shift_residual(ctx, z));
                bump(r, "logderiv_reflection", logderiv_reflection_residual(ctx, z));
                bump(r, "wp_even", wp_even_residual(ctx, z));
                bump(r, "identity_A", check_theta_identity(ctx, ThetaIdentity::A, p));
                bump(r, "identity_B", check_theta_identity(ctx, ThetaIdentity::B, p));
                bump(r, "identity_C", check_theta_identity(ctx, ThetaIdentity::C, p));
                bump(r, "wp_kernel_product", wp_kernel_product_residual(ctx, t, w));
                bump(r, "logderiv_square", logderiv_square_residual(ctx, z, w, t));
                bump(variant, "inversion_printed_form", inversion_variant_residual(ctx, z));
                bump(variant, "identity_B_printed_form", theta_identity_b_variant(ctx, p));
            } catch (const PoleError &) {
                continue; // combined arguments landed on the lattice; drop the sample
            }
        }
        // Euler derivatives against centered differences in log z
        const cplx z0 = theta_point(ctx, rng);
        min_order = std::min({min_order,
                              fd_order([&](cplx u) { return ctx.theta(u); }, [&](cplx u) { return ctx.theta_d(u, 1); },
                                       z0, h),
                              fd_order([&](cplx u) { return ctx.logderiv(u); },
                                       [&](cplx u) { return ctx.logderiv_d(u, 1); }, z0, h),
                              fd_order([&](cplx u) { return ctx.wp(u); }, [&](cplx u) { return ctx.wp_d(u, 1); }, z0, h)});

        for (const auto &[name, v] : r) {
            table.add_row({fmt(qs[qi]), name, fmt(v), fmt(tol), flag(v <= tol)});
            worst[name] = std::max(worst[name], v);
        }
        for (const auto &[name, v] : variant) {
            table.add_row({fmt(qs[qi]), name, fmt(v), "", "informational"});
            printed[name] = std::max(printed[name], v);
        }
    }
    for (const auto &[name, v] : worst) rep.add({"theta", name, v, tol});
    rep.add({"theta", "euler_derivative_fd_order", min_order, cfg.real("order_min"), true});
    for (const auto &[name, v] : printed) rep.add({"theta", name, v, 0.0, false, true});
    rep.tables.emplace_back("theta_check", std::move(table));
    rep.metadata["c_q"] = cq.dump();
}

// ---------------------------------------------------------- rational-classical

// summand bound of the bracket, floored by the homogeneity scale s^(d + d' - 1)
// (gradients of Casimirs vanish at nilpotent points)
double bracket_magnitude(const Gradient &ga, int da, const Gradient &gb, int db, const RationalPhasePoint &pt) {
    double m = 0.0;
    for (int i = 0; i < pt.sites_count(); ++i) m += 2.0 * pt.eta(i).norm() * ga[i].norm() * gb[i].norm();
    return std::max(m, std::pow(pt.scale(), da + db - 1));
}

std::vector<HitchinKey> hitchin_keys(const RationalPhasePoint &pt) {
    std::vector<int> degrees;
    for (int d = 2; d <= pt.n(); ++d) degrees.push_back(d);
    std::vector<HitchinKey> keys;
    for (const auto &[k, v] : hitchin_coeffs(pt, degrees).values) keys.push_back(k);
    return keys;
}

void run_rational_classical(const ExperimentConfig &cfg, Report &rep) {
    const std::uint64_t seed = cfg.unsigned_integer("seed");
    const int points = static_cast<int>(cfg.integer("points"));
    const int fd_points = static_cast<int>(cfg.integer("fd_points"));
    const double tol = cfg.real("tol"), tol_fd = cfg.real("tol_fd"), tol_tensor = cfg.real("tol_tensor");

    double worst_bracket = 0.0, worst_fd = 0.0, worst_tensor = 0.0;
    {
        GroupTimer timer(rep, "involutivity");
        CsvWriter table({"n", "N", "point", "nilpotent", "observables", "max_bracket_relative", "gradient_fd_error",
                         "lax_tensor_residual"});
        std::uint64_t stream = 0;
        for (auto [n, N] : cfg.pair_list("systems")) {
            if (n < 2 || N < 1) throw ConfigError("key 'systems': need n >= 2 and N >= 1");
            for (int k = 0; k < points; ++k) {
                Rng rng(seed, stream++);
                RationalSampleOptions opt;
                opt.nilpotent = (k % 2 == 1);
                const auto pt = random_rational_point(n, N, rng, opt);

                std::vector<Gradient> grads;
                std::vector<int> degree;
                const auto keys = hitchin_keys(pt);
                for (const auto &key : keys) {
                    grads.push_back(hitchin_gradient(pt, key));
                    degree.push_back(key.degree);
                }
                for (int d = 2; d <= n; ++d)
                    for (int i = 0; i < N; ++i) {
                        grads.push_back(casimir_gradient(pt, d, i));
                        degree.push_back(d);
                    }

                double b = 0.0;
                for (std::size_t x = 0; x < grads.size(); ++x)
                    for (std::size_t y = x + 1; y < grads.size(); ++y) {
                        const double mag = bracket_magnitude(grads[x], degree[x], grads[y], degree[y], pt);
                        b = std::max(b, std::abs(kk_bracket(grads[x], grads[y], pt)) / mag);
                    }
                worst_bracket = std::max(worst_bracket, b);

                std::string fd_cell;
                if (k < fd_points) {
                    double e = 0.0;
                    for (std::size_t x = 0; x < keys.size(); ++x) {
                        const auto fd = fd_gradient(hitchin_observable(keys[x]), pt);
                        double top = 1.0;
                        for (const auto &g : grads[x]) top = std::max(top, max_abs(g));
                        for (int i = 0; i < N; ++i) e = std::max(e, max_abs(grads[x][i] - fd[i]) / top);
                    }
                    worst_fd = std::max(worst_fd, e);
                    fd_cell = fmt(e);
                }

                const cplx z = rng.annulus(0.2, 3.0), w = rng.annulus(0.2, 3.0);
                const CMat lhs = lax_bracket_tensor(pt, z, w);
                const double tr = max_abs(lhs - lax_bracket_rmatrix_form(pt, z, w)) / std::max(1.0, max_abs(lhs));
                worst_tensor = std::max(worst_tensor, tr);

                table.add_row({std::to_string(n), std::to_string(N), std::to_string(k), flag(opt.nilpotent),
                               std::to_string(grads.size()), fmt(b), fd_cell, fmt(tr)});
            }
        }
        rep.tables.emplace_back("rational_classical", std::move(table));
    }
    rep.add({"involutivity", "max_bracket_relative", worst_bracket, tol});
    rep.add({"involutivity", "gradient_fd_error", worst_fd, tol_fd});
    rep.add({"involutivity", "lax_bracket_tensor", worst_tensor, tol_tensor});

    GroupTimer timer(rep, "flow");
    const int fn = static_cast<int>(cfg.integer("flow_n")), fN = static_cast<int>(cfg.integer("flow_N"));
    Rng rng(seed, 1u << 20);
    RationalSampleOptions opt;
    opt.nilpotent = cfg.boolean("flow_nilpotent");
    const auto start = random_rational_point(fn, fN, rng, opt);

    FlowOptions fo;
    fo.T = cfg.real("flow_T");
    fo.dt = cfg.real("flow_dt");
    const double coarse = cfg.real("order_dt");
    CsvWriter flows({"key", "dt", "T", "max_drift", "max_eigen_drift"});
    double drift = 0.0, eigen = 0.0, order = std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto &key : hitchin_keys(start)) {
        if (key.degree != 2) continue;
        const auto traj = integrate_flow(start, key, fo);
        drift = std::max(drift, traj.max_drift);
        eigen = std::max(eigen, traj.max_eigen_drift);
        flows.add_row({key.str(), fmt(fo.dt), fmt(fo.T), fmt(traj.max_drift), fmt(traj.max_eigen_drift)});
        if (first) {
            rep.tables.emplace_back("rational_trajectory", trajectory_csv(traj));
            first = false;
        }
        FlowOptions a = fo, b = fo;
        a.dt = coarse;
        b.dt = coarse / 2;
        a.sample_every = b.sample_every = 1;
        const auto ta = integrate_flow(start, key, a), tb = integrate_flow(start, key, b);
        flows.add_row({key.str(), fmt(a.dt), fmt(a.T), fmt(ta.max_drift), fmt(ta.max_eigen_drift)});
        flows.add_row({key.str(), fmt(b.dt), fmt(b.T), fmt(tb.max_drift), fmt(tb.max_eigen_drift)});
        order = std::min(order, std::log2(ta.max_drift / tb.max_drift));
    }
    if (first) throw ConfigError("flow system has no degree-2 coefficients");
    rep.tables.emplace_back("rational_flow", std::move(flows));
    rep.add({"flow", "invariant_drift", drift, cfg.real("tol_flow")});
    rep.add({"flow", "eigenvalue_drift", eigen, cfg.real("tol_eigen")});
    rep.add({"flow", "observed_order", order, cfg.real("order_min"), true});
}

// ------------------------------------------------------------ rational-quantum

std::vector<Rational> random_rational_sites(int count, Rng &rng) {
    std::set<Rational> seen;
    std::vector<Rational> out;
    while (static_cast<int>(out.size()) < count) {
        const long long num = static_cast<long long>(std::floor(rng.uniform(-12.0, 13.0)));
        const long long den = 1 + static_cast<long long>(std::floor(rng.uniform(0.0, 3.0)));
        Rational r(num, den);
        if (seen.insert(r).second) out.push_back(r);
    }
    return out;
}

std::string rational_text(const std::vector<Rational> &v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + v[k].str();
    return s;
}

std::vector<cplx> to_complex(const std::vector<Rational> &v) {
    std::vector<cplx> out;
    for (const auto &r : v) out.emplace_back(static_cast<double>(r), 0.0);
    return out;
}

double relative_commutator(const CMat &a, const CMat &b) {
    const double s = a.norm() * b.norm();
    const double c = (a * b - b * a).norm();
    return s > 0 ? c / s : c;
}

void run_rational_quantum(const ExperimentConfig &cfg, Report &rep) {
    const std::uint64_t seed = cfg.unsigned_integer("seed");
    const int n = static_cast<int>(cfg.integer("n"));
    const double tol = cfg.real("tol");
    if (n < 2) throw ConfigError("key 'n' must be at least 2");
    const auto sets = cfg.weight_sets("weights");
    std::vector<Rational> given;
    for (auto [p, d] : cfg.rational_list("sites")) given.emplace_back(p, d);

    std::vector<Rational> triple_sites;
    {
        GroupTimer timer(rep, "gaudin");
        CsvWriter table({"weights", "sites", "pair", "exact_zero", "relative_commutator"});
        double worst = 0.0, worst_inv = 0.0;
        bool exact = true, sum_zero = true;
        for (std::size_t s = 0; s < sets.size(); ++s) {
            const auto &wts = sets[s];
            const int N = static_cast<int>(wts.size());
            if (N < 2) throw ConfigError("key 'weights': each set needs at least two sites");
            std::vector<Rational> sites;
            if (!given.empty()) {
                if (static_cast<int>(given.size()) < N)
                    throw ConfigError("key 'sites': " + std::to_string(N) + " sites needed");
                sites.assign(given.begin(), given.begin() + N);
                if (std::set<Rational>(sites.begin(), sites.end()).size() != sites.size())
                    throw ConfigError("key 'sites': sites must be distinct");
            } else {
                Rng rng(seed, 100 + s);
                sites = random_rational_sites(N, rng);
            }
            if (n == 2 && wts == std::vector<int>{1, 1, 1} && triple_sites.empty()) triple_sites = sites;
            auto space = n == 2 ? TensorRepSpace::sl2(wts) : TensorRepSpace::defining(n, N);
            const GaudinSystem gs(space, to_complex(sites));
            const auto res = gs.residues();
            const auto ex = gs.residues_exact(sites);
            QMat total = ex.front();
            for (int i = 1; i < N; ++i) total += ex[i];
            sum_zero = sum_zero && total.is_zero();
            for (int i = 0; i < N; ++i)
                for (int j = i + 1; j < N; ++j) {
                    const bool z = commutator(ex[i], ex[j]).is_zero();
                    exact = exact && z;
                    const double r = relative_commutator(res[i], res[j]);
                    worst = std::max(worst, r);
                    table.add_row({join(wts), rational_text(sites), std::to_string(i) + "-" + std::to_string(j),
                                   flag(z), fmt(r)});
                }
            const MatrixAlgebra alg(space.algebra_rank());
            for (const auto &x : alg.basis()) {
                const CMat tot = space.total(x);
                for (const auto &h : res) worst_inv = std::max(worst_inv, relative_commutator(h, tot));
            }
        }
        rep.tables.emplace_back("gaudin", std::move(table));
        rep.add({"gaudin", "commutator_relative", worst, tol});
        rep.add({"gaudin", "commutator_exact_nonzero", exact ? 0.0 : 1.0, 0.0});
        rep.add({"gaudin", "residue_sum_exact_nonzero", sum_zero ? 0.0 : 1.0, 0.0});
        rep.add({"gaudin", "global_invariance_relative", worst_inv, tol});
    }

    {
        GroupTimer timer(rep, "s_table");
        const int p_max = static_cast<int>(cfg.integer("p_max"));
        const int n_max = static_cast<int>(cfg.integer("n_max"));
        if (p_max < 4 || n_max < 2) throw ConfigError("s_p table needs p_max >= 4 and n_max >= 2");
        CsvWriter table({"n", "p", "s_p"});
        bool recursion = true, printed = true;
        for (int m = 2; m <= n_max; ++m) {
            const auto s = s_polynomials(m, p_max);
            recursion = recursion && s_recursion_residual(m, p_max) == 0;
            printed = printed && s[1] == Rational(m, 2) && s[2] == Rational(-2 * m, 3) &&
                      s[3] == Rational(m * (m + 6), 8);
            for (int p = 1; p <= p_max; ++p) table.add_row({std::to_string(m), std::to_string(p), s[p - 1].str()});
        }
        rep.tables.emplace_back("s_table", std::move(table));
        rep.add({"s_table", "recursion_nonzero", recursion ? 0.0 : 1.0, 0.0});
        rep.add({"s_table", "low_order_mismatch", printed ? 0.0 : 1.0, 0.0});
    }

    if (!cfg.boolean("higher") || n != 2) return;
    GroupTimer timer(rep, "higher_gaudin");
    if (triple_sites.empty()) {
        if (given.size() >= 3)
            triple_sites.assign(given.begin(), given.begin() + 3);
        else {
            Rng rng(seed, 99);
            triple_sites = random_rational_sites(3, rng);
        }
    }
    const GaudinSystem gs(TensorRepSpace::sl2({1, 1, 1}), to_complex(triple_sites));
    const auto res = gs.residues();
    const CMat h = eigen_h(2).h;
    const double k = cfg.real("se_factor");
    const cplx expected = (h * h).trace() / 3.0;

    HaarSampler mc;
    mc.seed = stream_seed(seed, 7001);
    mc.samples = cfg.integer("mc_samples");
    mc.threads = static_cast<int>(cfg.integer("threads"));
    HaarSampler quad;
    quad.kind = HaarSampler::Kind::Quadrature;
    quad.quad_polar = static_cast<int>(cfg.integer("quad_polar"));
    quad.quad_azimuth = static_cast<int>(cfg.integer("quad_azimuth"));
    quad.threads = mc.threads;

    const auto fit = fit_quadratic_constant(gs, h, mc);
    const double c_err = std::abs(cplx(fit.constant_re, fit.constant_im) - expected);
    rep.add({"higher_gaudin", "l2_constant_error", c_err, k * fit.constant_se + rounding_floor});
    rep.add({"higher_gaudin", "l2_orthogonal_residual", fit.residual_norm, k * fit.residual_se + rounding_floor});

    CsvWriter table({"l", "index", "sampler", "samples", "mean_norm", "se_norm", "max_commutator_over_se"});
    double l3_ratio = 0.0, quad_ratio = 0.0, quad_exact = 0.0;
    for (int l : {2, 3}) {
        mc.seed = stream_seed(seed, 7001 + l);
        const auto pm = higher_gaudin(gs, h, l, mc, res);
        const auto pq = higher_gaudin(gs, h, l, quad, res);
        for (const auto &[idx, e] : pm.coefficients) {
            double ratio = 0.0;
            for (std::size_t p = 0; p < e.probe_commutator.size(); ++p) {
                const double c = e.probe_commutator[p].norm();
                ratio = std::max(ratio, e.probe_se[p] > 0 ? c / e.probe_se[p] : (c > rounding_floor ? c : 0.0));
            }
            if (l == 3) l3_ratio = std::max(l3_ratio, ratio);
            const auto &eq = pq.coefficients.at(idx);
            const double se = std::hypot(e.se_norm(), eq.se_norm());
            const double d = (e.mean - eq.mean).norm();
            quad_ratio = std::max(quad_ratio, se > 0 ? d / se : (d > rounding_floor ? d : 0.0));
            if (l == 2) {
                const int i = static_cast<int>(std::find(idx.begin(), idx.end(), 1) - idx.begin());
                quad_exact = std::max(quad_exact, max_abs(eq.mean - expected * res[i]));
            }
            table.add_row({std::to_string(l), join(idx), "monte_carlo", std::to_string(pm.samples), fmt(e.mean.norm()),
                           fmt(e.se_norm()), fmt(ratio)});
            table.add_row({std::to_string(l), join(idx), "quadrature", std::to_string(pq.samples),
                           fmt(eq.mean.norm()), fmt(eq.se_norm()), ""});
        }
    }
    rep.tables.emplace_back("higher_gaudin", std::move(table));
    rep.add({"higher_gaudin", "l3_commutator_over_se", l3_ratio, k});
    rep.add({"higher_gaudin", "quadrature_vs_mc_over_se", quad_ratio, k});
    rep.add({"higher_gaudin", "quadrature_l2_vs_pencil", quad_exact, tol});
}

// ---------------------------------------------------------- elliptic-classical

void run_elliptic_classical(const ExperimentConfig &cfg, Report &rep) {
    const std::uint64_t seed = cfg.unsigned_integer("seed");
    const auto qs = cfg.complex_list("q");
    const auto ns = cfg.int_list("n"), Ns = cfg.int_list("N");
    const int points = static_cast<int>(cfg.integer("points"));
    const double tol = cfg.real("tol");
    if (qs.empty() || ns.empty() || Ns.empty()) throw ConfigError("keys 'q', 'n', 'N' must be non-empty");

    struct Combo {
        cplx q;
        int n, N;
    };
    std::vector<Combo> combos;
    for (cplx q : qs)
        for (int n : ns)
            for (int N : Ns) {
                if (n < 2 || N < 1) throw ConfigError("keys 'n', 'N': need n >= 2 and N >= 1");
                combos.push_back({q, n, N});
            }

    CsvWriter table({"q", "n", "N", "seed", "residual_eq21", "residual_quasiperiod", "residual_trace_expansion",
                     "max_bracket_H", "point", "constrained"});
    double eq21 = 0.0, quasi = 0.0, trace = 0.0, bracket = 0.0, loose_bracket = 0.0;
    bool rho_exercised = false;
    double s21 = 0.0, s_ham = 0.0;
    json cq = json::object();
    for (int k = 0; k < points; ++k) {
        const Combo &c = combos[k % combos.size()];
        const bool constrained = (k / combos.size()) % 2 == 1;
        const std::uint64_t ps = stream_seed(seed, k);
        Rng rng(ps);
        const ThetaContext ctx(c.q);
        cq[format_complex(c.q)] = complex_json(ctx.wp_constant());
        EllipticSampleOptions opt;
        opt.constrained = constrained;
        const auto pt = random_elliptic_point(ctx, c.n, c.N, rng, opt);
        const cplx z = random_spectral_point(pt, rng), w = random_spectral_point(pt, rng, {z});

        auto t0 = std::chrono::steady_clock::now();
        const double r21 = verify_dynamical_rmatrix(pt, z, w).relative();
        const double qp = quasi_periodicity_residual(pt, z) / std::max(1.0, max_abs(lax_elliptic(pt, z)));
        if (pt.charges().cwiseAbs().maxCoeff() > 1e-6) rho_exercised = true;
        auto t1 = std::chrono::steady_clock::now();
        const double te = std::max(trace_expansion(pt, z).relative(), trace_expansion(pt, w).relative());
        const auto obs = hamiltonian_observables(ctx, c.n, pt.sites());
        std::vector<EllGradient> grads;
        for (const auto &o : obs) grads.push_back(o.gradient(pt));
        double b = 0.0;
        for (std::size_t x = 0; x < grads.size(); ++x)
            for (std::size_t y = x + 1; y < grads.size(); ++y)
                b = std::max(b, elliptic_bracket(grads[x], grads[y], pt).relative());
        auto t2 = std::chrono::steady_clock::now();
        s21 += std::chrono::duration<double>(t1 - t0).count();
        s_ham += std::chrono::duration<double>(t2 - t1).count();

        eq21 = std::max(eq21, r21);
        quasi = std::max(quasi, qp);
        trace = std::max(trace, te);
        (constrained ? bracket : loose_bracket) = std::max(constrained ? bracket : loose_bracket, b);
        table.add_row({fmt(c.q), std::to_string(c.n), std::to_string(c.N), std::to_string(ps), fmt(r21), fmt(qp),
                       fmt(te), fmt(b), std::to_string(k), flag(constrained)});
    }
    rep.tables.emplace_back("elliptic_classical", std::move(table));
    rep.group_seconds["r_matrix"] += s21;
    rep.group_seconds["hamiltonians"] += s_ham;
    rep.add({"r_matrix", "eq21_relative", eq21, tol});
    rep.add({"r_matrix", "charge_term_exercised", rho_exercised ? 1.0 : 0.0, 1.0, true});
    rep.add({"r_matrix", "quasi_periodicity_relative", quasi, cfg.real("tol_quasi")});
    rep.add({"hamiltonians", "trace_expansion_relative", trace, cfg.real("tol_trace")});
    rep.add({"hamiltonians", "bracket_relative_constrained", bracket, cfg.real("tol_bracket")});
    rep.add({"hamiltonians", "bracket_relative_unconstrained", loose_bracket, 0.0, false, true});

    GroupTimer timer(rep, "hamiltonians");
    CsvWriter deg({"q", "lax_gap", "max_bracket"});
    double deg_bracket = 0.0;
    const auto rows = degeneration_family(2, 2, stream_seed(seed, 1u << 20), cfg.real_list("degeneration_q"));
    for (const auto &r : rows) {
        deg.add_row({fmt(r.q), fmt(r.lax_gap), fmt(r.max_bracket)});
        deg_bracket = std::max(deg_bracket, r.max_bracket);
    }
    rep.tables.emplace_back("elliptic_degeneration", std::move(deg));
    rep.add({"hamiltonians", "degeneration_bracket_relative", deg_bracket, cfg.real("tol_bracket")});
    if (rows.size() >= 2)
        rep.add({"hamiltonians", "degeneration_gap_ratio", rows.back().lax_gap / rows.front().lax_gap, 0.0, false,
                 true});
    rep.metadata["c_q"] = cq.dump();
}

// ------------------------------------------------------------ elliptic-quantum

std::vector<cplx> random_quantum_sites(const ThetaContext &ctx, int count, Rng &rng) {
    std::vector<cplx> sites;
    while (static_cast<int>(sites.size()) < count) {
        const cplx z = rng.annulus(0.75, 1.33);
        bool ok = true;
        for (cplx s : sites) ok = ok && !ctx.near_pole(z / s) && std::abs(std::log(std::abs(z / s))) < 0.5;
        if (ok) sites.push_back(z);
    }
    return sites;
}

void run_elliptic_quantum(const ExperimentConfig &cfg, Report &rep) {
    const std::uint64_t seed = cfg.unsigned_integer("seed");
    const auto qs = cfg.complex_list("q");
    const auto ks = cfg.int_list("k");
    const auto sets = cfg.weight_sets("weights");
    const auto given = cfg.complex_list("sites");
    const int t_samples = static_cast<int>(cfg.integer("t_samples"));
    const int m_min = static_cast<int>(cfg.integer("m_min")), m_max = static_cast<int>(cfg.integer("m_max"));
    const int symbol_points = static_cast<int>(cfg.integer("symbol_points"));
    const int inv_points = static_cast<int>(cfg.integer("invariance_points"));
    const double tol = cfg.real("tol"), tol_symbol = cfg.real("tol_symbol"), tol_inv = cfg.real("tol_invariance");
    if (qs.empty() || ks.empty() || sets.empty()) throw ConfigError("keys 'q', 'k', 'weights' must be non-empty");
    if (m_min > m_max) throw ConfigError("key 'm_min' exceeds 'm_max'");
    std::vector<int> ms(m_max - m_min + 1);
    std::iota(ms.begin(), ms.end(), m_min);
    const std::string window = std::to_string(m_min) + ".." + std::to_string(m_max);

    GroupTimer timer(rep, "quantum_elliptic");
    CsvWriter table({"q", "k", "weights", "pair", "t", "m_window", "residual", "scale"});
    double comm = 0.0, printed = 0.0, symbol = 0.0, lax_symbol = 0.0, invariance = 0.0, quasi = 0.0,
           single_site = 0.0;
    bool single_checked = false;
    json meta = json::array(), cq = json::object();
    std::uint64_t stream = 0;
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const ThetaContext ctx(qs[qi]);
        cq[format_complex(qs[qi])] = complex_json(ctx.wp_constant());
        for (std::size_t s = 0; s < sets.size(); ++s) {
            const int N = static_cast<int>(sets[s].size());
            std::vector<cplx> sites;
            if (!given.empty()) {
                if (static_cast<int>(given.size()) < N)
                    throw ConfigError("key 'sites': " + std::to_string(N) + " sites needed");
                sites.assign(given.begin(), given.begin() + N);
            } else {
                Rng rng(seed, 500 + 100 * qi + s);
                sites = random_quantum_sites(ctx, N, rng);
            }
            json sj = json::array();
            for (cplx z : sites) sj.push_back(format_complex(z));

            for (int k : ks) {
                QuantumEllipticParams params{ctx, k, sets[s], sites};
                params.validate();
                meta.push_back({{"q", format_complex(qs[qi])}, {"k", k}, {"weights", sets[s]}, {"sites", sj}});
                Rng rng(seed, 1000 + stream++);
                std::vector<cplx> ts;
                for (int j = 0; j < t_samples; ++j) ts.push_back(random_torus_point(ctx, rng));

                const auto ops = quantum_hamiltonians(params);
                const auto check = check_reduced_commutativity(params, ops, ts, ms);
                std::map<std::tuple<int, int, int>, std::pair<double, double>> agg; // (a, b, t index)
                for (const auto &row : check.rows) {
                    const int ti = static_cast<int>(std::find(ts.begin(), ts.end(), row.t) - ts.begin());
                    auto &cell = agg[{row.a, row.b, ti}];
                    cell.first = std::max(cell.first, row.residual);
                    cell.second = std::max(cell.second, row.scale);
                    comm = std::max(comm, row.residual / std::max(1.0, row.scale));
                }
                for (const auto &[key, cell] : agg) {
                    const auto [a, b, ti] = key;
                    table.add_row({fmt(qs[qi]), std::to_string(k), join(sets[s]),
                                   std::to_string(a) + "-" + std::to_string(b), fmt(ts[ti]), window, fmt(cell.first),
                                   fmt(cell.second)});
                }

                const auto pc = check_reduced_commutativity(params, quantum_hamiltonians(params, QuantumConstants::printed()),
                                                            ts, ms);
                printed = std::max(printed, pc.max_residual / std::max(1.0, pc.max_scale));

                const auto sc = check_symbols(params, symbol_points, stream_seed(seed, 2000 + stream));
                symbol = std::max(symbol, sc.residual / std::max(1.0, sc.scale));

                for (int j = 0; j < symbol_points; ++j) {
                    const auto pt = random_reduced_point(ctx, sites, rng);
                    const cplx z = random_spectral_point(pt, rng);
                    const CMat cl = lax_elliptic(pt, z);
                    lax_symbol = std::max(lax_symbol, max_abs(lax_quantum_symbol(params, z, pt) - cl) /
                                                          std::max(1.0, max_abs(cl)));
                }

                for (int j = 0; j < inv_points; ++j) {
                    const auto pt = random_reduced_point(ctx, sites, rng);
                    const cplx z = random_spectral_point(pt, rng);
                    const cplx t = random_torus_point(ctx, rng);
                    invariance = std::max({invariance, weyl_invariance_residual(params, z, t),
                                           lattice_invariance_residual(params, 0, z, t),
                                           lattice_invariance_residual(params, 1, z, t)});
                    quasi = std::max(quasi, quantum_quasi_periodicity_residual(params, z, t));
                }

                if (N == 1) {
                    const auto space = quantum_space(params);
                    const auto terms = single_site_terms(params);
                    const EulerDiffOp h0 = terms[0].realize(space, k), h1 = terms[1].realize(space, k);
                    const auto sc1 = check_reduced_commutativity(params, {h0, h1}, ts, ms);
                    single_site = std::max(single_site, sc1.max_residual / std::max(1.0, sc1.max_scale));
                    single_checked = true;
                }
            }
        }
    }
    rep.tables.emplace_back("elliptic_quantum", std::move(table));
    rep.add({"quantum_elliptic", "reduced_commutator_relative", comm, tol});
    rep.add({"quantum_elliptic", "symbol_vs_classical", symbol, tol_symbol});
    rep.add({"quantum_elliptic", "lax_symbol_vs_classical", lax_symbol, tol_symbol});
    rep.add({"quantum_elliptic", "weyl_lattice_invariance", invariance, tol_inv});
    rep.add({"quantum_elliptic", "lax_quasi_periodicity", quasi, tol_inv});
    if (single_checked) rep.add({"quantum_elliptic", "single_site_commutator", single_site, tol});
    rep.add({"quantum_elliptic", "printed_constants_commutator", printed, 0.0, false, true});
    rep.metadata["c_q"] = cq.dump();
    rep.metadata["systems"] = meta.dump();
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

} // namespace

bool Report::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass(); });
}

const Check *Report::find(const std::string &name) const {
    for (const auto &c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

CsvWriter Report::checks_table() const {
    CsvWriter t({"group", "check", "value", "bound", "pass"});
    for (const auto &c : checks)
        t.add_row({c.group, c.name, fmt(c.value), (c.lower_bound ? ">=" : "<=") + fmt(c.tol),
                   c.informational ? "informational" : flag(c.pass())});
    return t;
}

Report run_experiment(const ExperimentConfig &cfg) {
    Report rep;
    rep.experiment = cfg.experiment();
    const std::string &e = rep.experiment;
    if (e == "theta-check")
        run_theta(cfg, rep);
    else if (e == "rational-classical")
        run_rational_classical(cfg, rep);
    else if (e == "rational-quantum")
        run_rational_quantum(cfg, rep);
    else if (e == "elliptic-classical")
        run_elliptic_classical(cfg, rep);
    else if (e == "elliptic-quantum")
        run_elliptic_quantum(cfg, rep);
    else
        throw ConfigError("unknown experiment '" + e + "'");
    return rep;
}

void write_report(const Report &report, const ExperimentConfig &cfg) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.text("out");
    fs::create_directories(dir);
    std::string stem = report.experiment;
    std::replace(stem.begin(), stem.end(), '-', '_');
    for (const auto &[name, table] : report.tables) table.save((dir / (name + ".csv")).string());
    report.checks_table().save((dir / (stem + "_checks.csv")).string());

    json meta;
    meta["experiment"] = report.experiment;
    meta["seed"] = cfg.unsigned_integer("seed");
    meta["versions"] = {{"hitchin", "0.1.0"},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"boost", BOOST_LIB_VERSION},
                        {"compiler", __VERSION__}};
    json tolerances = json::object();
    for (const auto &c : report.checks)
        if (!c.informational) tolerances[c.name] = c.tol;
    meta["tolerances"] = tolerances;
    meta["config"] = cfg.values();
    json timings = json::object();
    for (const auto &[g, s] : report.group_seconds) timings[g] = s;
    meta["seconds"] = timings;
    for (const auto &[k, v] : report.metadata) meta[k] = json::parse(v);
    meta["timestamp"] = timestamp();
    meta["pass"] = report.ok();
    std::ofstream f(dir / (stem + "_meta.json"));
    f << meta.dump(2) << "\n";
}

std::string format_checks(const Report &report) {
    std::ostringstream os;
    os << std::left << std::setw(18) << "group" << std::setw(34) << "check" << std::setw(14) << "value"
       << std::setw(16) << "bound"
       << "status\n";
    for (const auto &c : report.checks) {
        std::ostringstream v, b;
        v << std::setprecision(3) << std::scientific << c.value;
        b << (c.lower_bound ? ">= " : "<= ") << std::setprecision(3) << std::scientific << c.tol;
        os << std::left << std::setw(18) << c.group << std::setw(34) << c.name << std::setw(14) << v.str()
           << std::setw(16) << (c.informational ? "-" : b.str())
           << (c.informational ? "info" : c.pass() ? "PASS" : "FAIL") << "\n";
    }
    for (const auto &[g, s] : report.group_seconds)
        os << "time " << g << ": " << std::fixed << std::setprecision(2) << s << " s\n";
    return os.str();
}

} // namespace hitchin::cli
