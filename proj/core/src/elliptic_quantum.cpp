#include "hitchin/elliptic_quantum.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

void QuantumEllipticParams::validate() const {
    if (weights.size() != sites.size()) throw DomainError("quantum elliptic: weights and sites differ in length");
    for (int w : weights)
        if (w < 0) throw DomainError("quantum elliptic: weights must be nonnegative");
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] == cplx(0.0)) throw DomainError("quantum elliptic: sites must be nonzero");
        for (std::size_t j = 0; j < sites.size(); ++j)
            if (i != j) ctx.pole_guard(sites[i] / sites[j]);
    }
}

QuantumConstants QuantumConstants::adjusted(const ThetaContext &ctx) {
    const cplx tp = ctx.theta_prime_one();
    return {0.5, 0.5, 2.0 * tp, 0.125, -0.25, -1.0, -tp, false, "adjusted"};
}

QuantumConstants QuantumConstants::printed() { return {1.0, 2.0, 2.0, 1.0, 1.0, -2.0, -2.0, true, "printed"}; }

void QuantumHamiltonian::add(cplx c, const ThetaExpr &f, int momentum_power, std::vector<SpinFactor> spins) {
    if (momentum_power < 0) throw DomainError("QuantumHamiltonian: negative momentum power");
    terms_.push_back({c, f, momentum_power, std::move(spins)});
}

namespace {

CMat spin_matrix(const TensorRepSpace &space, const std::vector<SpinFactor> &spins) {
    CMat m = CMat::Identity(space.dim(), space.dim());
    for (const auto &s : spins) {
        const auto &tr = space.factor_triple(s.site);
        const IMat &x = s.gen == SpinGen::E ? tr.e : s.gen == SpinGen::F ? tr.f : tr.h;
        m = m * space.site_operator(CMat(x.cast<double>().cast<cplx>()), s.site);
    }
    return m;
}

cplx spin_symbol(const EllipticPhasePoint &pt, const SpinFactor &s) {
    const CMat &eta = pt.eta(s.site);
    switch (s.gen) {
    case SpinGen::E:
        return eta(0, 1);
    case SpinGen::F:
        return eta(1, 0);
    case SpinGen::H:
        return eta(0, 0) - eta(1, 1);
    }
    return 0.0;
}

// t with t^2 = t_1 / t_2
cplx reduced_torus(const EllipticPhasePoint &pt) {
    if (pt.n() != 2) throw DomainError("quantum symbol: phase point must have n = 2");
    return std::sqrt(pt.t()(0) / pt.t()(1));
}

bool square_clear(const ThetaContext &ctx, cplx t, double gap) {
    cplx s = t * t;
    if (ctx.near_pole(s)) return false;
    for (int j = -3; j <= 3; ++j) {
        cplx p = j == 0 ? cplx(1.0) : std::pow(ctx.q(), static_cast<double>(j));
        if (std::abs(s - p) < gap * std::abs(p)) return false;
    }
    return true;
}

std::array<QuantumHamiltonian, 4> lax_terms(const QuantumEllipticParams &params, cplx z) {
    const auto &ctx = params.ctx;
    const cplx tp = ctx.theta_prime_one();
    std::array<QuantumHamiltonian, 4> l;
    l[0].add(0.25 / tp, 1.0, 1, {});
    l[3].add(-0.25 / tp, 1.0, 1, {});
    for (int i = 0; i < params.sites_count(); ++i) {
        cplx u = z / params.sites[i];
        ctx.pole_guard(u);
        cplx li = ctx.logderiv(u);
        l[0].add(0.5 * li / tp, 1.0, 0, {{i, SpinGen::H}});
        l[3].add(-0.5 * li / tp, 1.0, 0, {{i, SpinGen::H}});
        l[1].add(1.0, ThetaExpr::kernel(1.0, -2, u, 0), 0, {{i, SpinGen::E}});
        l[2].add(1.0, ThetaExpr::kernel(1.0, 2, u, 0), 0, {{i, SpinGen::F}});
    }
    return l;
}

// Weyl element on V_lambda: v_k -> k! lambda! / (lambda - k)! v_{lambda - k}
CMat weyl_matrix(const TensorRepSpace &space) {
    CMat w = CMat::Identity(1, 1);
    for (int i = 0; i < space.sites(); ++i) {
        const int lam = space.weights()[i];
        CMat f = CMat::Zero(lam + 1, lam + 1);
        double c = 1.0;
        for (int k = 0; k <= lam; ++k) {
            f(lam - k, k) = c;
            c *= static_cast<double>(lam - k) * (k + 1);
        }
        w = Eigen::kroneckerProduct(w, f).eval();
    }
    return w;
}

// prod_i z_i^{E_aa} acting on V_lambda_i
CMat lattice_matrix(const TensorRepSpace &space, const std::vector<cplx> &sites, int alpha) {
    CMat u = CMat::Identity(1, 1);
    for (int i = 0; i < space.sites(); ++i) {
        const int lam = space.weights()[i];
        CMat d = CMat::Zero(lam + 1, lam + 1);
        for (int k = 0; k <= lam; ++k) d(k, k) = std::pow(sites[i], alpha == 0 ? lam - k : k);
        u = Eigen::kroneckerProduct(u, d).eval();
    }
    return u;
}

std::vector<CMat> conjugate(const std::vector<CMat> &a, const CMat &u, const CMat &uinv) {
    std::vector<CMat> out;
    out.reserve(a.size());
    for (const auto &m : a) out.push_back(u * m * uinv);
    return out;
}

std::vector<CMat> scaled(const std::vector<CMat> &a, cplx s) {
    std::vector<CMat> out;
    for (const auto &m : a) out.push_back(s * m);
    return out;
}

} // namespace

EulerDiffOp momentum_operator(int dim, int k) {
    EulerDiffOp p = EulerDiffOp::derivative(dim).scaled(2.0);
    if (k != 0) p += EulerDiffOp::multiplication(ThetaExpr::logderiv(1.0, 2), CMat::Identity(dim, dim) * (2.0 * k));
    return p;
}

EulerDiffOp QuantumHamiltonian::realize(const TensorRepSpace &space, int k) const {
    const int dim = space.dim();
    EulerDiffOp out(dim);
    std::vector<EulerDiffOp> powers{EulerDiffOp::identity(dim)};
    for (const auto &term : terms_) {
        while (static_cast<int>(powers.size()) <= term.momentum_power)
            powers.push_back(powers.back() * momentum_operator(dim, k));
        EulerDiffOp mult = EulerDiffOp::multiplication(term.f, spin_matrix(space, term.spins));
        out += (term.momentum_power == 0 ? mult : powers[term.momentum_power] * mult).scaled(term.c);
    }
    return out;
}

cplx QuantumHamiltonian::symbol(const EllipticPhasePoint &pt) const {
    const cplx t = reduced_torus(pt);
    const cplx mom = 2.0 * (pt.p()(0) - pt.p()(1));
    cplx s = 0.0;
    for (const auto &term : terms_) {
        cplx v = term.c * term.f.evaluate(pt.ctx(), t);
        for (int j = 0; j < term.momentum_power; ++j) v *= mom;
        for (const auto &sp : term.spins) v *= spin_symbol(pt, sp);
        s += v;
    }
    return s;
}

TensorRepSpace quantum_space(const QuantumEllipticParams &params) { return TensorRepSpace::sl2(params.weights); }

std::vector<QuantumHamiltonian> quantum_hamiltonian_terms(const QuantumEllipticParams &params,
                                                          const QuantumConstants &c) {
    params.validate();
    const auto &ctx = params.ctx;
    const int ns = params.sites_count();
    using S = SpinGen;
    std::vector<QuantumHamiltonian> hs(ns + 1);
    QuantumHamiltonian &h0 = hs[0];
    h0.add(c.b1, 1.0, 2, {});
    for (int i = 0; i < ns; ++i) {
        h0.add(c.b3, ThetaExpr::wp(1.0, 2), 0, {{i, S::E}, {i, S::F}});
        if (!c.literal) h0.add(c.b3, ThetaExpr::wp(1.0, 2), 0, {{i, S::F}, {i, S::E}});
        for (int j = 0; j < ns; ++j) {
            if (i == j) continue;
            const cplx zij = params.sites[i] / params.sites[j];
            const cplx l = ctx.logderiv(zij);
            if (c.literal) {
                if (j < i) h0.add(c.b2 * l * l, 1.0, 0, {{i, S::H}, {j, S::H}});
            } else {
                h0.add(c.b2 * (ctx.wp(zij) - (l - 0.5) * (l - 0.5)), 1.0, 0, {{i, S::H}, {j, S::H}});
            }
            ThetaExpr up = (ThetaExpr::logderiv(1.0, 2) - ThetaExpr::logderiv(zij, 2)) * ThetaExpr::kernel(1.0, 2, zij, 0);
            h0.add(c.b4, up, 0, {{i, S::E}, {j, S::F}});
            if (!c.literal) {
                ThetaExpr dn =
                    (ThetaExpr::logderiv(1.0, -2) - ThetaExpr::logderiv(zij, -2)) * ThetaExpr::kernel(1.0, -2, zij, 0);
                h0.add(c.b4, dn, 0, {{i, S::F}, {j, S::E}});
            }
        }
    }
    for (int i = 0; i < ns; ++i) {
        QuantumHamiltonian &h = hs[i + 1];
        h.add(c.a1, 1.0, 1, {{i, S::H}});
        for (int j = 0; j < ns; ++j) {
            if (j == i) continue;
            const cplx zij = params.sites[i] / params.sites[j];
            h.add(c.a2 * (ctx.logderiv(zij) - ctx.logderiv(1.0 / zij)), 1.0, 0, {{i, S::H}, {j, S::H}});
            h.add(c.a3, ThetaExpr::kernel(1.0, 2, zij, 0), 0, {{i, S::E}, {j, S::F}});
            h.add(c.a3, ThetaExpr::kernel(1.0, -2, zij, 0), 0, {{i, S::F}, {j, S::E}});
        }
    }
    return hs;
}

std::vector<EulerDiffOp> quantum_hamiltonians(const QuantumEllipticParams &params, const QuantumConstants &c) {
    auto space = quantum_space(params);
    std::vector<EulerDiffOp> out;
    for (const auto &h : quantum_hamiltonian_terms(params, c)) out.push_back(h.realize(space, params.k));
    return out;
}

std::vector<EulerDiffOp> quantum_hamiltonians(const QuantumEllipticParams &params) {
    return quantum_hamiltonians(params, QuantumConstants::adjusted(params.ctx));
}

std::vector<QuantumHamiltonian> single_site_terms(const QuantumEllipticParams &params) {
    params.validate();
    if (params.sites_count() != 1) throw DomainError("single_site_terms: requires exactly one site");
    using S = SpinGen;
    std::vector<QuantumHamiltonian> hs(2);
    hs[0].add(1.0, 1.0, 2, {});
    hs[0].add(-2.0, ThetaExpr::wp(1.0, 2), 0, {{0, S::E}, {0, S::F}});
    hs[1].add(1.0, 1.0, 0, {{0, S::E}, {0, S::F}});
    return hs;
}

QuantumLax lax_quantum(const QuantumEllipticParams &params, cplx z) {
    params.validate();
    auto space = quantum_space(params);
    auto terms = lax_terms(params, z);
    QuantumLax l;
    for (int e = 0; e < 4; ++e) l[e] = terms[e].realize(space, params.k);
    return l;
}

CMat lax_quantum_symbol(const QuantumEllipticParams &params, cplx z, const EllipticPhasePoint &pt) {
    params.validate();
    auto terms = lax_terms(params, z);
    CMat out(2, 2);
    for (int e = 0; e < 4; ++e) out(e / 2, e % 2) = terms[e].symbol(pt);
    return out;
}

ReducedCheck check_reduced_commutativity(const QuantumEllipticParams &params, const std::vector<EulerDiffOp> &ops,
                                         const std::vector<cplx> &ts, const std::vector<int> &ms) {
    auto space = quantum_space(params);
    const CMat basis = space.weight_zero_basis();
    ReducedCheck out;
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a + 1; b < ops.size(); ++b) {
            const EulerDiffOp ab = ops[a] * ops[b];
            const EulerDiffOp comm = ab - ops[b] * ops[a];
            for (cplx t : ts) {
                std::vector<CMat> cc, pc;
                try {
                    cc = comm.evaluate(params.ctx, t);
                    pc = ab.evaluate(params.ctx, t);
                } catch (const PoleError &e) {
                    throw PoleError("reduced commutativity: pair (" + std::to_string(a) + "," + std::to_string(b) +
                                        "), t=" + std::to_string(t.real()) + "+" + std::to_string(t.imag()) +
                                        "j: " + e.what(),
                                    e.lattice_point());
                }
                for (int m : ms) {
                    const double tm = std::pow(std::abs(t), m);
                    CommutatorRow row{static_cast<int>(a), static_cast<int>(b), t, m, 0.0, 0.0};
                    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
                        CVec v = basis.col(c);
                        CVec r = CVec::Zero(v.size()), s = CVec::Zero(v.size());
                        double md = 1.0;
                        for (std::size_t d = 0; d < std::max(cc.size(), pc.size()); ++d) {
                            if (d < cc.size()) r += md * (cc[d] * v);
                            if (d < pc.size()) s += md * (pc[d] * v);
                            md *= m;
                        }
                        row.residual = std::max(row.residual, tm * r.norm());
                        row.scale = std::max(row.scale, tm * s.norm());
                    }
                    out.rows.push_back(row);
                    if (row.residual > out.max_residual || out.rows.size() == 1) {
                        out.max_residual = std::max(out.max_residual, row.residual);
                        out.worst = row;
                    }
                    out.max_scale = std::max(out.max_scale, row.scale);
                }
            }
        }
    return out;
}

cplx random_torus_point(const ThetaContext &ctx, Rng &rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        cplx t = std::exp(0.3 * rng.complex_normal());
        if (square_clear(ctx, t, 0.15)) return t;
    }
    throw DomainError("random_torus_point: cannot place t");
}

EllipticPhasePoint random_reduced_point(const ThetaContext &ctx, const std::vector<cplx> &sites, Rng &rng) {
    cplx s = random_torus_point(ctx, rng);
    cplx p1 = rng.complex_normal();
    CVec p(2), t(2);
    p << p1, -p1;
    t << s, 1.0 / s;
    std::vector<CMat> eta;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        CMat m = rng.gaussian_matrix(2, 2);
        m -= (m.trace() / 2.0) * CMat::Identity(2, 2);
        eta.push_back(m);
    }
    return EllipticPhasePoint(ctx, p, t, eta, sites);
}

SymbolCheck check_symbols(const QuantumEllipticParams &params, int points, std::uint64_t seed) {
    auto quantum = quantum_hamiltonian_terms(params, QuantumConstants::adjusted(params.ctx));
    auto classical = hamiltonian_observables(params.ctx, 2, params.sites);
    SymbolCheck out;
    for (int k = 0; k < points; ++k) {
        Rng rng(seed, static_cast<std::uint64_t>(k));
        auto pt = random_reduced_point(params.ctx, params.sites, rng);
        for (std::size_t h = 0; h < quantum.size(); ++h) {
            cplx cv = classical[h].value(pt);
            out.residual = std::max(out.residual, std::abs(quantum[h].symbol(pt) - cv));
            out.scale = std::max(out.scale, std::abs(cv));
        }
    }
    return out;
}

double weyl_invariance_residual(const QuantumEllipticParams &params, cplx z, cplx t) {
    auto lax = lax_quantum(params, z);
    auto space = quantum_space(params);
    const CMat w = weyl_matrix(space);
    const CMat winv = w.inverse();
    double r = 0.0;
    for (int e = 0; e < 4; ++e) {
        auto a = lax[e].evaluate(params.ctx, 1.0 / t);
        for (std::size_t d = 1; d < a.size(); d += 2) a[d] = -a[d];
        auto pulled = shift_derivative(conjugate(a, w, winv), static_cast<double>(params.k));
        const int swapped = (1 - e / 2) * 2 + (1 - e % 2);
        r = std::max(r, coefficient_distance(pulled, lax[swapped].evaluate(params.ctx, t)));
    }
    return r;
}

double lattice_invariance_residual(const QuantumEllipticParams &params, int alpha, cplx z, cplx t) {
    if (alpha != 0 && alpha != 1) throw DomainError("lattice_invariance_residual: alpha must be 0 or 1");
    auto lax = lax_quantum(params, z);
    auto space = quantum_space(params);
    const CMat u = lattice_matrix(space, params.sites, alpha);
    const CMat uinv = u.inverse();
    const cplx rq = std::sqrt(params.ctx.q());
    const cplx moved = alpha == 0 ? t * rq : t / rq;
    const double gauge = alpha == 0 ? params.k : -params.k;
    double r = 0.0;
    for (int e = 0; e < 4; ++e) {
        auto a = lax[e].evaluate(params.ctx, moved);
        auto pulled = shift_derivative(conjugate(a, u, uinv), gauge);
        // Ad(diag) scales entry (a,b) by z^{[a==alpha] - [b==alpha]}
        const int row = e / 2, col = e % 2;
        const int expo = (row == alpha) - (col == alpha);
        const cplx f = expo == 0 ? cplx(1.0) : expo > 0 ? z : 1.0 / z;
        r = std::max(r, coefficient_distance(pulled, scaled(lax[e].evaluate(params.ctx, t), f)));
    }
    return r;
}

double quantum_quasi_periodicity_residual(const QuantumEllipticParams &params, cplx z, cplx t) {
    auto lz = lax_quantum(params, z);
    auto lqz = lax_quantum(params, params.ctx.q() * z);
    auto space = quantum_space(params);
    const cplx tp = params.ctx.theta_prime_one();
    CMat htot = CMat::Zero(space.dim(), space.dim());
    for (int i = 0; i < params.sites_count(); ++i) htot += spin_matrix(space, {{i, SpinGen::H}});
    double r = 0.0;
    for (int e = 0; e < 4; ++e) {
        const int row = e / 2, col = e % 2;
        cplx f = 1.0;
        if (row != col) f = row == 0 ? t * t : 1.0 / (t * t);
        auto expect = scaled(lz[e].evaluate(params.ctx, t), f);
        if (row == col) expect[0] -= (row == 0 ? 0.5 : -0.5) * htot / tp;
        r = std::max(r, coefficient_distance(lqz[e].evaluate(params.ctx, t), expect));
    }
    return r;
}

} // namespace hitchin
