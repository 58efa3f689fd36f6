#include "hitchin/elliptic_classical.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

EllipticPhasePoint::EllipticPhasePoint(ThetaContext ctx, CVec p, CVec t, std::vector<CMat> eta, std::vector<cplx> sites)
  : ctx_(std::move(ctx))
  , p_(std::move(p))
  , t_(std::move(t))
  , eta_(std::move(eta))
  , sites_(std::move(sites)) {
    const int n = static_cast<int>(p_.size());
    if (n < 1 || t_.size() != n) throw DomainError("EllipticPhasePoint: p and t must have the same positive length");
    if (eta_.size() != sites_.size()) throw DomainError("EllipticPhasePoint: eta and sites differ in length");
    for (const auto &m : eta_)
        if (m.rows() != n || m.cols() != n) throw DomainError("EllipticPhasePoint: residues must be n x n");
    for (int a = 0; a < n; ++a) {
        if (t_(a) == cplx(0.0)) throw DomainError("EllipticPhasePoint: t must be nonzero");
        for (int b = 0; b < n; ++b)
            if (a != b) ctx_.pole_guard(t_(b) / t_(a));
    }
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (sites_[i] == cplx(0.0)) throw DomainError("EllipticPhasePoint: sites must be nonzero");
        for (std::size_t j = 0; j < sites_.size(); ++j)
            if (i != j) ctx_.pole_guard(sites_[i] / sites_[j]);
    }
}

CVec EllipticPhasePoint::charges() const {
    CVec c = CVec::Zero(n());
    for (const auto &m : eta_) c += m.diagonal();
    return c;
}

double EllipticPhasePoint::scale() const {
    double s = p_.cwiseAbs().maxCoeff();
    for (const auto &m : eta_) s = std::max(s, max_abs(m));
    return s;
}

EllipticPhasePoint EllipticPhasePoint::with(CVec p, CVec t, std::vector<CMat> eta) const {
    return EllipticPhasePoint(ctx_, std::move(p), std::move(t), std::move(eta), sites_);
}

CMat lax_elliptic(const EllipticPhasePoint &pt, cplx z) {
    const auto &ctx = pt.ctx();
    const int n = pt.n();
    const cplx tp = ctx.theta_prime_one();
    CMat x = CMat::Zero(n, n);
    for (int a = 0; a < n; ++a) x(a, a) = pt.p()(a) / tp;
    for (int i = 0; i < pt.sites_count(); ++i) {
        cplx u = z / pt.site(i);
        cplx l = ctx.logderiv(u);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b)
                    x(a, a) += l * pt.eta(i)(a, a) / tp;
                else if (pt.eta(i)(a, b) != cplx(0.0))
                    x(a, b) += pt.eta(i)(a, b) * ctx.kernel(pt.t()(b) / pt.t()(a), u);
            }
    }
    return x;
}

CMat swap_matrix(int n) {
    CMat p = CMat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) p(a * n + b, b * n + a) = 1.0;
    return p;
}

CMat r_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t) {
    const int n = static_cast<int>(t.size());
    const cplx tp = ctx.theta_prime_one();
    CMat r = CMat::Zero(n * n, n * n);
    const cplx diag = ctx.logderiv(w / z) / tp;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            // e_ab (x) e_ba and e_aa (x) e_bb
            r(a * n + b, b * n + a) += ctx.kernel(t(b) / t(a), z / w);
            r(a * n + b, a * n + b) += diag;
        }
    return r;
}

CMat r21_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t) {
    CMat p = swap_matrix(static_cast<int>(t.size()));
    return p * r_matrix(ctx, w, z, t) * p;
}

CMat rho_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t) {
    const int n = static_cast<int>(t.size());
    const cplx tp = ctx.theta_prime_one();
    CMat r = CMat::Zero(n * n, n * n);
    const cplx x = z / w;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            cplx s = t(b) / t(a);
            r(a * n + b, b * n + a) = ctx.kernel(s, x) * (ctx.logderiv(s) - ctx.logderiv(s * x)) / tp;
        }
    return r;
}

BracketValue elliptic_bracket(const EllGradient &f, const EllGradient &g, const EllipticPhasePoint &pt) {
    BracketValue out;
    for (int a = 0; a < pt.n(); ++a) {
        cplx u = f.dp(a) * g.dt(a);
        cplx v = f.dt(a) * g.dp(a);
        out.value += u - v;
        out.magnitude += std::abs(u) + std::abs(v);
    }
    for (int i = 0; i < pt.sites_count(); ++i) {
        const CMat &e = pt.eta(i);
        CMat ab = f.deta[i] * g.deta[i];
        CMat ba = g.deta[i] * f.deta[i];
        out.value += (ab - ba).cwiseProduct(e).sum();
        out.magnitude += (f.deta[i].cwiseAbs() * g.deta[i].cwiseAbs() + g.deta[i].cwiseAbs() * f.deta[i].cwiseAbs())
                             .cwiseProduct(e.cwiseAbs())
                             .sum();
    }
    return out;
}

void EllObservable::add(cplx c, const ThetaExpr &f, int num, int den, EllCoord u, EllCoord v) {
    if (c == cplx(0.0) || f.is_zero()) return;
    const bool constant = num < 0;
    terms_.push_back(Term{c, f, constant ? ThetaExpr() : f.euler_derivative(), constant, num, den, u, v});
}

void EllObservable::add_constant(cplx c, EllCoord u, EllCoord v) {
    if (c == cplx(0.0)) return;
    terms_.push_back(Term{c, ThetaExpr(1.0), ThetaExpr(), true, -1, -1, u, v});
}

namespace {

cplx coord_value(const EllCoord &c, const EllipticPhasePoint &pt) {
    switch (c.kind) {
    case EllCoord::Kind::None:
        return 1.0;
    case EllCoord::Kind::P:
        return pt.p()(c.a);
    case EllCoord::Kind::Eta:
        return pt.eta(c.site)(c.a, c.b);
    }
    return 0.0;
}

void coord_add(EllGradient &g, const EllCoord &c, cplx v) {
    switch (c.kind) {
    case EllCoord::Kind::None:
        break;
    case EllCoord::Kind::P:
        g.dp(c.a) += v;
        break;
    case EllCoord::Kind::Eta:
        g.deta[c.site](c.a, c.b) += v;
        break;
    }
}

} // namespace

cplx EllObservable::value(const EllipticPhasePoint &pt) const {
    cplx s = 0.0;
    for (const auto &tm : terms_) {
        cplx x = tm.constant ? cplx(1.0) : pt.t()(tm.num) / pt.t()(tm.den);
        s += tm.c * tm.f.evaluate(pt.ctx(), x) * coord_value(tm.u, pt) * coord_value(tm.v, pt);
    }
    return s;
}

EllGradient EllObservable::gradient(const EllipticPhasePoint &pt) const {
    const int n = pt.n();
    EllGradient g{CVec::Zero(n), CVec::Zero(n), std::vector<CMat>(pt.sites_count(), CMat::Zero(n, n))};
    for (const auto &tm : terms_) {
        cplx x = tm.constant ? cplx(1.0) : pt.t()(tm.num) / pt.t()(tm.den);
        cplx f = tm.c * tm.f.evaluate(pt.ctx(), x);
        cplx u = coord_value(tm.u, pt), v = coord_value(tm.v, pt);
        coord_add(g, tm.u, f * v);
        coord_add(g, tm.v, f * u);
        if (!tm.constant) {
            cplx d = tm.c * tm.df.evaluate(pt.ctx(), x) * u * v;
            g.dt(tm.num) += d;
            g.dt(tm.den) -= d;
        }
    }
    return g;
}

EllObservable lax_entry_observable(const ThetaContext &ctx, const std::vector<cplx> &sites, int n, cplx z, int a, int b) {
    (void)n;
    EllObservable o;
    const cplx tp = ctx.theta_prime_one();
    if (a == b) {
        o.add_constant(1.0 / tp, EllCoord::p(a));
        for (std::size_t i = 0; i < sites.size(); ++i)
            o.add_constant(ctx.logderiv(z / sites[i]) / tp, EllCoord::eta(static_cast<int>(i), a, a));
        return o;
    }
    for (std::size_t i = 0; i < sites.size(); ++i)
        o.add(1.0, ThetaExpr::kernel(1.0, 1, z / sites[i], 0), b, a, EllCoord::eta(static_cast<int>(i), a, b));
    return o;
}

CMat lax_bracket_tensor(const EllipticPhasePoint &pt, cplx z, cplx w) {
    const int n = pt.n();
    std::vector<EllGradient> gz, gw;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            gz.push_back(lax_entry_observable(pt.ctx(), pt.sites(), n, z, a, b).gradient(pt));
            gw.push_back(lax_entry_observable(pt.ctx(), pt.sites(), n, w, a, b).gradient(pt));
        }
    CMat t = CMat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    t(a * n + c, b * n + d) = elliptic_bracket(gz[a * n + b], gw[c * n + d], pt).value;
    return t;
}

CMat lax_bracket_rhs(const EllipticPhasePoint &pt, cplx z, cplx w) {
    const int n = pt.n();
    CMat id = CMat::Identity(n, n);
    CMat x1 = Eigen::kroneckerProduct(lax_elliptic(pt, z), id).eval();
    CMat x2 = Eigen::kroneckerProduct(id, lax_elliptic(pt, w)).eval();
    CMat c = pt.charges().asDiagonal();
    CMat k = Eigen::kroneckerProduct(c, id).eval() - Eigen::kroneckerProduct(id, c).eval();
    CMat r12 = r_matrix(pt.ctx(), z, w, pt.t());
    CMat r21 = r21_matrix(pt.ctx(), z, w, pt.t());
    return commutator(r12, x1) - commutator(r21, x2) + rho_matrix(pt.ctx(), z, w, pt.t()) * k;
}

RMatrixCheck verify_dynamical_rmatrix(const EllipticPhasePoint &pt, cplx z, cplx w) {
    pt.ctx().pole_guard(z / w);
    CMat lhs = lax_bracket_tensor(pt, z, w);
    CMat rhs = lax_bracket_rhs(pt, z, w);
    return RMatrixCheck{max_abs(lhs - rhs), max_abs(lhs)};
}

double quasi_periodicity_residual(const EllipticPhasePoint &pt, cplx z) {
    CMat a = lax_elliptic(pt, pt.ctx().q() * z);
    CMat x = lax_elliptic(pt, z);
    const CVec &t = pt.t();
    CMat b = t.asDiagonal() * x * t.cwiseInverse().asDiagonal();
    b.diagonal() -= pt.charges() / pt.ctx().theta_prime_one();
    return max_abs(a - b);
}

std::vector<EllObservable> hamiltonian_observables(const ThetaContext &ctx, int n, const std::vector<cplx> &sites) {
    const int ns = static_cast<int>(sites.size());
    const cplx tp = ctx.theta_prime_one();
    using C = EllCoord;
    std::vector<EllObservable> hs(ns + 1);

    EllObservable &h0 = hs[0];
    for (int a = 0; a < n; ++a) h0.add_constant(1.0, C::p(a), C::p(a));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j) {
            if (i == j) continue;
            cplx zij = sites[i] / sites[j];
            cplx l = ctx.logderiv(zij) - 0.5;
            cplx c = -0.5 * (ctx.wp(zij) - l * l);
            for (int a = 0; a < n; ++a) h0.add_constant(c, C::eta(i, a, a), C::eta(j, a, a));
        }
    for (int i = 0; i < ns; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) h0.add(-1.0, ThetaExpr::wp(1.0, 1), b, a, C::eta(i, a, b), C::eta(i, b, a));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j) {
            if (i == j) continue;
            cplx zij = sites[i] / sites[j];
            ThetaExpr f = (ThetaExpr::logderiv(1.0, 1) - ThetaExpr::logderiv(zij, 1)) * ThetaExpr::kernel(1.0, 1, zij, 0);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (a != b) h0.add(-tp, f, a, b, C::eta(i, a, b), C::eta(j, b, a));
        }

    for (int i = 0; i < ns; ++i) {
        EllObservable &h = hs[i + 1];
        for (int a = 0; a < n; ++a) h.add_constant(2.0, C::p(a), C::eta(i, a, a));
        for (int j = 0; j < ns; ++j) {
            if (j == i) continue;
            cplx zij = sites[i] / sites[j];
            cplx c = ctx.logderiv(zij) - ctx.logderiv(1.0 / zij);
            for (int a = 0; a < n; ++a) h.add_constant(c, C::eta(i, a, a), C::eta(j, a, a));
            ThetaExpr k = ThetaExpr::kernel(1.0, 1, zij, 0);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (a != b) h.add(2.0 * tp, k, a, b, C::eta(i, a, b), C::eta(j, b, a));
        }
    }
    return hs;
}

EllipticHamiltonians hamiltonians_elliptic(const EllipticPhasePoint &pt) {
    auto obs = hamiltonian_observables(pt.ctx(), pt.n(), pt.sites());
    EllipticHamiltonians h;
    h.h0 = obs[0].value(pt);
    for (std::size_t i = 1; i < obs.size(); ++i) h.h.push_back(obs[i].value(pt));
    h.charges = pt.charges();
    return h;
}

TraceExpansion trace_expansion(const EllipticPhasePoint &pt, cplx z) {
    const auto &ctx = pt.ctx();
    const cplx tp = ctx.theta_prime_one();
    CMat x = lax_elliptic(pt, z);
    cplx tr = (x * x).trace();
    auto h = hamiltonians_elliptic(pt);
    CVec c = pt.charges();
    cplx full = h.h0, part = h.h0;
    double scale = std::abs(h.h0);
    for (int i = 0; i < pt.sites_count(); ++i) {
        cplx u = z / pt.site(i);
        cplx l = ctx.logderiv(u);
        cplx k = pt.eta(i).diagonal().cwiseProduct(c).sum();
        cplx q2 = (pt.eta(i) * pt.eta(i)).trace();
        cplx lin = h.h[i] * l, quad = k * l * l, wpt = (q2 - k) * ctx.wp(u);
        full += lin + quad + wpt;
        part += lin + quad;
        scale += std::abs(lin) + std::abs(quad) + std::abs(wpt);
    }
    TraceExpansion out;
    out.residual = std::abs(tp * tp * tr - full);
    out.scale = std::max(scale, std::abs(tp * tp * tr));
    out.short_residual = std::abs(tr - part);
    return out;
}

namespace {

bool ratio_clear(const ThetaContext &ctx, cplx r, double gap) {
    if (ctx.near_pole(r)) return false;
    // distance to the nearest lattice point q^m in log-modulus and argument
    double aq = std::abs(ctx.q());
    cplx lr = std::log(r);
    if (aq == 0.0) return std::abs(lr) > gap;
    cplx lq = std::log(ctx.q());
    for (int m = -3; m <= 3; ++m)
        for (int k = -1; k <= 1; ++k)
            if (std::abs(lr - static_cast<double>(m) * lq - cplx(0.0, 2.0 * M_PI * k)) < gap) return false;
    return true;
}

} // namespace

EllipticPhasePoint random_elliptic_point(const ThetaContext &ctx, int n, int sites, Rng &rng,
                                         const EllipticSampleOptions &opt) {
    CVec t(n);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 10000) throw DomainError("random_elliptic_point: cannot place torus coordinates");
        for (int a = 0; a < n; ++a) t(a) = std::exp(opt.t_spread * rng.complex_normal());
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                if (a != b) ok = ratio_clear(ctx, t(b) / t(a), opt.min_ratio_gap);
        if (ok) break;
    }
    std::vector<cplx> z;
    for (int attempt = 0; static_cast<int>(z.size()) < sites; ++attempt) {
        if (attempt > 10000) throw DomainError("random_elliptic_point: cannot place sites");
        cplx c = rng.annulus(0.8, 1.25);
        bool ok = true;
        for (cplx w : z) ok = ok && ratio_clear(ctx, c / w, opt.min_ratio_gap);
        if (ok) z.push_back(c);
    }
    CVec p(n);
    for (int a = 0; a < n; ++a) p(a) = rng.complex_normal();
    std::vector<CMat> eta;
    for (int i = 0; i < sites; ++i) eta.push_back(rng.gaussian_matrix(n, n));
    if (opt.constrained && sites > 0) {
        CVec c = CVec::Zero(n);
        for (const auto &m : eta) c += m.diagonal();
        eta.back().diagonal() -= c;
    }
    return EllipticPhasePoint(ctx, p, t, std::move(eta), std::move(z));
}

cplx random_spectral_point(const EllipticPhasePoint &pt, Rng &rng, const std::vector<cplx> &avoid) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        cplx z = rng.annulus(0.75, 1.3);
        bool ok = true;
        for (cplx s : pt.sites()) ok = ok && ratio_clear(pt.ctx(), z / s, 0.15);
        for (cplx s : avoid) ok = ok && ratio_clear(pt.ctx(), z / s, 0.15);
        if (ok) return z;
    }
    throw DomainError("random_spectral_point: no admissible point found");
}

std::vector<DegenerationRow> degeneration_family(int n, int sites, std::uint64_t seed, const std::vector<double> &qs) {
    Rng rng(seed);
    CVec t(n);
    for (int a = 0; a < n; ++a) t(a) = std::polar(1.0, 2.0 * M_PI * (a + 0.3 * rng.uniform()) / n);
    std::vector<cplx> z;
    for (int i = 0; i < sites; ++i) z.push_back(std::polar(rng.uniform(0.85, 1.15), 2.0 * M_PI * (i + 0.5) / sites + 0.3));
    CVec p(n);
    for (int a = 0; a < n; ++a) p(a) = rng.complex_normal();
    std::vector<CMat> eta;
    for (int i = 0; i < sites; ++i) eta.push_back(rng.gaussian_matrix(n, n));
    CVec c = CVec::Zero(n);
    for (const auto &m : eta) c += m.diagonal();
    eta.back().diagonal() -= c;
    std::vector<cplx> probes{cplx(1.4, 0.2), cplx(-0.3, 0.7), cplx(0.6, -1.1)};

    EllipticPhasePoint base(ThetaContext(0.0), p, t, eta, z);
    std::vector<CMat> lax0;
    for (cplx w : probes) lax0.push_back(lax_elliptic(base, w));

    std::vector<DegenerationRow> rows;
    for (double q : qs) {
        EllipticPhasePoint pt(ThetaContext(q), p, t, eta, z);
        DegenerationRow row;
        row.q = q;
        for (std::size_t k = 0; k < probes.size(); ++k)
            row.lax_gap = std::max(row.lax_gap, max_abs(lax_elliptic(pt, probes[k]) - lax0[k]));
        auto obs = hamiltonian_observables(pt.ctx(), n, z);
        std::vector<EllGradient> g;
        for (const auto &o : obs) g.push_back(o.gradient(pt));
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
                row.max_bracket = std::max(row.max_bracket, elliptic_bracket(g[a], g[b], pt).relative());
        rows.push_back(row);
    }
    return rows;
}

} // namespace hitchin
