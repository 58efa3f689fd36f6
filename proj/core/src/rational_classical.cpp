#include "hitchin/rational_classical.hpp"

#include "hitchin/partial_fractions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hitchin {

namespace {

using Series = std::vector<CMat>;

Series series_mul(const Series &a, const Series &b, int order) {
    const int n = static_cast<int>(a.front().rows());
    Series r(order + 1, CMat::Zero(n, n));
    for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Series series_pow(const Series &m, int p, int order) {
    const int n = static_cast<int>(m.front().rows());
    Series r(order + 1, CMat::Zero(n, n));
    r[0] = CMat::Identity(n, n);
    for (int k = 0; k < p; ++k) r = series_mul(r, m, order);
    return r;
}

// eta(z) = u^{-1} M(u) near z_i with u = z - z_i
Series site_series(const RationalPhasePoint &pt, int i, int order) {
    const int n = pt.n();
    Series m(order + 1, CMat::Zero(n, n));
    m[0] = pt.eta(i);
    for (int j = 0; j < pt.sites_count(); ++j) {
        if (j == i) continue;
        cplx dz = pt.site(j) - pt.site(i);
        cplx pw = dz;
        for (int r = 1; r <= order; ++r, pw *= dz) m[r] -= pt.eta(j) / pw;
    }
    return m;
}

// Gradient of c_{i,k} = coefficient of (z - z_i)^{-k} in tr(eta(z)^d).
Gradient principal_gradient(const RationalPhasePoint &pt, const Series &s_pow, int d, int i, int k) {
    const int n = pt.n();
    Gradient g(pt.sites_count(), CMat::Zero(n, n));
    g[i] = static_cast<double>(d) * s_pow[d - k];
    for (int j = 0; j < pt.sites_count(); ++j) {
        if (j == i) continue;
        cplx dz = pt.site(j) - pt.site(i);
        for (int r = 0; r <= d - k - 1; ++r) {
            int m = d - k - 1 - r;
            g[j] -= static_cast<double>(d) * s_pow[r] / std::pow(dz, m + 1);
        }
    }
    return g;
}

std::string observable_name(const HitchinKey &k) { return "H" + k.str(); }

} // namespace

RationalPhasePoint::RationalPhasePoint(std::vector<CMat> eta, std::vector<cplx> sites)
  : eta_(std::move(eta))
  , sites_(std::move(sites)) {
    if (eta_.empty()) throw DomainError("RationalPhasePoint: at least one site is required");
    if (eta_.size() != sites_.size()) throw DomainError("RationalPhasePoint: eta and sites differ in length");
    const auto n = eta_.front().rows();
    for (const auto &m : eta_)
        if (m.rows() != n || m.cols() != n) throw DomainError("RationalPhasePoint: residues must be n x n");
    for (std::size_t i = 0; i < sites_.size(); ++i)
        for (std::size_t j = i + 1; j < sites_.size(); ++j) {
            double s = std::max({1.0, std::abs(sites_[i]), std::abs(sites_[j])});
            if (std::abs(sites_[i] - sites_[j]) <= 1e-10 * s)
                throw DomainError("RationalPhasePoint: sites " + std::to_string(i) + " and " + std::to_string(j) +
                                  " coincide");
        }
}

bool RationalPhasePoint::is_nilpotent(int i, double tol) const {
    const CMat &m = eta(i);
    double s = std::max(1e-300, max_abs(m));
    CMat p = m;
    for (int k = 1; k <= n(); ++k) {
        if (std::abs(p.trace()) > tol * std::pow(s, k) * n()) return false;
        p = p * m;
    }
    return true;
}

CMat RationalPhasePoint::total_residue() const {
    CMat s = CMat::Zero(n(), n());
    for (const auto &m : eta_) s += m;
    return s;
}

bool RationalPhasePoint::satisfies_moment_constraint(double tol) const {
    return max_abs(total_residue()) <= tol * std::max(1.0, scale());
}

double RationalPhasePoint::scale() const {
    double s = 0.0;
    for (const auto &m : eta_) s = std::max(s, max_abs(m));
    return s;
}

CMat lax_rational(const RationalPhasePoint &pt, cplx z) {
    CMat r = CMat::Zero(pt.n(), pt.n());
    for (int i = 0; i < pt.sites_count(); ++i) {
        cplx d = z - pt.site(i);
        if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(z))) throw PoleError("lax_rational: z at a marked point", pt.site(i));
        r += pt.eta(i) / d;
    }
    return r;
}

std::string HitchinKey::str() const {
    std::ostringstream os;
    os << degree << ":(";
    for (std::size_t i = 0; i < index.size(); ++i) os << (i ? "," : "") << index[i];
    os << ")";
    return os.str();
}

cplx HitchinCoefficients::reconstruct(const std::vector<cplx> &sites, int degree, cplx z) const {
    cplx s = 0.0;
    for (const auto &[k, v] : values) {
        if (k.degree != degree) continue;
        cplx term = v;
        for (std::size_t i = 0; i < sites.size(); ++i) term /= std::pow(z - sites[i], k.index[i]);
        s += term;
    }
    for (const auto &[k, v] : casimirs)
        if (k.first == degree) s += v / std::pow(z - sites[k.second], degree);
    return s;
}

std::vector<cplx> HitchinCoefficients::flat() const {
    std::vector<cplx> f;
    for (const auto &kv : values) f.push_back(kv.second);
    for (const auto &kv : casimirs) f.push_back(kv.second);
    return f;
}

HitchinCoefficients hitchin_coeffs(const RationalPhasePoint &pt, const std::vector<int> &degrees) {
    HitchinCoefficients out;
    const int nsites = pt.sites_count();
    for (int d : degrees) {
        if (d < 1) throw DomainError("hitchin_coeffs: degree must be positive");
        PencilBasis sys(pt.sites(), d);
        CVec c = CVec::Zero(nsites * (d - 1));
        for (int i = 0; i < nsites; ++i) {
            Series p = series_pow(site_series(pt, i, d - 1), d, d - 1);
            for (int k = 1; k < d; ++k) c(sys.row(i, k)) = p[d - k].trace();
            out.casimirs[{d, i}] = p[0].trace();
        }
        CVec h = sys.projector() * c;
        for (std::size_t a = 0; a < sys.keys().size(); ++a) out.values[HitchinKey{d, sys.keys()[a]}] = h(static_cast<int>(a));
    }
    return out;
}

Gradient hitchin_gradient(const RationalPhasePoint &pt, const HitchinKey &key) {
    const int d = key.degree;
    PencilBasis sys(pt.sites(), d);
    const int col = sys.key_index(key.index);
    if (col < 0) throw DomainError("hitchin_gradient: invalid key " + key.str());
    Gradient g(pt.sites_count(), CMat::Zero(pt.n(), pt.n()));
    for (int i = 0; i < pt.sites_count(); ++i) {
        Series s_pow = series_pow(site_series(pt, i, d - 1), d - 1, d - 1);
        for (int k = 1; k < d; ++k) {
            cplx w = sys.projector()(col, sys.row(i, k));
            if (w == cplx(0.0)) continue;
            Gradient gk = principal_gradient(pt, s_pow, d, i, k);
            for (int j = 0; j < pt.sites_count(); ++j) g[j] += w * gk[j];
        }
    }
    return g;
}

Gradient casimir_gradient(const RationalPhasePoint &pt, int degree, int site) {
    Gradient g(pt.sites_count(), CMat::Zero(pt.n(), pt.n()));
    CMat p = CMat::Identity(pt.n(), pt.n());
    for (int k = 1; k < degree; ++k) p = p * pt.eta(site);
    g[site] = static_cast<double>(degree) * p;
    return g;
}

Observable entry_observable(int site, int a, int b) {
    Observable o;
    o.name = "eta" + std::to_string(site) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
    o.value = [=](const RationalPhasePoint &pt) { return pt.eta(site)(a, b); };
    o.gradient = [=](const RationalPhasePoint &pt) {
        Gradient g(pt.sites_count(), CMat::Zero(pt.n(), pt.n()));
        g[site](b, a) = 1.0;
        return g;
    };
    return o;
}

Observable hitchin_observable(const HitchinKey &key) {
    Observable o;
    o.name = observable_name(key);
    o.value = [key](const RationalPhasePoint &pt) {
        auto h = hitchin_coeffs(pt, {key.degree});
        auto it = h.values.find(key);
        if (it == h.values.end()) throw DomainError("hitchin_observable: invalid key " + key.str());
        return it->second;
    };
    o.gradient = [key](const RationalPhasePoint &pt) { return hitchin_gradient(pt, key); };
    return o;
}

Gradient fd_gradient(const Observable &f, const RationalPhasePoint &pt, double rel_step) {
    const int n = pt.n();
    const double h = rel_step * std::max(1.0, pt.scale());
    Gradient g(pt.sites_count(), CMat::Zero(n, n));
    auto shifted = [&](int i, int a, int b, double dx) {
        auto eta = pt.eta();
        eta[i](a, b) += dx;
        return f.value(RationalPhasePoint(eta, pt.sites()));
    };
    for (int i = 0; i < pt.sites_count(); ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                cplx d1 = (shifted(i, a, b, h) - shifted(i, a, b, -h)) / (2.0 * h);
                cplx d2 = (shifted(i, a, b, h / 2) - shifted(i, a, b, -h / 2)) / h;
                cplx r = (4.0 * d2 - d1) / 3.0;
                if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
                    throw std::runtime_error("fd_gradient: non-finite derivative of observable " + f.name);
                g[i](b, a) = r;
            }
    return g;
}

cplx kk_bracket(const Gradient &gf, const Gradient &gg, const RationalPhasePoint &pt) {
    cplx s = 0.0;
    for (int i = 0; i < pt.sites_count(); ++i) s -= (pt.eta(i) * commutator(gf[i], gg[i])).trace();
    return s;
}

cplx kk_bracket(const Observable &f, const Observable &g, const RationalPhasePoint &pt) {
    Gradient gf = f.gradient ? f.gradient(pt) : fd_gradient(f, pt);
    Gradient gg = g.gradient ? g.gradient(pt) : fd_gradient(g, pt);
    return kk_bracket(gf, gg, pt);
}

cplx kk_bracket_fd(const Observable &f, const Observable &g, const RationalPhasePoint &pt) {
    return kk_bracket(fd_gradient(f, pt), fd_gradient(g, pt), pt);
}

CMat lax_bracket_tensor(const RationalPhasePoint &pt, cplx z, cplx w) {
    const int n = pt.n();
    CMat t = CMat::Zero(n * n, n * n);
    for (int i = 0; i < pt.sites_count(); ++i) {
        const CMat &e = pt.eta(i);
        cplx s = 1.0 / ((z - pt.site(i)) * (w - pt.site(i)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        cplx v = (b == c ? e(a, d) : 0.0) - (a == d ? e(c, b) : 0.0);
                        t(a * n + c, b * n + d) += s * v;
                    }
    }
    return t;
}

CMat lax_bracket_rmatrix_form(const RationalPhasePoint &pt, cplx z, cplx w) {
    const int n = pt.n();
    CMat id = CMat::Identity(n, n);
    CMat p = CMat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) p(a * n + b, b * n + a) = 1.0;
    CMat x = Eigen::kroneckerProduct(lax_rational(pt, z), id).eval() + Eigen::kroneckerProduct(id, lax_rational(pt, w)).eval();
    return commutator(p, x) / (z - w);
}

std::vector<CMat> hamiltonian_field(const Gradient &grad, const RationalPhasePoint &pt, double scale) {
    std::vector<CMat> v(pt.sites_count());
    for (int i = 0; i < pt.sites_count(); ++i) v[i] = scale * commutator(pt.eta(i), grad[i]);
    return v;
}

std::vector<CMat> flow_field(const RationalPhasePoint &pt, const HitchinKey &key) {
    if (key.degree < 2 || static_cast<int>(key.index.size()) != pt.sites_count())
        throw DomainError("flow_field: invalid key " + key.str());
    int sum = 0;
    for (int a : key.index) {
        if (a < 0) throw DomainError("flow_field: invalid key " + key.str());
        sum += a;
    }
    if (sum != key.degree - 1) throw DomainError("flow_field: invalid key " + key.str());
    return hamiltonian_field(hitchin_gradient(pt, key), pt, 1.0 / key.degree);
}

std::vector<cplx> all_invariants(const RationalPhasePoint &pt) {
    std::vector<int> deg;
    for (int d = 2; d <= pt.n(); ++d) deg.push_back(d);
    return hitchin_coeffs(pt, deg).flat();
}

std::vector<cplx> lax_eigenvalues(const RationalPhasePoint &pt, cplx z) {
    Eigen::ComplexEigenSolver<CMat> es(lax_rational(pt, z), false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

namespace {

double matched_eigen_distance(std::vector<cplx> a, const std::vector<cplx> &b) {
    double worst = 0.0;
    for (cplx x : b) {
        auto it = std::min_element(a.begin(), a.end(), [&](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
        worst = std::max(worst, std::abs(*it - x));
        a.erase(it);
    }
    return worst;
}

RationalPhasePoint axpy(const RationalPhasePoint &p, const std::vector<CMat> &v, double h) {
    auto eta = p.eta();
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] += h * v[i];
    return RationalPhasePoint(std::move(eta), p.sites());
}

} // namespace

Trajectory integrate_flow(const RationalPhasePoint &start, const HitchinKey &key, const FlowOptions &opt) {
    if (!(opt.dt > 0.0) || !(opt.T > 0.0)) throw DomainError("integrate_flow: T and dt must be positive");
    const int steps = static_cast<int>(std::llround(opt.T / opt.dt));
    const double h = opt.T / steps;
    const auto inv0 = all_invariants(start);
    double inv_scale = 0.0;
    for (cplx v : inv0) inv_scale = std::max(inv_scale, std::abs(v));
    if (inv_scale == 0.0) inv_scale = 1.0;
    const auto ev0 = lax_eigenvalues(start, opt.spectral_point);
    double ev_scale = 1.0;
    for (cplx v : ev0) ev_scale = std::max(ev_scale, std::abs(v));

    Trajectory tr;
    auto record = [&](double t, const RationalPhasePoint &p) {
        auto inv = all_invariants(p);
        double d = 0.0;
        for (std::size_t k = 0; k < inv.size(); ++k) d = std::max(d, std::abs(inv[k] - inv0[k]) / inv_scale);
        double e = matched_eigen_distance(lax_eigenvalues(p, opt.spectral_point), ev0) / ev_scale;
        tr.times.push_back(t);
        tr.points.push_back(p);
        tr.drift.push_back(d);
        tr.max_drift = std::max(tr.max_drift, d);
        tr.max_eigen_drift = std::max(tr.max_eigen_drift, e);
    };

    RationalPhasePoint cur = start;
    record(0.0, cur);
    const int every = std::max(1, opt.sample_every);
    for (int s = 1; s <= steps; ++s) {
        auto k1 = flow_field(cur, key);
        auto k2 = flow_field(axpy(cur, k1, h / 2), key);
        auto k3 = flow_field(axpy(cur, k2, h / 2), key);
        auto k4 = flow_field(axpy(cur, k3, h), key);
        auto eta = cur.eta();
        for (std::size_t i = 0; i < eta.size(); ++i) {
            eta[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            double m = max_abs(eta[i]);
            if (!std::isfinite(m) || m > opt.overflow)
                throw StepRejectedError("integrate_flow: residue " + std::to_string(i) + " exceeded overflow bound at step " +
                                        std::to_string(s));
        }
        cur = RationalPhasePoint(std::move(eta), cur.sites());
        if (s % every == 0 || s == steps) record(s * h, cur);
    }
    return tr;
}

RationalPhasePoint random_rational_point(int n, int sites, Rng &rng, const RationalSampleOptions &opt) {
    std::vector<cplx> z;
    int guard = 0;
    while (static_cast<int>(z.size()) < sites) {
        if (++guard > 100000) throw DomainError("random_rational_point: cannot place sites with the requested gap");
        cplx c(rng.uniform(-opt.site_radius, opt.site_radius), rng.uniform(-opt.site_radius, opt.site_radius));
        bool ok = true;
        for (cplx w : z) ok = ok && std::abs(w - c) >= opt.min_gap;
        if (ok) z.push_back(c);
    }
    std::vector<CMat> eta;
    for (int i = 0; i < sites; ++i) {
        if (opt.nilpotent) {
            CVec v = rng.gaussian_matrix(n, 1);
            CVec w = rng.gaussian_matrix(n, 1);
            w -= (w.transpose() * v)(0, 0) / (v.transpose() * v)(0, 0) * v;
            eta.push_back(v * w.transpose());
        } else {
            eta.push_back(rng.gaussian_matrix(n, n));
        }
    }
    if (opt.moment && sites > 0) {
        CMat s = CMat::Zero(n, n);
        for (int i = 0; i + 1 < sites; ++i) s += eta[i];
        eta.back() = -s;
    }
    return RationalPhasePoint(std::move(eta), std::move(z));
}

} // namespace hitchin
