#include "hitchin/rational_quantum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "hitchin/partial_fractions.hpp"
#include "hitchin/random.hpp"

namespace hitchin {

// ---------------------------------------------------------------------------
// exact matrices

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMat QMat::from_int(const IMat &m) {
    QMat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

QMat QMat::operator+(const QMat &o) const {
    QMat r = *this;
    return r += o;
}

QMat &QMat::operator+=(const QMat &o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("QMat: dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

QMat QMat::operator-(const QMat &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("QMat: dimension mismatch");
    QMat r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
}

QMat QMat::operator*(const QMat &o) const {
    if (cols_ != o.rows_) throw DomainError("QMat: dimension mismatch");
    QMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational &a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j)
                if (o(k, j) != 0) r(i, j) += a * o(k, j);
        }
    return r;
}

QMat QMat::operator*(const Rational &s) const {
    QMat r = *this;
    for (auto &v : r.data_) v *= s;
    return r;
}

bool QMat::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational &v) { return v == 0; });
}

CMat QMat::to_complex() const {
    CMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
    return m;
}

QMat commutator(const QMat &a, const QMat &b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// Gaudin system

GaudinSystem::GaudinSystem(TensorRepSpace space, std::vector<cplx> sites)
  : space_(std::move(space))
  , sites_(std::move(sites))
  , algebra_(space_.algebra_rank(), false) {
    if (static_cast<int>(sites_.size()) != space_.sites())
        throw DomainError("GaudinSystem: site count does not match factor count");
    for (std::size_t i = 0; i < sites_.size(); ++i)
        for (std::size_t j = i + 1; j < sites_.size(); ++j)
            if (std::abs(sites_[i] - sites_[j]) <= 1e-10 * std::max(1.0, std::abs(sites_[i])))
                throw DomainError("GaudinSystem: sites must be distinct");
    for (const auto &e : algebra_.basis()) {
        std::vector<CMat> per;
        for (int i = 0; i < space_.sites(); ++i) per.push_back(space_.site_rep(e, i));
        site_basis_.push_back(std::move(per));
    }
}

CMat GaudinSystem::omega(int i, int j) const {
    CMat s = CMat::Zero(space_.dim(), space_.dim());
    for (const auto &per : site_basis_) s += per[i] * per[j];
    return s;
}

CMat GaudinSystem::casimir(int i) const { return omega(i, i); }

CMat GaudinSystem::quadratic(cplx zeta) const {
    CMat s = CMat::Zero(space_.dim(), space_.dim());
    for (const auto &per : site_basis_) {
        CMat ea = CMat::Zero(space_.dim(), space_.dim());
        for (int i = 0; i < sites_count(); ++i) {
            cplx d = zeta - sites_[i];
            if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(zeta)))
                throw PoleError("gaudin_quadratic: zeta at a site", sites_[i]);
            ea += per[i] / d;
        }
        s += ea * ea;
    }
    return s;
}

std::vector<CMat> GaudinSystem::residues() const {
    std::vector<CMat> h;
    for (int i = 0; i < sites_count(); ++i) {
        CMat s = CMat::Zero(space_.dim(), space_.dim());
        for (int j = 0; j < sites_count(); ++j)
            if (j != i) s += 2.0 * omega(i, j) / (sites_[i] - sites_[j]);
        h.push_back(s);
    }
    return h;
}

QMat GaudinSystem::omega_exact(int i, int j) const {
    if (space_.is_sl2()) {
        // h (x) h / 2 + e (x) f + f (x) e
        const auto &ti = space_.factor_triple(i);
        const auto &tj = space_.factor_triple(j);
        auto op = [&](const IMat &x, const IMat &y) {
            return QMat::from_int(space_.site_operator(x, i)) * QMat::from_int(space_.site_operator(y, j));
        };
        return op(ti.h, tj.h) * Rational(1, 2) + op(ti.e, tj.f) + op(ti.f, tj.e);
    }
    // P_ij - 1/n on C^n (x) C^n
    const int n = space_.algebra_rank();
    QMat s(space_.dim(), space_.dim());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            IMat ea = IMat::Zero(n, n), eb = IMat::Zero(n, n);
            ea(a, b) = 1;
            eb(b, a) = 1;
            s += QMat::from_int(space_.site_operator(ea, i)) * QMat::from_int(space_.site_operator(eb, j));
        }
    return s - QMat::identity(space_.dim()) * Rational(1, n);
}

std::vector<QMat> GaudinSystem::residues_exact(const std::vector<Rational> &sites) const {
    if (static_cast<int>(sites.size()) != sites_count()) throw DomainError("residues_exact: site count mismatch");
    std::vector<QMat> h;
    for (int i = 0; i < sites_count(); ++i) {
        QMat s(space_.dim(), space_.dim());
        for (int j = 0; j < sites_count(); ++j) {
            if (j == i) continue;
            if (sites[i] == sites[j]) throw DomainError("residues_exact: sites must be distinct");
            s += omega_exact(i, j) * (Rational(2) / (sites[i] - sites[j]));
        }
        h.push_back(std::move(s));
    }
    return h;
}

// ---------------------------------------------------------------------------
// singular-vector operators

SingularVectorSpec quadratic_spec(const MatrixAlgebra &alg) {
    SingularVectorSpec spec;
    for (const auto &e : alg.basis()) spec.push_back(SvTerm{1.0, {SvFactor{e, 1}, SvFactor{e, 1}}});
    return spec;
}

CMat ffr_operator(const GaudinSystem &sys, const SingularVectorSpec &spec, cplx u) {
    const int dim = sys.space().dim();
    for (cplx z : sys.sites())
        if (std::abs(u - z) <= 1e-14 * std::max(1.0, std::abs(u))) throw PoleError("ffr_operator: u at a site", z);
    CMat total = CMat::Zero(dim, dim);
    for (const auto &term : spec) {
        CMat prod = CMat::Identity(dim, dim);
        for (const auto &f : term.factors) {
            if (f.depth < 1) throw DomainError("ffr_operator: depth must be positive");
            const double sign = (f.depth % 2 == 1) ? 1.0 : -1.0;
            CMat x = CMat::Zero(dim, dim);
            for (int i = 0; i < sys.sites_count(); ++i)
                x += sign * sys.space().site_rep(f.generator, i) / std::pow(u - sys.sites()[i], f.depth);
            prod = prod * x;
        }
        total += term.coefficient * prod;
    }
    return total;
}

// ---------------------------------------------------------------------------
// s_p recursion and the diagonal element

std::vector<Rational> s_polynomials(int n, int p_max) {
    if (p_max < 1) throw DomainError("s_polynomials: p_max must be positive");
    std::vector<Rational> s(std::max(p_max, 3) + 1);
    s[1] = 0;
    s[2] = Rational(n, 2);
    s[3] = Rational(-2 * n, 3);
    for (int p = 2; p + 2 <= p_max; ++p)
        s[p + 2] = (Rational(n - p) * s[p] - Rational(2 * (p + 1)) * s[p + 1]) / Rational(p + 2);
    return std::vector<Rational>(s.begin() + 1, s.begin() + 1 + p_max);
}

Rational s_recursion_residual(int n, int p_max) {
    auto s = s_polynomials(n, p_max);
    Rational worst = 0;
    for (int p = 2; p + 2 <= p_max; ++p) {
        Rational r = Rational(p + 2) * s[p + 1] - Rational(n - p) * s[p - 1] + Rational(2 * (p + 1)) * s[p];
        if (r < 0) r = -r;
        worst = std::max(worst, r);
    }
    return worst;
}

EigenH eigen_h(int n) {
    if (n < 2) throw DomainError("eigen_h: n must be at least 2");
    auto s = s_polynomials(n, std::max(n, 3));
    // monic coefficients c_k = (-1)^k s_k
    std::vector<double> c(n + 1);
    c[0] = 1.0;
    for (int k = 1; k <= n; ++k) c[k] = (k % 2 ? -1.0 : 1.0) * s[k - 1].convert_to<double>();
    CMat comp = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) comp(0, k) = -c[k + 1];
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<CMat> es(comp, true);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen_h: companion eigensolver failed");
    EigenH out;
    out.roots.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    const double tie = 1e-9;
    std::sort(out.roots.begin(), out.roots.end(), [tie](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > tie) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (cplx r : out.roots) {
        cplx v = 0.0;
        for (int k = 0; k <= n; ++k) v = v * r + c[k];
        out.residual = std::max(out.residual, std::abs(v));
    }
    Eigen::JacobiSVD<CMat> svd(es.eigenvectors());
    const auto &sv = svd.singularValues();
    out.condition = sv(n - 1) > 0 ? sv(0) / sv(n - 1) : INFINITY;
    if (!std::isfinite(out.condition) || out.condition > 1e12)
        throw std::runtime_error("eigen_h: companion matrix is ill-conditioned (cond " + std::to_string(out.condition) + ")");
    out.h = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) out.h(k, k) = out.roots[k];
    return out;
}

// ---------------------------------------------------------------------------
// Haar averaging

namespace {

struct Moments {
    long count = 0;
    double weight = 0.0;
    std::vector<CMat> mean;
    std::vector<Eigen::MatrixXd> m2;

    void add(const std::vector<CMat> &x, double w = 1.0) {
        if (mean.empty()) {
            for (const auto &v : x) {
                mean.push_back(CMat::Zero(v.rows(), v.cols()));
                m2.push_back(Eigen::MatrixXd::Zero(v.rows(), v.cols()));
            }
        }
        ++count;
        weight += w;
        for (std::size_t k = 0; k < x.size(); ++k) {
            CMat d = x[k] - mean[k];
            mean[k] += (w / weight) * d;
            CMat d2 = x[k] - mean[k];
            m2[k] += w * (d.conjugate().cwiseProduct(d2)).real();
        }
    }

    void merge(const Moments &o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double wa = weight, wb = o.weight, w = wa + wb;
        for (std::size_t k = 0; k < mean.size(); ++k) {
            CMat d = o.mean[k] - mean[k];
            mean[k] += (wb / w) * d;
            m2[k] += o.m2[k] + (wa * wb / w) * d.cwiseAbs2();
        }
        count += o.count;
        weight = w;
    }

    // entrywise standard error of the mean (unit weights)
    CMat se(std::size_t k) const {
        if (count < 2) return CMat::Zero(mean[k].rows(), mean[k].cols());
        Eigen::MatrixXd var = m2[k] / static_cast<double>(count - 1);
        return (var / static_cast<double>(count)).cwiseSqrt().cast<cplx>();
    }
};

using SampleFn = std::function<std::vector<CMat>(const CMat &)>;

Moments haar_average(int n, const CMat &h, const HaarSampler &sampler, const SampleFn &fn) {
    if (sampler.kind == HaarSampler::Kind::Quadrature) {
        if (n != 2) throw DomainError("higher_gaudin: quadrature sampler requires n = 2");
        if (std::abs(h.trace()) > 1e-12 * std::max(1.0, max_abs(h)))
            throw DomainError("higher_gaudin: quadrature sampler requires traceless H");
        // Ad(k)H runs over a * (n . sigma) with n uniform on the sphere
        Eigen::ComplexEigenSolver<CMat> es(h);
        cplx a = es.eigenvalues()(0);
        if (std::abs(es.eigenvalues()(0) - es.eigenvalues()(1)) < 1e-14) a = 0.0;
        else if (a.real() < es.eigenvalues()(1).real() ||
                 (a.real() == es.eigenvalues()(1).real() && a.imag() < es.eigenvalues()(1).imag()))
            a = es.eigenvalues()(1);
        using GL = boost::math::quadrature::gauss<double, 20>;
        std::vector<double> x, wx;
        for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
            double ak = GL::abscissa()[k], wk = GL::weights()[k];
            x.push_back(ak);
            wx.push_back(wk / 2.0);
            if (ak != 0.0) {
                x.push_back(-ak);
                wx.push_back(wk / 2.0);
            }
        }
        const int nphi = std::max(sampler.quad_azimuth, 1);
        Moments m;
        for (std::size_t k = 0; k < x.size(); ++k) {
            double ct = x[k], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int j = 0; j < nphi; ++j) {
                double ph = 2.0 * M_PI * j / nphi;
                CMat a_k(2, 2);
                a_k << ct, cplx(st * std::cos(ph), -st * std::sin(ph)), cplx(st * std::cos(ph), st * std::sin(ph)), -ct;
                m.add(fn(a * a_k), wx[k] / nphi);
            }
        }
        m.count = 0; // deterministic rule: no sampling error
        return m;
    }
    if (sampler.samples < 1) throw DomainError("higher_gaudin: sample count must be positive");
    const long chunk = std::max<long>(1, sampler.chunk);
    const long nchunks = (sampler.samples + chunk - 1) / chunk;
    std::vector<Moments> parts(nchunks);
    auto work = [&](long c) {
        Rng rng(sampler.seed, static_cast<std::uint64_t>(c));
        const long lo = c * chunk, hi = std::min(sampler.samples, lo + chunk);
        for (long s = lo; s < hi; ++s) {
            CMat k = haar_su(n, rng);
            parts[c].add(fn(k * h * k.adjoint()));
        }
    };
    int threads = sampler.threads > 0 ? sampler.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long c = next++; c < nchunks; c = next++) work(c);
        });
    for (auto &t : pool) t.join();
    Moments total;
    for (const auto &p : parts) total.merge(p);
    return total;
}

double multinomial(const std::vector<int> &m) {
    double r = 1.0;
    int acc = 0;
    for (int k : m)
        for (int j = 1; j <= k; ++j) r = r * (++acc) / j;
    return r;
}

double frob_se(const CMat &se) { return std::sqrt(se.cwiseAbs2().sum()); }

} // namespace

double PencilEntry::se_norm() const { return frob_se(se); }

CMat OperatorPencil::evaluate(const std::vector<cplx> &sites, cplx zeta) const {
    CMat s;
    for (const auto &[key, entry] : coefficients) {
        cplx w = 1.0;
        for (std::size_t i = 0; i < sites.size(); ++i) w /= std::pow(zeta - sites[i], key[i]);
        s = s.size() ? CMat(s + w * entry.mean) : CMat(w * entry.mean);
    }
    for (std::size_t i = 0; i < site_terms.size(); ++i) {
        CMat t = site_terms[i].mean / std::pow(zeta - sites[i], degree);
        s = s.size() ? CMat(s + t) : t;
    }
    return s;
}

OperatorPencil higher_gaudin(const GaudinSystem &sys, const CMat &h, int l, const HaarSampler &sampler,
                             const std::vector<CMat> &probes) {
    if (l < 1) throw DomainError("higher_gaudin: degree must be positive");
    const int n = sys.space().algebra_rank();
    if (h.rows() != n || h.cols() != n) throw DomainError("higher_gaudin: H has the wrong size");
    const int nsites = sys.sites_count();
    const int dim = sys.space().dim();
    PencilBasis basis(sys.sites(), l);
    const int nkeys = static_cast<int>(basis.keys().size());

    struct Mono {
        std::vector<int> m;
        double mult;
        int single = -1; // site index when all multiplicity sits on one site
        CVec weights;
    };
    std::vector<Mono> monos;
    for (auto &m : multi_indices(nsites, l)) {
        Mono mo{m, multinomial(m), -1, CVec()};
        for (int i = 0; i < nsites; ++i)
            if (m[i] == l) mo.single = i;
        if (mo.single < 0) mo.weights = basis.coefficients(m);
        monos.push_back(std::move(mo));
    }

    const int nprobe = static_cast<int>(probes.size());
    SampleFn fn = [&](const CMat &a) {
        std::vector<CMat> pw(nsites * (l + 1));
        for (int i = 0; i < nsites; ++i) {
            CMat x = sys.space().site_rep(a, i);
            pw[i * (l + 1)] = CMat::Identity(dim, dim);
            for (int p = 1; p <= l; ++p) pw[i * (l + 1) + p] = pw[i * (l + 1) + p - 1] * x;
        }
        std::vector<CMat> out(nkeys + nsites, CMat::Zero(dim, dim));
        for (const auto &mo : monos) {
            CMat prod = CMat::Identity(dim, dim);
            for (int i = 0; i < nsites; ++i)
                if (mo.m[i] > 0) prod = prod * pw[i * (l + 1) + mo.m[i]];
            prod *= mo.mult;
            if (mo.single >= 0) {
                out[nkeys + mo.single] += prod;
                continue;
            }
            for (int k = 0; k < nkeys; ++k)
                if (mo.weights(k) != cplx(0.0)) out[k] += mo.weights(k) * prod;
        }
        for (int k = 0; k < nkeys; ++k)
            for (int p = 0; p < nprobe; ++p) out.push_back(commutator(out[k], probes[p]));
        return out;
    };

    Moments mom = haar_average(n, h, sampler, fn);
    OperatorPencil pencil;
    pencil.degree = l;
    pencil.samples = sampler.kind == HaarSampler::Kind::Quadrature ? 0 : mom.count;
    pencil.condition = basis.condition();
    double worst_se = 0.0;
    auto entry = [&](int idx) {
        PencilEntry e;
        e.mean = mom.mean[idx];
        e.se = mom.se(idx);
        worst_se = std::max(worst_se, frob_se(e.se));
        return e;
    };
    for (int k = 0; k < nkeys; ++k) {
        PencilEntry e = entry(k);
        for (int p = 0; p < nprobe; ++p) {
            int idx = nkeys + nsites + k * nprobe + p;
            e.probe_commutator.push_back(mom.mean[idx]);
            e.probe_se.push_back(frob_se(mom.se(idx)));
        }
        pencil.coefficients.emplace(basis.keys()[k], std::move(e));
    }
    for (int i = 0; i < nsites; ++i) pencil.site_terms.push_back(entry(nkeys + i));
    if (sampler.target_se > 0.0 && worst_se > sampler.target_se)
        throw std::runtime_error("higher_gaudin: sampler budget exhausted before target error (se " +
                                 std::to_string(worst_se) + " > " + std::to_string(sampler.target_se) + ")");
    return pencil;
}

ProportionalityFit fit_quadratic_constant(const GaudinSystem &sys, const CMat &h, const HaarSampler &sampler) {
    const int nsites = sys.sites_count();
    auto res = sys.residues();
    double gg = 0.0;
    for (const auto &r : res) gg += r.squaredNorm();
    if (gg == 0.0) throw DomainError("fit_quadratic_constant: quadratic pencil vanishes");
    const int dim = sys.space().dim();
    SampleFn fn = [&](const CMat &a) {
        std::vector<CMat> x(nsites);
        for (int i = 0; i < nsites; ++i) x[i] = sys.space().site_rep(a, i);
        // l = 2 pencil of the sample: sum_{j != i} 2 X_i X_j / (z_i - z_j)
        std::vector<CMat> s(nsites, CMat::Zero(dim, dim));
        for (int i = 0; i < nsites; ++i)
            for (int j = 0; j < nsites; ++j)
                if (j != i) s[i] += 2.0 * x[i] * x[j] / (sys.sites()[i] - sys.sites()[j]);
        cplx c = 0.0;
        for (int i = 0; i < nsites; ++i) c += res[i].cwiseProduct(s[i].conjugate()).sum();
        c = std::conj(c) / gg;
        std::vector<CMat> out;
        out.push_back(CMat::Constant(1, 1, c));
        for (int i = 0; i < nsites; ++i) out.push_back(s[i] - c * res[i]);
        return out;
    };
    Moments mom = haar_average(sys.space().algebra_rank(), h, sampler, fn);
    ProportionalityFit fit;
    fit.constant_re = mom.mean[0](0, 0).real();
    fit.constant_im = mom.mean[0](0, 0).imag();
    fit.constant_se = std::abs(mom.se(0)(0, 0));
    double rn = 0.0, rs = 0.0;
    for (int i = 0; i < nsites; ++i) {
        rn += mom.mean[1 + i].squaredNorm();
        rs += mom.se(1 + i).squaredNorm();
    }
    fit.residual_norm = std::sqrt(rn);
    fit.residual_se = std::sqrt(rs);
    return fit;
}

double commutator_norm(const CMat &a, const CMat &b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DomainError("commutator_norm: dimension mismatch");
    return (a * b - b * a).norm();
}

} // namespace hitchin
