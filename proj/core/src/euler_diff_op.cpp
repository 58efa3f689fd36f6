#include "hitchin/euler_diff_op.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

namespace {

bool exactly_zero(const CMat &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != cplx(0.0)) return false;
    return true;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// D^j of a single monomial, j = 0..order
class DerivativeCache {
public:
    const ThetaPoly &get(const ThetaMonomial &m, int j) {
        auto &v = cache_[m];
        if (v.empty()) v.push_back(ThetaPoly::monomial(m));
        while (static_cast<int>(v.size()) <= j) v.push_back(v.back().euler_derivative());
        return v[j];
    }

private:
    std::map<ThetaMonomial, std::vector<ThetaPoly>> cache_;
};

} // namespace

cplx evaluate_monomial(const ThetaMonomial &m, const ThetaContext &ctx, cplx t) {
    cplx v = 1.0;
    if (m.xpow != 0) v = std::pow(t, m.xpow);
    for (const auto &[g, e] : m.factors) {
        if (g.kind == ThetaGen::Kind::Theta && e < 0) ctx.pole_guard(g.argument(t));
        cplx gv = g.evaluate(ctx, t);
        v *= e == 1 ? gv : std::pow(gv, e);
    }
    return v;
}

EulerDiffOp EulerDiffOp::identity(int dim) { return constant(CMat::Identity(dim, dim)); }

EulerDiffOp EulerDiffOp::derivative(int dim) {
    EulerDiffOp r(dim);
    r.add_raw({1, ThetaMonomial{}}, CMat::Identity(dim, dim));
    return r;
}

EulerDiffOp EulerDiffOp::multiplication(const ThetaExpr &f, const CMat &m) {
    EulerDiffOp r(static_cast<int>(m.rows()));
    r.add(0, f, m);
    return r;
}

EulerDiffOp EulerDiffOp::constant(const CMat &m) {
    EulerDiffOp r(static_cast<int>(m.rows()));
    r.add_raw({0, ThetaMonomial{}}, m);
    return r;
}

void EulerDiffOp::add(int degree, const ThetaExpr &f, const CMat &m) {
    if (degree < 0) throw DomainError("EulerDiffOp: negative degree");
    if (!f.is_polynomial()) throw DomainError("EulerDiffOp: coefficient must be a theta polynomial");
    if (m.rows() != dim_ || m.cols() != dim_) throw DomainError("EulerDiffOp: matrix size mismatch");
    for (const auto &[mono, c] : f.numerator().terms()) add_raw({degree, mono}, c * m);
}

void EulerDiffOp::add_raw(const Key &k, const CMat &m) {
    if (exactly_zero(m)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, m);
        return;
    }
    it->second += m;
    if (exactly_zero(it->second)) terms_.erase(it);
}

int EulerDiffOp::degree() const {
    int d = -1;
    for (const auto &[k, m] : terms_) d = std::max(d, k.first);
    return d;
}

EulerDiffOp &EulerDiffOp::operator+=(const EulerDiffOp &o) {
    if (o.dim_ != dim_) throw DomainError("EulerDiffOp: dimension mismatch");
    for (const auto &[k, m] : o.terms_) add_raw(k, m);
    return *this;
}

EulerDiffOp &EulerDiffOp::operator-=(const EulerDiffOp &o) {
    if (o.dim_ != dim_) throw DomainError("EulerDiffOp: dimension mismatch");
    for (const auto &[k, m] : o.terms_) add_raw(k, -m);
    return *this;
}

EulerDiffOp EulerDiffOp::operator+(const EulerDiffOp &o) const {
    EulerDiffOp r = *this;
    return r += o;
}

EulerDiffOp EulerDiffOp::operator-(const EulerDiffOp &o) const {
    EulerDiffOp r = *this;
    return r -= o;
}

EulerDiffOp EulerDiffOp::operator-() const { return scaled(-1.0); }

EulerDiffOp EulerDiffOp::scaled(cplx s) const {
    EulerDiffOp r(dim_);
    if (s == cplx(0.0)) return r;
    for (const auto &[k, m] : terms_) r.terms_.emplace(k, s * m);
    return r;
}

// (f M D^a)(g N D^b) = sum_j C(a,j) f (D^j g) M N D^{a-j+b}
EulerDiffOp EulerDiffOp::operator*(const EulerDiffOp &o) const {
    if (o.dim_ != dim_) throw DomainError("EulerDiffOp: dimension mismatch");
    EulerDiffOp r(dim_);
    DerivativeCache cache;
    for (const auto &[ka, ma] : terms_) {
        const int a = ka.first;
        for (const auto &[kb, mb] : o.terms_) {
            const CMat prod = ma * mb;
            if (exactly_zero(prod)) continue;
            for (int j = 0; j <= a; ++j) {
                const ThetaPoly &dg = cache.get(kb.second, j);
                const double w = binomial(a, j);
                for (const auto &[mono, c] : dg.terms())
                    r.add_raw({a - j + kb.first, ka.second * mono}, (w * c) * prod);
            }
        }
    }
    return r;
}

std::vector<CMat> EulerDiffOp::evaluate(const ThetaContext &ctx, cplx t) const {
    const int deg = degree();
    std::vector<CMat> out(std::max(deg + 1, 1), CMat::Zero(dim_, dim_));
    std::map<ThetaMonomial, cplx> seen;
    for (const auto &[k, m] : terms_) {
        auto it = seen.find(k.second);
        if (it == seen.end()) it = seen.emplace(k.second, evaluate_monomial(k.second, ctx, t)).first;
        out[k.first] += it->second * m;
    }
    return out;
}

CMat EulerDiffOp::principal(const ThetaContext &ctx, cplx t) const { return evaluate(ctx, t).back(); }

CVec EulerDiffOp::apply_monomial(const ThetaContext &ctx, cplx t, int m, const CVec &v) const {
    auto a = evaluate(ctx, t);
    CVec out = CVec::Zero(dim_);
    double md = 1.0;
    for (const auto &ad : a) {
        out += md * (ad * v);
        md *= m;
    }
    return out;
}

double EulerDiffOp::magnitude(const ThetaContext &ctx, cplx t, int m) const {
    double s = 0.0;
    for (const auto &[k, mat] : terms_)
        s += std::abs(evaluate_monomial(k.second, ctx, t)) * max_abs(mat) * std::pow(std::abs(m), k.first);
    return s;
}

EulerDiffOp commutator(const EulerDiffOp &a, const EulerDiffOp &b) { return a * b - b * a; }

std::vector<CMat> shift_derivative(const std::vector<CMat> &coeffs, cplx c) {
    if (coeffs.empty()) return {};
    std::vector<CMat> out(coeffs.size(), CMat::Zero(coeffs[0].rows(), coeffs[0].cols()));
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
        cplx cp = 1.0; // c^{d-j}, j descending
        for (std::size_t j = d + 1; j-- > 0;) {
            out[j] += binomial(static_cast<int>(d), static_cast<int>(j)) * cp * coeffs[d];
            cp *= c;
        }
    }
    return out;
}

double coefficient_distance(const std::vector<CMat> &a, const std::vector<CMat> &b) {
    double r = 0.0;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t d = 0; d < n; ++d) {
        if (d < a.size() && d < b.size())
            r = std::max(r, max_abs(a[d] - b[d]));
        else
            r = std::max(r, max_abs(d < a.size() ? a[d] : b[d]));
    }
    return r;
}

} // namespace hitchin
