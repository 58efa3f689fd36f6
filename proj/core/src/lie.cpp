#include "hitchin/lie.hpp"

#include <cmath>

namespace hitchin {

namespace {

template <class M> M embed(const M &x, int left, int right) {
    using S = typename M::Scalar;
    const int d = static_cast<int>(x.rows());
    const int n = left * d * right;
    M out = M::Zero(n, n);
    for (int l = 0; l < left; ++l)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                S v = x(a, b);
                if (v == S(0)) continue;
                const int ra = (l * d + a) * right;
                const int cb = (l * d + b) * right;
                for (int r = 0; r < right; ++r) out(ra + r, cb + r) = v;
            }
    return out;
}

} // namespace

Sl2Triple<IMat> sl2_irrep_int(int lambda) {
    if (lambda < 0) throw DomainError("sl2_irrep: highest weight must be nonnegative");
    const int d = lambda + 1;
    Sl2Triple<IMat> t{IMat::Zero(d, d), IMat::Zero(d, d), IMat::Zero(d, d)};
    for (int k = 0; k < d; ++k) {
        t.h(k, k) = lambda - 2 * k;
        if (k + 1 < d) t.f(k + 1, k) = 1;
        if (k > 0) t.e(k - 1, k) = static_cast<long long>(k) * (lambda - k + 1);
    }
    return t;
}

Sl2Triple<CMat> sl2_irrep(int lambda) {
    auto t = sl2_irrep_int(lambda);
    return {t.e.cast<double>().cast<cplx>(), t.f.cast<double>().cast<cplx>(), t.h.cast<double>().cast<cplx>()};
}

MatrixAlgebra::MatrixAlgebra(int n, bool with_identity)
  : n_(n)
  , with_identity_(with_identity) {
    if (n < 1) throw DomainError("MatrixAlgebra: n must be positive");
    const double r2 = std::sqrt(0.5);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            basis_.push_back(r2 * (unit(a, b) + unit(b, a)));
            basis_.push_back(I_unit * r2 * (unit(a, b) - unit(b, a)));
        }
    for (int k = 1; k < n; ++k) {
        CMat d = CMat::Zero(n, n);
        for (int j = 0; j < k; ++j) d(j, j) = 1.0;
        d(k, k) = -static_cast<double>(k);
        basis_.push_back(d / std::sqrt(static_cast<double>(k * (k + 1))));
    }
    if (with_identity) basis_.push_back(CMat::Identity(n, n) / std::sqrt(static_cast<double>(n)));
}

CMat MatrixAlgebra::casimir_tensor() const {
    CMat s = CMat::Zero(n_ * n_, n_ * n_);
    for (const auto &e : basis_) s += Eigen::kroneckerProduct(e, e).eval();
    return s;
}

CMat MatrixAlgebra::permutation(int n) {
    CMat p = CMat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) p(a * n + b, b * n + a) = 1.0;
    return p;
}

TensorRepSpace TensorRepSpace::sl2(std::vector<int> weights) {
    TensorRepSpace s;
    s.sl2_ = true;
    s.rank_ = 2;
    s.weights_ = std::move(weights);
    for (int w : s.weights_) {
        if (w < 0) throw DomainError("TensorRepSpace: weights must be nonnegative");
        s.dims_.push_back(w + 1);
        s.triples_.push_back(sl2_irrep_int(w));
        s.total_ *= w + 1;
    }
    return s;
}

TensorRepSpace TensorRepSpace::defining(int n, int sites) {
    if (n < 1 || sites < 0) throw DomainError("TensorRepSpace: invalid defining space");
    TensorRepSpace s;
    s.sl2_ = false;
    s.rank_ = n;
    s.dims_.assign(sites, n);
    for (int i = 0; i < sites; ++i) s.total_ *= n;
    return s;
}

void TensorRepSpace::check_site(int i) const {
    if (i < 0 || i >= sites()) throw DomainError("TensorRepSpace: site index out of range");
}

CMat TensorRepSpace::site_operator(const CMat &x, int i) const {
    check_site(i);
    if (x.rows() != dims_[i] || x.cols() != dims_[i])
        throw DomainError("site_operator: matrix size does not match factor dimension");
    int left = 1, right = 1;
    for (int j = 0; j < i; ++j) left *= dims_[j];
    for (int j = i + 1; j < sites(); ++j) right *= dims_[j];
    return embed(x, left, right);
}

IMat TensorRepSpace::site_operator(const IMat &x, int i) const {
    check_site(i);
    if (x.rows() != dims_[i] || x.cols() != dims_[i])
        throw DomainError("site_operator: matrix size does not match factor dimension");
    int left = 1, right = 1;
    for (int j = 0; j < i; ++j) left *= dims_[j];
    for (int j = i + 1; j < sites(); ++j) right *= dims_[j];
    return embed(x, left, right);
}

CMat TensorRepSpace::factor_rep(const CMat &x, int i) const {
    check_site(i);
    if (x.rows() != rank_ || x.cols() != rank_) throw DomainError("factor_rep: algebra element has wrong size");
    if (!sl2_) return x;
    const auto &t = triples_[i];
    const int d = dims_[i];
    CMat e = t.e.cast<double>().cast<cplx>();
    CMat f = t.f.cast<double>().cast<cplx>();
    CMat h = t.h.cast<double>().cast<cplx>();
    CMat id = CMat::Identity(d, d);
    double lam = weights_[i];
    return x(0, 1) * e + x(1, 0) * f + x(0, 0) * 0.5 * (lam * id + h) + x(1, 1) * 0.5 * (lam * id - h);
}

CMat TensorRepSpace::total(const CMat &x) const {
    CMat s = CMat::Zero(total_, total_);
    for (int i = 0; i < sites(); ++i) s += site_rep(x, i);
    return s;
}

const Sl2Triple<IMat> &TensorRepSpace::factor_triple(int i) const {
    if (!sl2_) throw DomainError("factor_triple: space is not an sl2 tensor product");
    check_site(i);
    return triples_[i];
}

CMat TensorRepSpace::total_h() const {
    if (!sl2_) throw DomainError("total_h: space is not an sl2 tensor product");
    CMat s = CMat::Zero(total_, total_);
    for (int i = 0; i < sites(); ++i) s += site_operator(CMat(triples_[i].h.cast<double>().cast<cplx>()), i);
    return s;
}

std::vector<int> TensorRepSpace::weight_zero_indices() const {
    if (!sl2_) throw DomainError("weight_zero_indices: space is not an sl2 tensor product");
    std::vector<int> idx;
    for (int k = 0; k < total_; ++k) {
        int rem = k, w = 0;
        for (int j = sites() - 1; j >= 0; --j) {
            int kj = rem % dims_[j];
            rem /= dims_[j];
            w += weights_[j] - 2 * kj;
        }
        if (w == 0) idx.push_back(k);
    }
    return idx;
}

CMat TensorRepSpace::weight_zero_projector() const {
    CMat p = CMat::Zero(total_, total_);
    for (int k : weight_zero_indices()) p(k, k) = 1.0;
    return p;
}

CMat TensorRepSpace::weight_zero_basis() const {
    auto idx = weight_zero_indices();
    CMat b = CMat::Zero(total_, static_cast<int>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) b(idx[c], static_cast<int>(c)) = 1.0;
    return b;
}

} // namespace hitchin
