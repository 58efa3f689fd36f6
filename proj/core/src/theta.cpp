#include "hitchin/theta.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace hitchin {

namespace {

constexpr int kMaxK = ThetaContext::max_derivative_order + 2;

// Eulerian numbers A(k, m), 0 <= m < k.
const std::array<std::array<double, kMaxK + 1>, kMaxK + 1> &eulerian() {
    static const auto table = [] {
        std::array<std::array<double, kMaxK + 1>, kMaxK + 1> a{};
        a[1][0] = 1.0;
        for (int k = 2; k <= kMaxK; ++k)
            for (int m = 0; m < k; ++m)
                a[k][m] = (m + 1) * a[k - 1][m] + (m > 0 ? (k - m) * a[k - 1][m - 1] : 0.0);
        return a;
    }();
    return table;
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "j";
    return os.str();
}

} // namespace

ThetaContext::ThetaContext(cplx q, double tol, int max_terms, double pole_guard)
  : q_(q)
  , tol_(tol)
  , max_terms_(max_terms)
  , guard_(pole_guard)
  , aq_(std::abs(q)) {
    if (!(aq_ < 1.0)) throw DomainError("theta: modulus must satisfy |q| < 1, got q=" + fmt(q));
    if (!(tol > 0.0)) throw DomainError("theta: tol must be positive");
    if (max_terms <= 0) throw DomainError("theta: max_terms must be positive");

    cplx prod = 1.0;
    cplx sum = 0.0;
    cplx qi = q_;
    int i = 1;
    for (; i <= max_terms_; ++i) {
        double a = std::abs(qi);
        if (a == 0.0) break;
        cplx one_m = 1.0 - qi;
        prod *= one_m * one_m;
        sum += qi / (one_m * one_m);
        if (a / (1.0 - aq_) < tol_ * 1e-2) break;
        qi *= q_;
    }
    if (i > max_terms_) throw TruncationError("theta: constant series did not converge");
    tp1_ = -prod;
    wpc_ = 1.0 / 12.0 - 2.0 * sum;
}

bool ThetaContext::near_pole(cplx z) const {
    if (z == cplx(0.0)) return true;
    if (aq_ == 0.0) return std::abs(z - 1.0) < guard_;
    double m = std::log(std::abs(z)) / std::log(aq_);
    long mc = std::lround(m);
    for (long j = mc - 1; j <= mc + 1; ++j) {
        cplx p = std::pow(q_, static_cast<double>(j));
        if (j == 0) p = 1.0;
        if (std::abs(z - p) < guard_ * std::abs(p)) return true;
    }
    return false;
}

void ThetaContext::pole_guard(cplx z) const {
    if (z == cplx(0.0)) throw DomainError("theta: argument must be nonzero");
    if (aq_ == 0.0) {
        if (std::abs(z - 1.0) < guard_) throw PoleError("argument " + fmt(z) + " at pole 1", 1.0);
        return;
    }
    double m = std::log(std::abs(z)) / std::log(aq_);
    long mc = std::lround(m);
    for (long j = mc - 1; j <= mc + 1; ++j) {
        cplx p = j == 0 ? cplx(1.0) : std::pow(q_, static_cast<double>(j));
        if (std::abs(z - p) < guard_ * std::abs(p))
            throw PoleError("argument " + fmt(z) + " within guard of lattice point q^" + std::to_string(j), p);
    }
}

cplx ThetaContext::theta(cplx z) const {
    if (z == cplx(0.0)) throw DomainError("theta: argument must be nonzero");
    const double span = std::abs(z) + 1.0 / std::abs(z);
    cplx prod = 1.0 - z;
    cplx qi = q_;
    int i = 1;
    for (; i <= max_terms_; ++i) {
        double a = std::abs(qi);
        if (a == 0.0) break;
        prod *= (1.0 - qi * z) * (1.0 - qi / z);
        double tail = 2.0 * a * aq_ * span / (1.0 - aq_);
        if (a * span < 0.5 && tail < tol_ * 1e-2) break;
        qi *= q_;
    }
    if (i > max_terms_) throw TruncationError("theta: product did not converge within max_terms at z=" + fmt(z));
    return prod;
}

// Li_{-k}(w) = sum_{n>=1} n^k w^n, closed form via Eulerian numbers.
cplx ThetaContext::polylog_neg(cplx w, int k) const {
    cplx om = 1.0 - w;
    if (k == 0) return w / om;
    const auto &a = eulerian();
    cplx num = 0.0;
    for (int m = k - 1; m >= 0; --m) num = num * w + a[k][m];
    num *= w;
    return num / std::pow(om, k + 1);
}

cplx ThetaContext::logderiv_d(cplx z, int k) const {
    if (k < 0 || k > max_derivative_order + 1)
        throw DomainError("theta: derivative order out of range");
    pole_guard(z);
    const double sign_inv = (k % 2 == 0) ? 1.0 : -1.0;
    cplx s = -polylog_neg(z, k);
    cplx qi = q_;
    const cplx zi = 1.0 / z;
    int i = 1;
    for (; i <= max_terms_; ++i) {
        double a = std::abs(qi);
        if (a == 0.0) break;
        cplx w1 = qi * z;
        cplx w2 = qi * zi;
        cplx t1 = polylog_neg(w1, k);
        cplx t2 = polylog_neg(w2, k);
        s += -t1 + sign_inv * t2;
        double mag = std::abs(t1) + std::abs(t2);
        if (std::abs(w1) < 0.5 && std::abs(w2) < 0.5 && mag * aq_ / (1.0 - aq_) < tol_ * 1e-2) break;
        qi *= q_;
    }
    if (i > max_terms_) throw TruncationError("theta: log-derivative series did not converge at z=" + fmt(z));
    return s;
}

cplx ThetaContext::logderiv(cplx z) const { return logderiv_d(z, 0); }

cplx ThetaContext::wp(cplx z) const { return -logderiv_d(z, 1) + wpc_; }

cplx ThetaContext::wp_d(cplx z, int k) const {
    if (k == 0) return wp(z);
    return -logderiv_d(z, k + 1);
}

cplx ThetaContext::theta_d(cplx z, int k) const {
    cplx th = theta(z);
    if (k == 0) return th;
    std::vector<cplx> dl(k);
    for (int j = 0; j < k; ++j) dl[j] = logderiv_d(z, j);
    // Y_{k+1} = sum_j C(k,j) Y_{k-j} D^j L, Y_0 = 1
    std::vector<cplx> y(k + 1);
    y[0] = 1.0;
    for (int m = 0; m < k; ++m) {
        cplx acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            acc += binom * y[m - j] * dl[j];
            binom = binom * (m - j) / (j + 1);
        }
        y[m + 1] = acc;
    }
    return th * y[k];
}

cplx ThetaContext::kernel(cplx s, cplx x) const {
    pole_guard(s);
    pole_guard(x);
    return theta(s * x) / (theta(s) * theta(x));
}

cplx ThetaContext::kernel_ds(cplx s, cplx x) const {
    pole_guard(s);
    pole_guard(x);
    cplx k = theta(s * x) / (theta(s) * theta(x));
    return k * (logderiv(s * x) - logderiv(s));
}

} // namespace hitchin
