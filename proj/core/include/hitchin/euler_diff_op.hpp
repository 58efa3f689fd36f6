#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hitchin/theta_expr.hpp"

namespace hitchin {

// Sum_d A_d(t) D^d with D = t d/dt and matrix-valued coefficients
// A_d(t) = sum over theta monomials of mono(t) * M. Coefficients are kept
// as polynomials in the theta generators so Euler derivatives stay exact.
class EulerDiffOp {
public:
    using Key = std::pair<int, ThetaMonomial>; // (D-degree, monomial)

    explicit EulerDiffOp(int dim = 0)
      : dim_(dim) {}

    static EulerDiffOp identity(int dim);
    // D * Id
    static EulerDiffOp derivative(int dim);
    // f(t) * m; f must have trivial denominator
    static EulerDiffOp multiplication(const ThetaExpr &f, const CMat &m);
    static EulerDiffOp constant(const CMat &m);

    void add(int degree, const ThetaExpr &f, const CMat &m);

    int dim() const { return dim_; }
    // -1 for the zero operator
    int degree() const;
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, CMat> &terms() const { return terms_; }

    EulerDiffOp &operator+=(const EulerDiffOp &o);
    EulerDiffOp &operator-=(const EulerDiffOp &o);
    EulerDiffOp operator+(const EulerDiffOp &o) const;
    EulerDiffOp operator-(const EulerDiffOp &o) const;
    EulerDiffOp operator-() const;
    EulerDiffOp scaled(cplx s) const;
    // composition by the Leibniz rule
    EulerDiffOp operator*(const EulerDiffOp &o) const;

    // A_0(t), ..., A_deg(t)
    std::vector<CMat> evaluate(const ThetaContext &ctx, cplx t) const;
    // top-degree coefficient at t
    CMat principal(const ThetaContext &ctx, cplx t) const;
    // operator applied to t^m v, divided by t^m: sum_d m^d A_d(t) v
    CVec apply_monomial(const ThetaContext &ctx, cplx t, int m, const CVec &v) const;
    // sum over terms of |mono(t)| * max|M| * |m|^d, a size reference for residuals
    double magnitude(const ThetaContext &ctx, cplx t, int m) const;

private:
    int dim_;
    std::map<Key, CMat> terms_;
    void add_raw(const Key &k, const CMat &m);
};

inline EulerDiffOp operator*(cplx s, const EulerDiffOp &a) { return a.scaled(s); }

EulerDiffOp commutator(const EulerDiffOp &a, const EulerDiffOp &b);

// Coefficients of sum_d A_d (D + c)^d, i.e. of t^{-c} o A o t^{c}
std::vector<CMat> shift_derivative(const std::vector<CMat> &coeffs, cplx c);

// max_d max|A_d - B_d|, padding the shorter list with zeros
double coefficient_distance(const std::vector<CMat> &a, const std::vector<CMat> &b);

cplx evaluate_monomial(const ThetaMonomial &m, const ThetaContext &ctx, cplx t);

} // namespace hitchin
