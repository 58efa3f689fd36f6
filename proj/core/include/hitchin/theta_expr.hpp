#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hitchin/theta.hpp"

namespace hitchin {

// Generator of the expression ring, always evaluated at c * x^m.
struct ThetaGen {
    enum class Kind : int { Theta = 0, LogDeriv = 1, Wp = 2 };
    Kind kind = Kind::Theta;
    int order = 0; // Euler-derivative order for LogDeriv
    cplx c = 1.0;
    int m = 1;

    cplx argument(cplx x) const;
    cplx evaluate(const ThetaContext &ctx, cplx x) const;
    std::string str() const;
};

bool operator<(const ThetaGen &a, const ThetaGen &b);
bool operator==(const ThetaGen &a, const ThetaGen &b);

// x^xpow * prod g^e, factors sorted by generator with nonzero exponents.
struct ThetaMonomial {
    int xpow = 0;
    std::vector<std::pair<ThetaGen, int>> factors;

    ThetaMonomial operator*(const ThetaMonomial &o) const;
    ThetaMonomial inverse() const;
};

bool operator<(const ThetaMonomial &a, const ThetaMonomial &b);
bool operator==(const ThetaMonomial &a, const ThetaMonomial &b);

// Sparse Laurent polynomial in the generators.
class ThetaPoly {
public:
    ThetaPoly() = default;
    ThetaPoly(cplx c);
    static ThetaPoly monomial(const ThetaMonomial &m, cplx c = 1.0);

    ThetaPoly &operator+=(const ThetaPoly &o);
    ThetaPoly &operator-=(const ThetaPoly &o);
    ThetaPoly operator+(const ThetaPoly &o) const;
    ThetaPoly operator-(const ThetaPoly &o) const;
    ThetaPoly operator*(const ThetaPoly &o) const;
    ThetaPoly operator-() const;
    ThetaPoly scaled(cplx s) const;

    ThetaPoly euler_derivative() const;
    cplx evaluate(const ThetaContext &ctx, cplx x) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_single_term() const { return terms_.size() == 1; }
    bool is_one() const;
    std::size_t size() const { return terms_.size(); }
    const std::map<ThetaMonomial, cplx> &terms() const { return terms_; }
    std::string str() const;

    friend bool operator==(const ThetaPoly &a, const ThetaPoly &b) { return a.terms_ == b.terms_; }

private:
    std::map<ThetaMonomial, cplx> terms_;
    void add_term(const ThetaMonomial &m, cplx c);
};

// Quotient num/den of theta polynomials; den stays 1 unless a division by a
// multi-term polynomial occurred.
class ThetaExpr {
public:
    ThetaExpr() = default;
    ThetaExpr(cplx c)
      : num_(c) {}
    ThetaExpr(double c)
      : num_(cplx(c)) {}
    ThetaExpr(ThetaPoly num, ThetaPoly den = ThetaPoly(1.0));

    static ThetaExpr constant(cplx c) { return ThetaExpr(c); }
    static ThetaExpr var(int power = 1);                         // x^power
    static ThetaExpr theta(cplx c = 1.0, int m = 1);             // theta(c x^m)
    static ThetaExpr logderiv(cplx c = 1.0, int m = 1, int k = 0); // D^k L(c x^m)
    static ThetaExpr wp(cplx c = 1.0, int m = 1);                // wp(ln(c x^m))
    static ThetaExpr kernel(cplx cs, int ms, cplx cx, int mx);   // phi(cs x^ms, cx x^mx)

    ThetaExpr operator+(const ThetaExpr &o) const;
    ThetaExpr operator-(const ThetaExpr &o) const;
    ThetaExpr operator*(const ThetaExpr &o) const;
    ThetaExpr operator/(const ThetaExpr &o) const;
    ThetaExpr operator-() const;
    ThetaExpr &operator+=(const ThetaExpr &o) { return *this = *this + o; }
    ThetaExpr &operator*=(const ThetaExpr &o) { return *this = *this * o; }

    // D = x d/dx
    ThetaExpr euler_derivative() const;
    ThetaExpr euler_derivative(int k) const;

    cplx evaluate(const ThetaContext &ctx, cplx x) const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }
    const ThetaPoly &numerator() const { return num_; }
    const ThetaPoly &denominator() const { return den_; }
    std::size_t size() const { return num_.size() + den_.size(); }
    std::string str() const;

    friend bool operator==(const ThetaExpr &a, const ThetaExpr &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    ThetaPoly num_;
    ThetaPoly den_{cplx(1.0)};
    void normalize();
};

inline ThetaExpr operator*(cplx s, const ThetaExpr &e) { return ThetaExpr(s) * e; }
inline ThetaExpr operator*(double s, const ThetaExpr &e) { return ThetaExpr(cplx(s)) * e; }

} // namespace hitchin
