#include "hitchin/theta_expr.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace hitchin {

namespace {

auto gen_key(const ThetaGen &g) {
    return std::make_tuple(static_cast<int>(g.kind), g.order, g.m, g.c.real(), g.c.imag());
}

std::string num_str(cplx c) {
    std::ostringstream os;
    os.precision(6);
    if (c.imag() == 0.0)
        os << c.real();
    else
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "j)";
    return os.str();
}

} // namespace

cplx ThetaGen::argument(cplx x) const {
    if (m == 0) return c;
    return c * std::pow(x, m);
}

cplx ThetaGen::evaluate(const ThetaContext &ctx, cplx x) const {
    cplx a = argument(x);
    switch (kind) {
    case Kind::Theta:
        return ctx.theta(a);
    case Kind::LogDeriv:
        return ctx.logderiv_d(a, order);
    case Kind::Wp:
        return ctx.wp(a);
    }
    return 0.0;
}

std::string ThetaGen::str() const {
    std::string arg = num_str(c) + "*x^" + std::to_string(m);
    switch (kind) {
    case Kind::Theta:
        return "th(" + arg + ")";
    case Kind::LogDeriv:
        return "D" + std::to_string(order) + "L(" + arg + ")";
    case Kind::Wp:
        return "wp(" + arg + ")";
    }
    return "?";
}

bool operator<(const ThetaGen &a, const ThetaGen &b) { return gen_key(a) < gen_key(b); }
bool operator==(const ThetaGen &a, const ThetaGen &b) { return gen_key(a) == gen_key(b); }

ThetaMonomial ThetaMonomial::operator*(const ThetaMonomial &o) const {
    ThetaMonomial r;
    r.xpow = xpow + o.xpow;
    auto i = factors.begin();
    auto j = o.factors.begin();
    while (i != factors.end() || j != o.factors.end()) {
        if (j == o.factors.end() || (i != factors.end() && i->first < j->first)) {
            r.factors.push_back(*i++);
        } else if (i == factors.end() || j->first < i->first) {
            r.factors.push_back(*j++);
        } else {
            int e = i->second + j->second;
            if (e != 0) r.factors.emplace_back(i->first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

ThetaMonomial ThetaMonomial::inverse() const {
    ThetaMonomial r;
    r.xpow = -xpow;
    r.factors = factors;
    for (auto &f : r.factors) f.second = -f.second;
    return r;
}

bool operator<(const ThetaMonomial &a, const ThetaMonomial &b) {
    if (a.xpow != b.xpow) return a.xpow < b.xpow;
    return std::lexicographical_compare(
        a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
        [](const auto &u, const auto &v) {
            if (u.first < v.first) return true;
            if (v.first < u.first) return false;
            return u.second < v.second;
        });
}

bool operator==(const ThetaMonomial &a, const ThetaMonomial &b) {
    return a.xpow == b.xpow && a.factors == b.factors;
}

// ---------------------------------------------------------------------------

ThetaPoly::ThetaPoly(cplx c) {
    if (c != cplx(0.0)) terms_.emplace(ThetaMonomial{}, c);
}

ThetaPoly ThetaPoly::monomial(const ThetaMonomial &m, cplx c) {
    ThetaPoly p;
    p.add_term(m, c);
    return p;
}

void ThetaPoly::add_term(const ThetaMonomial &m, cplx c) {
    if (c == cplx(0.0)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
}

ThetaPoly &ThetaPoly::operator+=(const ThetaPoly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
}

ThetaPoly &ThetaPoly::operator-=(const ThetaPoly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
}

ThetaPoly ThetaPoly::operator+(const ThetaPoly &o) const {
    ThetaPoly r = *this;
    return r += o;
}

ThetaPoly ThetaPoly::operator-(const ThetaPoly &o) const {
    ThetaPoly r = *this;
    return r -= o;
}

ThetaPoly ThetaPoly::operator*(const ThetaPoly &o) const {
    ThetaPoly r;
    for (const auto &[m1, c1] : terms_)
        for (const auto &[m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

ThetaPoly ThetaPoly::operator-() const { return scaled(-1.0); }

ThetaPoly ThetaPoly::scaled(cplx s) const {
    ThetaPoly r;
    if (s == cplx(0.0)) return r;
    for (const auto &[m, c] : terms_) r.terms_.emplace(m, c * s);
    return r;
}

bool ThetaPoly::is_one() const {
    if (terms_.size() != 1) return false;
    const auto &[m, c] = *terms_.begin();
    return m.xpow == 0 && m.factors.empty() && c == cplx(1.0);
}

ThetaPoly ThetaPoly::euler_derivative() const {
    ThetaPoly r;
    for (const auto &[mono, c] : terms_) {
        if (mono.xpow != 0) r.add_term(mono, c * static_cast<double>(mono.xpow));
        for (const auto &[g, e] : mono.factors) {
            if (g.m == 0) continue;
            // D g^e = e g^{e-1} D g, and D g = m * (next generator) [* g for theta]
            ThetaMonomial base = mono;
            ThetaGen next = g;
            cplx w = c * static_cast<double>(e) * static_cast<double>(g.m);
            switch (g.kind) {
            case ThetaGen::Kind::Theta:
                next.kind = ThetaGen::Kind::LogDeriv;
                next.order = 0;
                break;
            case ThetaGen::Kind::LogDeriv:
                if (g.order + 1 > ThetaContext::max_derivative_order)
                    throw DomainError("theta expression: derivative order exceeds supported maximum");
                next.order = g.order + 1;
                base = base * ThetaMonomial{0, {{g, -1}}};
                break;
            case ThetaGen::Kind::Wp:
                next.kind = ThetaGen::Kind::LogDeriv;
                next.order = 2;
                w = -w;
                base = base * ThetaMonomial{0, {{g, -1}}};
                break;
            }
            r.add_term(base * ThetaMonomial{0, {{next, 1}}}, w);
        }
    }
    return r;
}

cplx ThetaPoly::evaluate(const ThetaContext &ctx, cplx x) const {
    cplx s = 0.0;
    for (const auto &[mono, c] : terms_) {
        cplx v = c;
        if (mono.xpow != 0) v *= std::pow(x, mono.xpow);
        for (const auto &[g, e] : mono.factors) {
            cplx gv = g.evaluate(ctx, x);
            v *= e == 1 ? gv : std::pow(gv, e);
        }
        s += v;
    }
    return s;
}

std::string ThetaPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[mono, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << num_str(c);
        if (mono.xpow != 0) os << "*x^" << mono.xpow;
        for (const auto &[g, e] : mono.factors) {
            os << "*" << g.str();
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

ThetaExpr::ThetaExpr(ThetaPoly num, ThetaPoly den)
  : num_(std::move(num))
  , den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("theta expression: zero denominator");
    normalize();
}

void ThetaExpr::normalize() {
    if (num_.is_zero()) {
        den_ = ThetaPoly(1.0);
        return;
    }
    if (den_.is_single_term() && !den_.is_one()) {
        const auto &[m, c] = *den_.terms().begin();
        num_ = num_ * ThetaPoly::monomial(m.inverse(), 1.0 / c);
        den_ = ThetaPoly(1.0);
    }
}

ThetaExpr ThetaExpr::var(int power) { return ThetaExpr(ThetaPoly::monomial(ThetaMonomial{power, {}})); }

ThetaExpr ThetaExpr::theta(cplx c, int m) {
    ThetaGen g{ThetaGen::Kind::Theta, 0, c, m};
    return ThetaExpr(ThetaPoly::monomial(ThetaMonomial{0, {{g, 1}}}));
}

ThetaExpr ThetaExpr::logderiv(cplx c, int m, int k) {
    ThetaGen g{ThetaGen::Kind::LogDeriv, k, c, m};
    return ThetaExpr(ThetaPoly::monomial(ThetaMonomial{0, {{g, 1}}}));
}

ThetaExpr ThetaExpr::wp(cplx c, int m) {
    ThetaGen g{ThetaGen::Kind::Wp, 0, c, m};
    return ThetaExpr(ThetaPoly::monomial(ThetaMonomial{0, {{g, 1}}}));
}

ThetaExpr ThetaExpr::kernel(cplx cs, int ms, cplx cx, int mx) {
    return theta(cs * cx, ms + mx) / (theta(cs, ms) * theta(cx, mx));
}

ThetaExpr ThetaExpr::operator+(const ThetaExpr &o) const {
    if (den_ == o.den_) return ThetaExpr(num_ + o.num_, den_);
    return ThetaExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ThetaExpr ThetaExpr::operator-(const ThetaExpr &o) const { return *this + (-o); }

ThetaExpr ThetaExpr::operator*(const ThetaExpr &o) const {
    return ThetaExpr(num_ * o.num_, den_ * o.den_);
}

ThetaExpr ThetaExpr::operator/(const ThetaExpr &o) const {
    if (o.is_zero()) throw DomainError("theta expression: division by zero");
    return ThetaExpr(num_ * o.den_, den_ * o.num_);
}

ThetaExpr ThetaExpr::operator-() const {
    ThetaExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

ThetaExpr ThetaExpr::euler_derivative() const {
    if (den_.is_one()) return ThetaExpr(num_.euler_derivative());
    return ThetaExpr(num_.euler_derivative() * den_ - num_ * den_.euler_derivative(), den_ * den_);
}

ThetaExpr ThetaExpr::euler_derivative(int k) const {
    ThetaExpr r = *this;
    for (int i = 0; i < k; ++i) r = r.euler_derivative();
    return r;
}

cplx ThetaExpr::evaluate(const ThetaContext &ctx, cplx x) const {
    cplx n = num_.evaluate(ctx, x);
    if (den_.is_one()) return n;
    return n / den_.evaluate(ctx, x);
}

std::string ThetaExpr::str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

} // namespace hitchin
