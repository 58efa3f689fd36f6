#pragma once

#include "hitchin/common.hpp"

namespace hitchin {

// Multiplicative theta function of modulus q,
//   theta(z) = prod_{i>=0} (1 - q^i z) prod_{i>=1} (1 - q^i / z),
// with its logarithmic Euler derivative and the Weierstrass function.
// Immutable after construction; all members are safe to call concurrently.
class ThetaContext {
public:
    explicit ThetaContext(cplx q, double tol = 1e-14, int max_terms = 10000,
                          double pole_guard = 1e-8);

    cplx q() const { return q_; }
    double tol() const { return tol_; }
    int max_terms() const { return max_terms_; }
    double pole_guard_distance() const { return guard_; }

    cplx theta(cplx z) const;

    // L(z) = z theta'(z) / theta(z)
    cplx logderiv(cplx z) const;
    // D^k L(z), D = z d/dz. k = 0 is L itself.
    cplx logderiv_d(cplx z, int k) const;

    // wp(ln z) = -D L(z) + c(q); no constant Laurent term at z = 1.
    cplx wp(cplx z) const;
    // D^k wp(ln z)
    cplx wp_d(cplx z, int k) const;

    // D^k theta(z) via the product rule on theta * L
    cplx theta_d(cplx z, int k) const;

    // theta(s x) / (theta(s) theta(x))
    cplx kernel(cplx s, cplx x) const;
    // D_s of kernel(s, x)
    cplx kernel_ds(cplx s, cplx x) const;

    // theta'(1) = -prod_{i>=1} (1 - q^i)^2
    cplx theta_prime_one() const { return tp1_; }
    // constant making wp(e^tau) - 1/tau^2 -> 0
    cplx wp_constant() const { return wpc_; }

    // Throws PoleError if z lies within the guard distance of q^Z.
    void pole_guard(cplx z) const;
    bool near_pole(cplx z) const;

    static constexpr int max_derivative_order = 28;

private:
    cplx q_;
    double tol_;
    int max_terms_;
    double guard_;
    double aq_;
    cplx tp1_;
    cplx wpc_;

    cplx polylog_neg(cplx w, int k) const;
};

} // namespace hitchin
