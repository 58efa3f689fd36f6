#pragma once

#include <string>

#include "hitchin/theta.hpp"

namespace hitchin {

enum class ThetaIdentity { A, B, C };

ThetaIdentity parse_theta_identity(const std::string &name);
std::string to_string(ThetaIdentity id);

// Evaluation point. For A the fourth slot is the second spectral shift t2,
// for C it is the common scale factor; B ignores it.
struct IdentityPoint {
    cplx z = 1.0;
    cplx w = 1.0;
    cplx t = 1.0;
    cplx extra = 1.0;
};

// |lhs - rhs| of the kernel identity, using k(s,x) = theta(sx)/(theta(s)theta(x)):
//  A: k(t,z/w) k(t t2,w) - k(1/t2,z/w) k(t t2,z) = k(t,z) k(t2,w)
//  B: (-D_t k(t,w) + L(z) k(t,w)) / theta'(1) = k(t,w/z) k(t,z) + L(z/w) k(t,w) / theta'(1)
//  C: F(z,w) = F(z c, w c) with F(z,w) = k(1/t,z) k(t,w) + k(1/t,z/w)(L(z) - L(w)) / theta'(1)
double check_theta_identity(const ThetaContext &ctx, ThetaIdentity id, const IdentityPoint &p);

// Variant of B with the opposite derivative sign and swapped kernel argument;
// kept to report how far it is from holding.
double theta_identity_b_variant(const ThetaContext &ctx, const IdentityPoint &p);

// |theta(qz) + theta(z)/z|
double functional_equation_residual(const ThetaContext &ctx, cplx z);
// |theta(1/z) - theta(qz)|
double inversion_residual(const ThetaContext &ctx, cplx z);
// |theta(1/z) + theta(qz)/z|
double inversion_variant_residual(const ThetaContext &ctx, cplx z);
// |L(qz) - L(z) + 1|
double logderiv_shift_residual(const ThetaContext &ctx, cplx z);
// |L(z) + L(1/z) - 1|
double logderiv_reflection_residual(const ThetaContext &ctx, cplx z);
// |wp(z) - wp(1/z)|
double wp_even_residual(const ThetaContext &ctx, cplx z);
// |theta'(1)^2 k(t,w) k(1/t,w) - (wp(w) - wp(t))|
double wp_kernel_product_residual(const ThetaContext &ctx, cplx t, cplx w);
// |(L(z/a) - L(z/b))^2 - [wp(z/a) + wp(z/b) + (1 - 2L(a/b))(L(z/a) - L(z/b)) + wp(a/b) - (L(a/b) - 1/2)^2]|
double logderiv_square_residual(const ThetaContext &ctx, cplx z, cplx a, cplx b);

} // namespace hitchin
