#include "hitchin/theta_identities.hpp"

namespace hitchin {

ThetaIdentity parse_theta_identity(const std::string &name) {
    if (name == "A" || name == "a") return ThetaIdentity::A;
    if (name == "B" || name == "b") return ThetaIdentity::B;
    if (name == "C" || name == "c") return ThetaIdentity::C;
    throw DomainError("unknown theta identity '" + name + "' (expected A, B or C)");
}

std::string to_string(ThetaIdentity id) {
    switch (id) {
    case ThetaIdentity::A:
        return "A";
    case ThetaIdentity::B:
        return "B";
    case ThetaIdentity::C:
        return "C";
    }
    return "?";
}

double check_theta_identity(const ThetaContext &ctx, ThetaIdentity id, const IdentityPoint &p) {
    const cplx tp = ctx.theta_prime_one();
    auto k = [&](cplx s, cplx x) { return ctx.kernel(s, x); };
    switch (id) {
    case ThetaIdentity::A: {
        cplx t2 = p.extra;
        cplx lhs = k(p.t, p.z / p.w) * k(p.t * t2, p.w) - k(1.0 / t2, p.z / p.w) * k(p.t * t2, p.z);
        cplx rhs = k(p.t, p.z) * k(t2, p.w);
        return std::abs(lhs - rhs);
    }
    case ThetaIdentity::B: {
        cplx kw = k(p.t, p.w);
        cplx lhs = (-ctx.kernel_ds(p.t, p.w) + ctx.logderiv(p.z) * kw) / tp;
        cplx rhs = k(p.t, p.w / p.z) * k(p.t, p.z) + ctx.logderiv(p.z / p.w) * kw / tp;
        return std::abs(lhs - rhs);
    }
    case ThetaIdentity::C: {
        auto f = [&](cplx z, cplx w) {
            return k(1.0 / p.t, z) * k(p.t, w) + k(1.0 / p.t, z / w) * (ctx.logderiv(z) - ctx.logderiv(w)) / tp;
        };
        return std::abs(f(p.z, p.w) - f(p.z * p.extra, p.w * p.extra));
    }
    }
    return 0.0;
}

double theta_identity_b_variant(const ThetaContext &ctx, const IdentityPoint &p) {
    const cplx tp = ctx.theta_prime_one();
    cplx kw = ctx.kernel(p.t, p.w);
    cplx lhs = (ctx.kernel_ds(p.t, p.w) + ctx.logderiv(p.z) * kw) / tp;
    cplx rhs = -ctx.kernel(p.t, p.z / p.w) * ctx.kernel(p.t, p.z) + ctx.logderiv(p.z / p.w) * kw / tp;
    return std::abs(lhs - rhs);
}

double functional_equation_residual(const ThetaContext &ctx, cplx z) {
    return std::abs(ctx.theta(ctx.q() * z) + ctx.theta(z) / z);
}

double inversion_residual(const ThetaContext &ctx, cplx z) {
    return std::abs(ctx.theta(1.0 / z) - ctx.theta(ctx.q() * z));
}

double inversion_variant_residual(const ThetaContext &ctx, cplx z) {
    return std::abs(ctx.theta(1.0 / z) + ctx.theta(ctx.q() * z) / z);
}

double logderiv_shift_residual(const ThetaContext &ctx, cplx z) {
    return std::abs(ctx.logderiv(ctx.q() * z) - ctx.logderiv(z) + 1.0);
}

double logderiv_reflection_residual(const ThetaContext &ctx, cplx z) {
    return std::abs(ctx.logderiv(z) + ctx.logderiv(1.0 / z) - 1.0);
}

double wp_even_residual(const ThetaContext &ctx, cplx z) { return std::abs(ctx.wp(z) - ctx.wp(1.0 / z)); }

double wp_kernel_product_residual(const ThetaContext &ctx, cplx t, cplx w) {
    cplx tp = ctx.theta_prime_one();
    cplx lhs = tp * tp * ctx.kernel(t, w) * ctx.kernel(1.0 / t, w);
    return std::abs(lhs - (ctx.wp(w) - ctx.wp(t)));
}

double logderiv_square_residual(const ThetaContext &ctx, cplx z, cplx a, cplx b) {
    cplx la = ctx.logderiv(z / a);
    cplx lb = ctx.logderiv(z / b);
    cplx lab = ctx.logderiv(a / b);
    cplx d = la - lb;
    cplx rhs = ctx.wp(z / a) + ctx.wp(z / b) + (1.0 - 2.0 * lab) * d + ctx.wp(a / b) - (lab - 0.5) * (lab - 0.5);
    return std::abs(d * d - rhs);
}

} // namespace hitchin
