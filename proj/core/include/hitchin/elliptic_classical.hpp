#pragma once

#include <vector>

#include "hitchin/random.hpp"
#include "hitchin/theta.hpp"
#include "hitchin/theta_expr.hpp"

namespace hitchin {

// Momenta p, torus coordinates t, residues eta at sites z_i, modulus q.
class EllipticPhasePoint {
public:
    EllipticPhasePoint(ThetaContext ctx, CVec p, CVec t, std::vector<CMat> eta, std::vector<cplx> sites);

    const ThetaContext &ctx() const { return ctx_; }
    int n() const { return static_cast<int>(p_.size()); }
    int sites_count() const { return static_cast<int>(eta_.size()); }
    const CVec &p() const { return p_; }
    const CVec &t() const { return t_; }
    const std::vector<CMat> &eta() const { return eta_; }
    const CMat &eta(int i) const { return eta_.at(i); }
    const std::vector<cplx> &sites() const { return sites_; }
    cplx site(int i) const { return sites_.at(i); }

    // diagonal of sum_i eta_i
    CVec charges() const;
    double scale() const;

    EllipticPhasePoint with(CVec p, CVec t, std::vector<CMat> eta) const;

private:
    ThetaContext ctx_;
    CVec p_, t_;
    std::vector<CMat> eta_;
    std::vector<cplx> sites_;
};

CMat lax_elliptic(const EllipticPhasePoint &pt, cplx z);

// n^2 x n^2 matrices in kron(e_ab, e_cd) layout, t = torus coordinates
CMat r_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t);
CMat r21_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t);
CMat rho_matrix(const ThetaContext &ctx, cplx z, cplx w, const CVec &t);
CMat swap_matrix(int n);

// Gradient of an observable: d/dp, t d/dt, and entry-gradients in each eta_i.
struct EllGradient {
    CVec dp, dt;
    std::vector<CMat> deta;
};

struct BracketValue {
    cplx value = 0.0;
    double magnitude = 0.0; // sum of the absolute values of the summands
    double relative() const { return magnitude > 0 ? std::abs(value) / magnitude : std::abs(value); }
};

// {p_a, t_b} = delta_ab t_b, Kostant-Kirillov on each eta_i, no cross terms
BracketValue elliptic_bracket(const EllGradient &f, const EllGradient &g, const EllipticPhasePoint &pt);

struct EllCoord {
    enum class Kind { None, P, Eta };
    Kind kind = Kind::None;
    int site = 0, a = 0, b = 0;
    static EllCoord none() { return {}; }
    static EllCoord p(int a) { return {Kind::P, 0, a, a}; }
    static EllCoord eta(int i, int a, int b) { return {Kind::Eta, i, a, b}; }
};

// sum of c * f(t_num / t_den) * u * v; f constant when num < 0
class EllObservable {
public:
    void add(cplx c, const ThetaExpr &f, int num, int den, EllCoord u, EllCoord v = EllCoord::none());
    void add_constant(cplx c, EllCoord u, EllCoord v = EllCoord::none());

    cplx value(const EllipticPhasePoint &pt) const;
    EllGradient gradient(const EllipticPhasePoint &pt) const;
    std::size_t size() const { return terms_.size(); }

private:
    struct Term {
        cplx c;
        ThetaExpr f, df;
        bool constant;
        int num, den;
        EllCoord u, v;
    };
    std::vector<Term> terms_;
};

EllObservable lax_entry_observable(const ThetaContext &ctx, const std::vector<cplx> &sites, int n, cplx z, int a, int b);

// {xi(z)_ab, xi(w)_cd} at kron(e_ab, e_cd), computed from coordinate brackets
CMat lax_bracket_tensor(const EllipticPhasePoint &pt, cplx z, cplx w);
// [r12, xi(z) (x) 1] - [r21, 1 (x) xi(w)] + rho (C (x) 1 - 1 (x) C)
CMat lax_bracket_rhs(const EllipticPhasePoint &pt, cplx z, cplx w);

struct RMatrixCheck {
    double residual = 0.0; // max entry of lhs - rhs
    double scale = 0.0;    // max entry of lhs
    double relative() const { return scale > 0 ? residual / scale : residual; }
};
RMatrixCheck verify_dynamical_rmatrix(const EllipticPhasePoint &pt, cplx z, cplx w);

// max entry of xi(qz) - (Ad(diag t) xi(z) - C / theta'(1))
double quasi_periodicity_residual(const EllipticPhasePoint &pt, cplx z);

struct EllipticHamiltonians {
    cplx h0;
    std::vector<cplx> h;
    CVec charges;
};

// H_0 first, then H_1..H_N, as observables over the sites of the point
std::vector<EllObservable> hamiltonian_observables(const ThetaContext &ctx, int n, const std::vector<cplx> &sites);
EllipticHamiltonians hamiltonians_elliptic(const EllipticPhasePoint &pt);

struct TraceExpansion {
    double residual = 0.0;  // theta'(1)^2 tr xi^2 - full expansion
    double scale = 0.0;
    double short_residual = 0.0; // tr xi^2 against H_0 + sum H_i L_i + sum K_i L_i^2 only
    double relative() const { return scale > 0 ? residual / scale : residual; }
};
// theta'(1)^2 tr xi(z)^2 = H_0 + sum_i H_i L_i + sum_i K_i L_i^2 + sum_i (tr eta_i^2 - K_i) wp_i
// with L_i = L(z/z_i), wp_i = wp(z/z_i), K_i = sum_a (eta_i)_aa C_a
TraceExpansion trace_expansion(const EllipticPhasePoint &pt, cplx z);

struct EllipticSampleOptions {
    bool constrained = false; // impose C = 0 on the last site
    double t_spread = 0.35;
    double min_ratio_gap = 0.15;
};

EllipticPhasePoint random_elliptic_point(const ThetaContext &ctx, int n, int sites, Rng &rng,
                                         const EllipticSampleOptions &opt = {});
// spectral parameter avoiding z_i q^Z and (if given) other points
cplx random_spectral_point(const EllipticPhasePoint &pt, Rng &rng, const std::vector<cplx> &avoid = {});

// q -> 0 family with fixed t (|t| = 1), sites and residues.
struct DegenerationRow {
    double q = 0.0;
    double lax_gap = 0.0;     // max |xi_q(z) - xi_0(z)| over test points
    double max_bracket = 0.0; // max relative bracket among H_0..H_N on C = 0
};
std::vector<DegenerationRow> degeneration_family(int n, int sites, std::uint64_t seed, const std::vector<double> &qs);

} // namespace hitchin
