#pragma once

#include <array>
#include <string>
#include <vector>

#include "hitchin/elliptic_classical.hpp"
#include "hitchin/euler_diff_op.hpp"
#include "hitchin/lie.hpp"

namespace hitchin {

// Reduced GL_2 system: torus (t, 1/t), sl_2 spins of weights lambda_i at sites z_i,
// twist level k entering the momentum P = 2D + 2k L(t^2).
struct QuantumEllipticParams {
    ThetaContext ctx;
    int k = 0;
    std::vector<int> weights;
    std::vector<cplx> sites;

    int sites_count() const { return static_cast<int>(weights.size()); }
    void validate() const;
};

// Relative constants of the Hamiltonians
//   H_i = a1 P h_i + a2 sum_j h_i h_j (L_ij - L_ji) + a3 sum_j (e_i f_j phi(t^2, z_ij) + f_i e_j phi(t^-2, z_ij))
//   H_0 = b1 P^2 + b2 sum_{i!=j} h_i h_j (wp_ij - (L_ij - 1/2)^2) + b3 sum_i (e_i f_i + f_i e_i) wp(t^2)
//         + b4 sum_{i!=j} (e_i f_j (L(t^2) - L(t^2 z_ij)) phi(t^2, z_ij) + (t -> 1/t, e <-> f))
struct QuantumConstants {
    cplx a1, a2, a3, b1, b2, b3, b4;
    // pair term sum_{j<i} h_i h_j L_ij^2, Casimir term e_i f_i only, b4 term e_i f_j only
    bool literal = false;
    std::string name;
    // coefficients of theta'(1)^2 tr L(z)^2
    static QuantumConstants adjusted(const ThetaContext &ctx);
    static QuantumConstants printed();
};

enum class SpinGen { E, F, H };

struct SpinFactor {
    int site;
    SpinGen gen;
};

// c * P^power * f(t) * (ordered product of spin generators)
struct QuantumTerm {
    cplx c = 1.0;
    ThetaExpr f = ThetaExpr(1.0);
    int momentum_power = 0;
    std::vector<SpinFactor> spins;
};

class QuantumHamiltonian {
public:
    void add(cplx c, const ThetaExpr &f, int momentum_power, std::vector<SpinFactor> spins);
    const std::vector<QuantumTerm> &terms() const { return terms_; }

    EulerDiffOp realize(const TensorRepSpace &space, int k) const;
    // P -> 2(p_1 - p_2), e -> eta_12, f -> eta_21, h -> eta_11 - eta_22, f(t) at t^2 = t_1 / t_2
    cplx symbol(const EllipticPhasePoint &pt) const;

private:
    std::vector<QuantumTerm> terms_;
};

// momentum P = 2D + 2k L(t^2)
EulerDiffOp momentum_operator(int dim, int k);

// H_0 first, then H_1..H_N
std::vector<QuantumHamiltonian> quantum_hamiltonian_terms(const QuantumEllipticParams &params,
                                                          const QuantumConstants &c);
std::vector<EulerDiffOp> quantum_hamiltonians(const QuantumEllipticParams &params, const QuantumConstants &c);
std::vector<EulerDiffOp> quantum_hamiltonians(const QuantumEllipticParams &params);
// single-site form H_0 = P^2 - 2 e f wp(t^2), H_1 = e f
std::vector<QuantumHamiltonian> single_site_terms(const QuantumEllipticParams &params);

TensorRepSpace quantum_space(const QuantumEllipticParams &params);

// row-major 2x2 operator Lax matrix at spectral parameter z
using QuantumLax = std::array<EulerDiffOp, 4>;
QuantumLax lax_quantum(const QuantumEllipticParams &params, cplx z);
// classical-valued symbol of each entry at an n = 2 point
CMat lax_quantum_symbol(const QuantumEllipticParams &params, cplx z, const EllipticPhasePoint &pt);

struct CommutatorRow {
    int a = 0, b = 0; // Hamiltonian indices, 0 = H_0
    cplx t;
    int m = 0;
    double residual = 0.0;
    double scale = 0.0;
};

struct ReducedCheck {
    std::vector<CommutatorRow> rows;
    double max_residual = 0.0;
    double max_scale = 0.0;
    CommutatorRow worst;
    bool passes(double tol) const { return max_residual <= tol * std::max(1.0, max_scale); }
};

// [H_a, H_b] applied to t^m v for v in the weight-zero subspace
ReducedCheck check_reduced_commutativity(const QuantumEllipticParams &params, const std::vector<EulerDiffOp> &ops,
                                         const std::vector<cplx> &ts, const std::vector<int> &ms);

struct SymbolCheck {
    double residual = 0.0; // max |symbol(H) - H_classical|
    double scale = 0.0;
};
// symbols against the classical n = 2 Hamiltonians at random reduced points
SymbolCheck check_symbols(const QuantumEllipticParams &params, int points, std::uint64_t seed);

// Reduced point: t = (s, 1/s), p = (p, -p), traceless residues
EllipticPhasePoint random_reduced_point(const ThetaContext &ctx, const std::vector<cplx> &sites, Rng &rng);

// Transposition: t -> 1/t with the Weyl conjugation on spins; compares with the
// index-swapped Lax matrix. Coefficient distance over all entries and D-degrees.
double weyl_invariance_residual(const QuantumEllipticParams &params, cplx z, cplx t);
// Lattice generator alpha in {0, 1}: t_alpha -> q t_alpha with spins conjugated by
// diag(z_i) in slot alpha; compares with Ad(diag(1..z..1)) L(z).
double lattice_invariance_residual(const QuantumEllipticParams &params, int alpha, cplx z, cplx t);
// L(qz) against Ad(diag(t, 1/t)) L(z) - (sum_i e^(i))_diag / theta'(1)
double quantum_quasi_periodicity_residual(const QuantumEllipticParams &params, cplx z, cplx t);

// random t with t^2 clear of the pole lattice
cplx random_torus_point(const ThetaContext &ctx, Rng &rng);

} // namespace hitchin
