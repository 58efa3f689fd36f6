#pragma once

#include <vector>

#include "hitchin/common.hpp"

namespace hitchin {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

template <class M> struct Sl2Triple {
    M e, f, h;
};

// Highest-weight irrep V_lambda in the basis v_k = f^k v_0:
// h v_k = (lambda - 2k) v_k, f v_k = v_{k+1}, e v_k = k (lambda - k + 1) v_{k-1}.
Sl2Triple<IMat> sl2_irrep_int(int lambda);
Sl2Triple<CMat> sl2_irrep(int lambda);

// gl_n (or sl_n) with the trace form <a,b> = tr(ab) of the defining representation.
class MatrixAlgebra {
public:
    explicit MatrixAlgebra(int n, bool with_identity = false);

    int n() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    bool has_identity() const { return with_identity_; }

    // Orthonormal for tr(ab): symmetric and antisymmetric off-diagonal pairs,
    // normalized traceless diagonals, then I/sqrt(n) if requested.
    const std::vector<CMat> &basis() const { return basis_; }

    CMat unit(int a, int b) const { return hitchin::unit(n_, a, b); }
    static cplx form(const CMat &a, const CMat &b) { return (a * b).trace(); }

    // sum_a e_a (x) e_a as an n^2 x n^2 matrix
    CMat casimir_tensor() const;
    // swap operator on C^n (x) C^n
    static CMat permutation(int n);

private:
    int n_;
    bool with_identity_;
    std::vector<CMat> basis_;
};

// Tensor product of sl_2 irreps or of copies of C^n, with lexicographic
// (first factor most significant) product basis.
class TensorRepSpace {
public:
    static TensorRepSpace sl2(std::vector<int> weights);
    static TensorRepSpace defining(int n, int sites);

    bool is_sl2() const { return sl2_; }
    int sites() const { return static_cast<int>(dims_.size()); }
    int dim() const { return total_; }
    int factor_dim(int i) const { return dims_.at(i); }
    // size of the matrices acted on: 2 for sl_2 factors, n otherwise
    int algebra_rank() const { return rank_; }
    const std::vector<int> &weights() const { return weights_; }

    // Id (x) ... (x) x (x) ... (x) Id with x in slot i (0-based)
    CMat site_operator(const CMat &x, int i) const;
    IMat site_operator(const IMat &x, int i) const;

    // Image of a gl element (algebra_rank square) in factor i.
    // For V_lambda: x12 e + x21 f + x11 (lambda + h)/2 + x22 (lambda - h)/2.
    CMat factor_rep(const CMat &x, int i) const;
    CMat site_rep(const CMat &x, int i) const { return site_operator(factor_rep(x, i), i); }
    // sum_i site_rep(x, i)
    CMat total(const CMat &x) const;

    // sl_2 only
    const Sl2Triple<IMat> &factor_triple(int i) const;
    CMat total_h() const;
    std::vector<int> weight_zero_indices() const;
    CMat weight_zero_projector() const;
    // orthonormal basis of the weight-zero subspace as columns
    CMat weight_zero_basis() const;

private:
    TensorRepSpace() = default;
    bool sl2_ = true;
    int rank_ = 2;
    int total_ = 1;
    std::vector<int> weights_;
    std::vector<int> dims_;
    std::vector<Sl2Triple<IMat>> triples_;
    void check_site(int i) const;
};

} // namespace hitchin
