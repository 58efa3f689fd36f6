#pragma once

#include <vector>

#include "hitchin/common.hpp"

namespace hitchin {

// Multi-indices a in N^sites with |a| = total, lexicographically descending.
std::vector<std::vector<int>> multi_indices(int sites, int total);

// The family prod_i (z - z_i)^{-a_i}, |a| = d - 1, matched against principal
// parts of order 1..d-1 at each site. Overcomplete for sites >= 3, d >= 3, in
// which case coefficients are the minimum-norm solution.
class PencilBasis {
public:
    PencilBasis(std::vector<cplx> sites, int degree);

    int degree() const { return d_; }
    const std::vector<std::vector<int>> &keys() const { return keys_; }
    int key_index(const std::vector<int> &key) const; // -1 if absent
    int rows() const { return static_cast<int>(sites_.size()) * (d_ - 1); }
    int row(int site, int k) const { return site * (d_ - 1) + (k - 1); }
    // keys x rows map from principal parts to coefficients
    const CMat &projector() const { return pinv_; }
    double condition() const { return cond_; }

    // principal parts of prod_i (z - z_i)^{-m_i}, requires max m_i < d
    CVec principal_parts(const std::vector<int> &m) const;
    // coefficients of prod_i (z - z_i)^{-m_i} in the family
    CVec coefficients(const std::vector<int> &m) const { return pinv_ * principal_parts(m); }

private:
    std::vector<cplx> sites_;
    int d_;
    std::vector<std::vector<int>> keys_;
    CMat pinv_;
    double cond_ = 0.0;
};

} // namespace hitchin
