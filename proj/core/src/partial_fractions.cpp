#include "hitchin/partial_fractions.hpp"

#include <algorithm>
#include <functional>

namespace hitchin {

namespace {

// power series of prod_{j != i} (u - (z_j - z_i))^{-m_j} up to u^order
std::vector<cplx> cofactor_series(const std::vector<cplx> &sites, const std::vector<int> &m, int i, int order) {
    std::vector<cplx> g(order + 1, 0.0);
    g[0] = 1.0;
    for (std::size_t j = 0; j < sites.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        cplx dz = sites[j] - sites[i];
        std::vector<cplx> inv(order + 1);
        for (int k = 0; k <= order; ++k) inv[k] = -1.0 / std::pow(dz, k + 1);
        for (int p = 0; p < m[j]; ++p) {
            std::vector<cplx> r(order + 1, 0.0);
            for (int x = 0; x <= order; ++x)
                for (int y = 0; x + y <= order; ++y) r[x + y] += g[x] * inv[y];
            g.swap(r);
        }
    }
    return g;
}

} // namespace

std::vector<std::vector<int>> multi_indices(int sites, int total) {
    std::vector<std::vector<int>> out;
    if (sites <= 0) return out;
    std::vector<int> cur(sites, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == sites - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, total);
    return out;
}

PencilBasis::PencilBasis(std::vector<cplx> sites, int degree)
  : sites_(std::move(sites))
  , d_(degree)
  , keys_(multi_indices(static_cast<int>(sites_.size()), degree - 1)) {
    if (degree < 1) throw DomainError("PencilBasis: degree must be positive");
    CMat a = CMat::Zero(rows(), static_cast<int>(keys_.size()));
    for (std::size_t c = 0; c < keys_.size(); ++c) a.col(static_cast<int>(c)) = principal_parts(keys_[c]);
    if (rows() == 0) {
        pinv_ = CMat::Zero(static_cast<int>(keys_.size()), 0);
        cond_ = 1.0;
        return;
    }
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(a);
    pinv_ = cod.pseudoInverse();
    Eigen::JacobiSVD<CMat> svd(a);
    const auto &s = svd.singularValues();
    int rank = static_cast<int>(cod.rank());
    cond_ = rank > 0 ? s(0) / s(rank - 1) : 0.0;
}

int PencilBasis::key_index(const std::vector<int> &key) const {
    auto it = std::find(keys_.begin(), keys_.end(), key);
    return it == keys_.end() ? -1 : static_cast<int>(it - keys_.begin());
}

CVec PencilBasis::principal_parts(const std::vector<int> &m) const {
    if (m.size() != sites_.size()) throw DomainError("PencilBasis: multiplicity vector has wrong length");
    CVec pp = CVec::Zero(rows());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        int mi = m[i];
        if (mi == 0) continue;
        if (mi >= d_) throw DomainError("PencilBasis: pole order exceeds the family");
        auto g = cofactor_series(sites_, m, static_cast<int>(i), mi);
        for (int k = 1; k <= mi; ++k) pp(row(static_cast<int>(i), k)) = g[mi - k];
    }
    return pp;
}

} // namespace hitchin
