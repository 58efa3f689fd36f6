#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hitchin/lie.hpp"

namespace hitchin {

using Rational = boost::multiprecision::cpp_rational;

// Dense matrix over exact rationals.
class QMat {
public:
    QMat() = default;
    QMat(int rows, int cols)
      : rows_(rows)
      , cols_(cols)
      , data_(static_cast<std::size_t>(rows) * cols) {}
    static QMat identity(int n);
    static QMat from_int(const IMat &m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational &operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rational &operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    QMat operator+(const QMat &o) const;
    QMat operator-(const QMat &o) const;
    QMat operator*(const QMat &o) const;
    QMat operator*(const Rational &s) const;
    QMat &operator+=(const QMat &o);
    bool is_zero() const;
    CMat to_complex() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

QMat commutator(const QMat &a, const QMat &b);

class GaudinSystem {
public:
    GaudinSystem(TensorRepSpace space, std::vector<cplx> sites);

    const TensorRepSpace &space() const { return space_; }
    const MatrixAlgebra &algebra() const { return algebra_; }
    const std::vector<cplx> &sites() const { return sites_; }
    int sites_count() const { return static_cast<int>(sites_.size()); }

    // sum_a e_a^(i) e_a^(j)
    CMat omega(int i, int j) const;
    // sum_a (e_a^(i))^2, central on each irreducible factor
    CMat casimir(int i) const;
    // sum_a e_a(zeta)^2 with e_a(zeta) = sum_i e_a^(i) / (zeta - z_i)
    CMat quadratic(cplx zeta) const;
    // H_{2,i} = sum_{j != i} 2 omega_ij / (z_i - z_j)
    std::vector<CMat> residues() const;

    // exact counterparts on rational sites
    QMat omega_exact(int i, int j) const;
    std::vector<QMat> residues_exact(const std::vector<Rational> &sites) const;

private:
    TensorRepSpace space_;
    std::vector<cplx> sites_;
    MatrixAlgebra algebra_;
    std::vector<std::vector<CMat>> site_basis_; // [a][i]
};

struct SvFactor {
    CMat generator; // element of gl (algebra_rank square)
    int depth = 1;
};

struct SvTerm {
    cplx coefficient = 1.0;
    std::vector<SvFactor> factors;
};

using SingularVectorSpec = std::vector<SvTerm>;

// sum_a (e_a, depth 1)(e_a, depth 1)
SingularVectorSpec quadratic_spec(const MatrixAlgebra &alg);

// Each factor (X, l) acts as sum_i (-1)^{l-1} X^(i) / (u - z_i)^l; factors multiply left to right.
CMat ffr_operator(const GaudinSystem &sys, const SingularVectorSpec &spec, cplx u);

// s_1..s_{p_max}
std::vector<Rational> s_polynomials(int n, int p_max);
// max |(p+2) s_{p+2} - (n-p) s_p + 2(p+1) s_{p+1}| over p = 2..p_max-2 (exact)
Rational s_recursion_residual(int n, int p_max);

struct EigenH {
    CMat h;                    // diag(lambda_1..lambda_n)
    std::vector<cplx> roots;   // same, in order
    double residual = 0.0;     // max |poly(lambda)|
    double condition = 0.0;    // eigenvector condition number of the companion matrix
};

// roots of lambda^n - s_1 lambda^{n-1} + s_2 lambda^{n-2} - ... ordered by (Re, Im)
EigenH eigen_h(int n);

struct HaarSampler {
    enum class Kind { MonteCarlo, Quadrature };
    Kind kind = Kind::MonteCarlo;
    std::uint64_t seed = 1;
    long samples = 100000;
    int threads = 0;    // 0: hardware concurrency
    long chunk = 4096;
    double target_se = 0.0; // > 0: fail if any coefficient SE exceeds it
    int quad_polar = 20;    // Gauss-Legendre nodes in cos(theta); fixed rule
    int quad_azimuth = 32;  // trapezoid nodes in phi
};

struct PencilEntry {
    CMat mean;
    CMat se;                         // entrywise standard error
    std::vector<CMat> probe_commutator;
    std::vector<double> probe_se;    // sqrt(sum of entrywise SE^2) of each commutator
    double se_norm() const;
};

struct OperatorPencil {
    int degree = 0;
    std::map<std::vector<int>, PencilEntry> coefficients; // multi-index -> H_{l,a}
    std::vector<PencilEntry> site_terms;                  // (zeta - z_i)^{-l} parts
    long samples = 0;
    double condition = 0.0;
    CMat evaluate(const std::vector<cplx> &sites, cplx zeta) const;
};

// Haar average of (sum_i (k H k^-1)^(i) / (zeta - z_i))^l as a pencil; probes
// are operators whose commutators with every coefficient are tracked.
OperatorPencil higher_gaudin(const GaudinSystem &sys, const CMat &h, int l, const HaarSampler &sampler,
                             const std::vector<CMat> &probes = {});

// (Haar average of Ad(k)H (x) Ad(k)H) compared against c * sum_a e_a (x) e_a.
struct ProportionalityFit {
    double constant_re = 0.0;
    double constant_im = 0.0;
    double constant_se = 0.0;
    double residual_norm = 0.0; // ||mean - c G||
    double residual_se = 0.0;   // sqrt(sum SE^2) of the orthogonal part
};
ProportionalityFit fit_quadratic_constant(const GaudinSystem &sys, const CMat &h, const HaarSampler &sampler);

double commutator_norm(const CMat &a, const CMat &b);

} // namespace hitchin
