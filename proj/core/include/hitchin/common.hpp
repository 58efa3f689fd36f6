#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace hitchin {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an argument sits on (or too close to) a pole lattice point.
class PoleError : public std::domain_error {
public:
    PoleError(const std::string &what, cplx lattice_point)
      : std::domain_error(what)
      , point_(lattice_point) {}
    cplx lattice_point() const { return point_; }

private:
    cplx point_;
};

// Elementary matrix unit e_ab of size n.
inline CMat unit(int n, int a, int b) {
    CMat m = CMat::Zero(n, n);
    m(a, b) = 1.0;
    return m;
}

inline CMat commutator(const CMat &a, const CMat &b) { return a * b - b * a; }

inline double max_abs(const CMat &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace hitchin
