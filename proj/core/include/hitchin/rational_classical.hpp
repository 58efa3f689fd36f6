#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "hitchin/common.hpp"
#include "hitchin/partial_fractions.hpp"
#include "hitchin/random.hpp"

namespace hitchin {

class StepRejectedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// N residue matrices at distinct marked points of the sphere.
class RationalPhasePoint {
public:
    RationalPhasePoint(std::vector<CMat> eta, std::vector<cplx> sites);

    int n() const { return static_cast<int>(eta_.front().rows()); }
    int sites_count() const { return static_cast<int>(eta_.size()); }
    const std::vector<CMat> &eta() const { return eta_; }
    const CMat &eta(int i) const { return eta_.at(i); }
    const std::vector<cplx> &sites() const { return sites_; }
    cplx site(int i) const { return sites_.at(i); }

    // all power traces tr(eta^k), k = 1..n, below tol * scale^k
    bool is_nilpotent(int i, double tol = 1e-10) const;
    bool satisfies_moment_constraint(double tol = 1e-10) const;
    CMat total_residue() const;
    double scale() const;

private:
    std::vector<CMat> eta_;
    std::vector<cplx> sites_;
};

// sum_i eta_i / (z - z_i)
CMat lax_rational(const RationalPhasePoint &pt, cplx z);

struct HitchinKey {
    int degree;
    std::vector<int> index;
    friend bool operator<(const HitchinKey &x, const HitchinKey &y) {
        return std::tie(x.degree, x.index) < std::tie(y.degree, y.index);
    }
    friend bool operator==(const HitchinKey &x, const HitchinKey &y) {
        return x.degree == y.degree && x.index == y.index;
    }
    std::string str() const;
};

// tr(eta(z)^d) = sum_a H_{d,a} prod_i (z - z_i)^{-a_i} + sum_i casimir_{d,i} (z - z_i)^{-d}.
// The top-order poles are carried separately; the remaining principal parts
// are mapped onto the (possibly overcomplete) multi-index family by the
// minimum-norm solution.
struct HitchinCoefficients {
    std::map<HitchinKey, cplx> values;
    std::map<std::pair<int, int>, cplx> casimirs; // (d, site) -> tr(eta_i^d)

    cplx reconstruct(const std::vector<cplx> &sites, int degree, cplx z) const;
    std::vector<cplx> flat() const; // values then casimirs, map order
};

HitchinCoefficients hitchin_coeffs(const RationalPhasePoint &pt, const std::vector<int> &degrees);

// trace-pairing gradient: dF = sum_i tr(grad_i * d eta_i)
using Gradient = std::vector<CMat>;

Gradient hitchin_gradient(const RationalPhasePoint &pt, const HitchinKey &key);
Gradient casimir_gradient(const RationalPhasePoint &pt, int degree, int site);

struct Observable {
    std::string name;
    std::function<cplx(const RationalPhasePoint &)> value;
    std::function<Gradient(const RationalPhasePoint &)> gradient; // optional
};

Observable entry_observable(int site, int a, int b);
Observable hitchin_observable(const HitchinKey &key);

// centered differences with one Richardson level; h relative to pt.scale()
Gradient fd_gradient(const Observable &f, const RationalPhasePoint &pt, double rel_step = 1e-5);

// {F,G} = -sum_i tr(eta_i [grad_i F, grad_i G]); in coordinates
// {eta_ab, eta_cd} = delta_bc eta_ad - delta_ad eta_cb.
cplx kk_bracket(const Observable &f, const Observable &g, const RationalPhasePoint &pt);
cplx kk_bracket(const Gradient &gf, const Gradient &gg, const RationalPhasePoint &pt);
cplx kk_bracket_fd(const Observable &f, const Observable &g, const RationalPhasePoint &pt);

// n^2 x n^2 tensors with element {eta(z)_ab, eta(w)_cd} stored at kron(e_ab, e_cd)
CMat lax_bracket_tensor(const RationalPhasePoint &pt, cplx z, cplx w);
CMat lax_bracket_rmatrix_form(const RationalPhasePoint &pt, cplx z, cplx w);

// d eta_i / dt = [eta_i, grad_i H] / d
std::vector<CMat> flow_field(const RationalPhasePoint &pt, const HitchinKey &key);
std::vector<CMat> hamiltonian_field(const Gradient &grad, const RationalPhasePoint &pt, double scale = 1.0);

struct Trajectory {
    std::vector<double> times;
    std::vector<RationalPhasePoint> points;
    std::vector<double> drift; // max relative invariant drift at each sample
    double max_drift = 0.0;
    double max_eigen_drift = 0.0;
};

struct FlowOptions {
    double T = 1.0;
    double dt = 1e-3;
    int sample_every = 100;
    double overflow = 1e12;
    cplx spectral_point = cplx(0.37, 1.21);
};

Trajectory integrate_flow(const RationalPhasePoint &start, const HitchinKey &key, const FlowOptions &opt);

// every Hitchin coefficient and Casimir of degrees 2..n
std::vector<cplx> all_invariants(const RationalPhasePoint &pt);
std::vector<cplx> lax_eigenvalues(const RationalPhasePoint &pt, cplx z);

struct RationalSampleOptions {
    bool nilpotent = false;
    bool moment = false;
    double site_radius = 2.0;
    double min_gap = 0.3;
};

RationalPhasePoint random_rational_point(int n, int sites, Rng &rng, const RationalSampleOptions &opt = {});

} // namespace hitchin
