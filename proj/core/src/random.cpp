#include "hitchin/random.hpp"

#include <cmath>

namespace hitchin {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(eng_);
}

double Rng::normal() { return gauss_(eng_); }

cplx Rng::complex_normal() {
    const double s = std::sqrt(0.5);
    double re = gauss_(eng_);
    double im = gauss_(eng_);
    return {s * re, s * im};
}

cplx Rng::annulus(double rmin, double rmax, double amax) {
    double r = uniform(rmin, rmax);
    double a = uniform(-amax, amax);
    return std::polar(r, a);
}

CMat Rng::gaussian_matrix(int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
}

CMat haar_su(int n, Rng &rng) {
    CMat g = rng.gaussian_matrix(n, n);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        double a = std::abs(d);
        cplx ph = a > 0 ? d / a : cplx(1.0);
        q.col(j) *= ph;
    }
    cplx det = q.determinant();
    cplx root = std::pow(det, 1.0 / n);
    q /= root;
    return q;
}

} // namespace hitchin
