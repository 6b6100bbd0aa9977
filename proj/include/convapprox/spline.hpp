#ifndef CONVAPPROX_SPLINE_HPP
#define CONVAPPROX_SPLINE_HPP

#include <functional>
#include <vector>

namespace convapprox {

/// Uniform knot grid t_j = -1 + (j-2)/N, j = 1..2N+3, spanning [-1-1/N, 1+1/N].
struct KnotGrid {
    int n = 0;
    std::vector<double> t;

    int size() const { return 2 * n + 3; }
    // 1-based access matching the knot indexing used throughout.
    double at(int j) const { return t[static_cast<size_t>(j - 1)]; }
};

KnotGrid knots(int n);

/// Hat function delta_i = N(sigma(u - t_{i-1}) - 2 sigma(u - t_i) + sigma(u - t_{i+1})),
/// valid for 2 <= i <= 2N+2. Peaks at 1 on t_i, supported on [t_{i-1}, t_{i+1}].
double hat(int i, const KnotGrid& grid, double u);

/// Second-difference coefficient map R^{2N+1} -> R^{2N+3}; zeta is indexed
/// zeta_2..zeta_{2N+2} (knot samples without the two outer knots).
std::vector<double> lcal_n(const std::vector<double>& zeta);

/// Quasi-interpolant of a univariate function on the knot grid: the
/// piecewise-linear interpolant written as N * sum_i coeffs_i sigma(u - t_i).
struct QuasiInterpolant {
    KnotGrid grid;
    std::vector<double> coeffs;

    double operator()(double u) const;
};

QuasiInterpolant quasi_interpolate(const std::function<double(double)>& g, int n);

/// Coefficients v^[l] for the monomial u^l: lcal_n of the sampled powers.
/// sup-norm of the reconstruction error on [-1,1] is at most 2l/N, and
/// ||v^[l]||_inf <= 4.
std::vector<double> v_ell(int ell, int n);

}  // namespace convapprox

#endif
