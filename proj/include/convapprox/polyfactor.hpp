#ifndef CONVAPPROX_POLYFACTOR_HPP
#define CONVAPPROX_POLYFACTOR_HPP

#include <complex>
#include <vector>

#include "convapprox/sequences.hpp"

namespace convapprox {

/// The symbol of a filter is the polynomial w~(z) = sum_k w_k z^k; its degree
/// after trimming drives everything in this module.
struct SymbolPoly {
    Filter coeffs;
    int degree() const { return coeffs.degree(); }
    std::complex<double> eval(std::complex<double> z) const;
};

/// A convolutional factorization W = w^(p) * ... * w^(1) into short filters of
/// support length <= s+1 each, with p <= ceil(M / (s-1)) for M = degree of W.
struct Factorization {
    std::vector<Filter> factors;
    int scale_carrier_index = 0;  // which factor absorbed the global scale
    double residual = 0.0;        // max-norm of (convolve_all(factors) - W)
};

/// All complex roots of the symbol, with multiplicity, conjugate-closed for
/// real input. Companion-matrix eigenvalues polished by Aberth iteration.
/// Degree 0 gives the empty multiset.
std::vector<std::complex<double>> symbol_roots(const Filter& w);

/// 1 + max_{j<K} |w_j / w_K|: a disk radius containing every root of the symbol.
double cauchy_bound(const Filter& w);

/// Factor W into short filters via the roots of its symbol. Conjugate pairs
/// become real quadratics, real roots linears; factors are filled greedily to
/// degree <= s in Leja order. Throws ConditioningError if the reconvolution
/// residual exceeds 1e-6 relative to max|W|.
Factorization factorize_filter(const Filter& w, int s);

/// True iff every monic factor of the factorization of the monic-normalized
/// w_orig has coefficients bounded by s^{s/2} (1 + max_j |w_j|)^s.
bool factor_coefficient_certificate(const Factorization& fac, const Filter& w_orig, int s);

/// The sparse sequence with ones exactly at indices 0, D, 2D, ..., (2N+3)D.
Filter build_w1_sequence(int n, int d_down);

/// Closed-form roots of the symbol of build_w1_sequence(n, d_down):
/// e^{i 2 pi l / (D(2N+4))} for 1 <= l <= D(2N+4)-1 with (2N+4) not dividing l.
std::vector<std::complex<double>> w1_roots(int n, int d_down);

/// Factorize build_w1_sequence(n, d_down) through its closed-form roots. Same
/// grouping scheme as factorize_filter but with exact unit-circle roots.
Factorization factorize_w1(int n, int d_down, int s);

}  // namespace convapprox

#endif
