#ifndef CONVAPPROX_RIDGE_HPP
#define CONVAPPROX_RIDGE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace convapprox {

/// Unit vectors xi_1..xi_{n_q} whose ridge powers (xi_k . x)^l span the
/// homogeneous polynomials of every degree l <= q.
struct RidgeBasis {
    Eigen::MatrixXd xi;  // n_q x d, rows are unit vectors
    int d = 0;
    int q = 0;
    int n_q = 0;
};

/// Multivariate polynomial as a monomial-coefficient map. The key is the
/// exponent multi-index; entries of degree 0 contribute to Q(0).
struct FeaturePolynomial {
    std::map<std::vector<int>, double> monomials;
    int dim = 0;
    int degree = 0;
    double q0 = 0.0;   // Q(0)
    double b_q = 0.0;  // sup-norm estimate on the unit ball

    double eval(const std::vector<double>& x) const;
    static FeaturePolynomial from_monomials(int dim, std::map<std::vector<int>, double> monomials);
};

/// Ridge coefficients beta_{k,l} with Q(x) = Q(0) + sum beta_{k,l} (xi_k.x)^l.
struct BetaCoeffs {
    Eigen::MatrixXd beta;  // n_q x q, column l-1 holds the degree-l block
    double l1_norm = 0.0;
};

/// Dimension of the space of homogeneous polynomials of degree q on R^d.
long long nq(int d, int q);

/// All exponent multi-indices of total degree exactly deg in dim variables,
/// in lexicographic order.
std::vector<std::vector<int>> monomials_of_degree(int dim, int deg);

/// Row k holds the monomial coefficients of (xi_k . x)^deg via the multinomial
/// expansion; columns follow monomials_of_degree(d, deg).
Eigen::MatrixXd ridge_expansion_matrix(const RidgeBasis& basis, int deg);

/// Sample unit vectors from a seeded generator and verify that the ridge
/// powers span every homogeneous degree l <= q (rank of the expansion
/// matrix). Resamples up to 32 times before giving up.
RidgeBasis generate_ridge_basis(int d, int q, std::uint64_t seed);

/// Least squares in monomial-coefficient space, one decoupled block per
/// degree. Throws DecompositionError when a block residual exceeds 1e-9.
BetaCoeffs solve_beta(const FeaturePolynomial& poly, const RidgeBasis& basis);

/// Sampled maximization of |Q| over the unit ball plus the points 0 and
/// +-e_i; a deterministic lower bound used as B_Q.
double sup_norm_q(const FeaturePolynomial& poly, int samples);

}  // namespace convapprox

#endif
