#include "convapprox/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "convapprox/errors.hpp"
#include "convapprox/rng.hpp"

namespace convapprox {

namespace {

// multinomial coefficient (sum parts)! / prod(parts!), exact in double at the
// degrees this module sees
double multinomial_coefficient(const std::vector<int>& parts) {
    double acc = 1.0;
    int placed = 0;
    for (int p : parts) {
        for (int i = 1; i <= p; ++i) {
            ++placed;
            acc = acc * placed / i;
        }
    }
    return std::round(acc);
}

}  // namespace

double FeaturePolynomial::eval(const std::vector<double>& x) const {
    double acc = 0.0;
    for (const auto& [exps, coeff] : monomials) {
        double term = coeff;
        for (int i = 0; i < dim; ++i)
            for (int e = 0; e < exps[static_cast<size_t>(i)]; ++e) term *= x[static_cast<size_t>(i)];
        acc += term;
    }
    return acc;
}

FeaturePolynomial FeaturePolynomial::from_monomials(int dim, std::map<std::vector<int>, double> monomials) {
    FeaturePolynomial poly;
    poly.dim = dim;
    poly.monomials = std::move(monomials);
    for (const auto& [exps, coeff] : poly.monomials) {
        if (static_cast<int>(exps.size()) != dim)
            throw DimensionError("FeaturePolynomial: multi-index length does not match dimension");
        int deg = 0;
        for (int e : exps) {
            if (e < 0) throw ParameterError("FeaturePolynomial: negative exponent");
            deg += e;
        }
        if (deg == 0) poly.q0 += coeff;
        poly.degree = std::max(poly.degree, deg);
    }
    poly.b_q = sup_norm_q(poly, 4096);
    return poly;
}

long long nq(int d, int q) {
    if (d < 1 || q < 1) throw ParameterError("nq: d and q must be >= 1");
    // binom(d-1+q, q)
    long long acc = 1;
    for (int i = 1; i <= q; ++i) acc = acc * (d - 1 + i) / i;
    return acc;
}

std::vector<std::vector<int>> monomials_of_degree(int dim, int deg) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<size_t>(dim), 0);
    // lexicographic enumeration by recursion on the first coordinate
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim - 1) {
            current[static_cast<size_t>(pos)] = remaining;
            out.push_back(current);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            current[static_cast<size_t>(pos)] = e;
            rec(pos + 1, remaining - e);
        }
    };
    rec(0, deg);
    return out;
}

Eigen::MatrixXd ridge_expansion_matrix(const RidgeBasis& basis, int deg) {
    const auto monos = monomials_of_degree(basis.d, deg);
    Eigen::MatrixXd e(basis.n_q, static_cast<Eigen::Index>(monos.size()));
    for (int k = 0; k < basis.n_q; ++k) {
        for (size_t m = 0; m < monos.size(); ++m) {
            double term = multinomial_coefficient(monos[m]);
            for (int i = 0; i < basis.d; ++i)
                for (int rep = 0; rep < monos[m][static_cast<size_t>(i)]; ++rep) term *= basis.xi(k, i);
            e(k, static_cast<Eigen::Index>(m)) = term;
        }
    }
    return e;
}

RidgeBasis generate_ridge_basis(int d, int q, std::uint64_t seed) {
    if (d < 1 || q < 1) throw ParameterError("generate_ridge_basis: d and q must be >= 1");
    const int n = static_cast<int>(nq(d, q));
    for (int attempt = 0; attempt < 32; ++attempt) {
        CounterRng rng(seed, "ridge-basis", static_cast<std::uint64_t>(attempt));
        RidgeBasis basis;
        basis.d = d;
        basis.q = q;
        basis.n_q = n;
        basis.xi.resize(n, d);
        for (int k = 0; k < n; ++k) {
            double norm_sq = 0.0;
            do {
                norm_sq = 0.0;
                for (int i = 0; i < d; ++i) {
                    basis.xi(k, i) = rng.gaussian();
                    norm_sq += basis.xi(k, i) * basis.xi(k, i);
                }
            } while (norm_sq < 1e-12);
            basis.xi.row(k) /= std::sqrt(norm_sq);
        }
        bool spans = true;
        for (int l = 1; l <= q && spans; ++l) {
            const Eigen::MatrixXd e = ridge_expansion_matrix(basis, l);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(e);
            qr.setThreshold(1e-9);
            spans = qr.rank() == static_cast<Eigen::Index>(nq(d, l));
        }
        if (spans) return basis;
    }
    throw GenerationError("generate_ridge_basis: spanning verification failed after 32 resamples");
}

BetaCoeffs solve_beta(const FeaturePolynomial& poly, const RidgeBasis& basis) {
    if (poly.degree > basis.q)
        throw ParameterError("solve_beta: polynomial degree exceeds basis degree");
    if (poly.dim != basis.d)
        throw DimensionError("solve_beta: polynomial and basis dimensions differ");

    BetaCoeffs coeffs;
    coeffs.beta = Eigen::MatrixXd::Zero(basis.n_q, basis.q);
    for (int l = 1; l <= basis.q; ++l) {
        const auto monos = monomials_of_degree(basis.d, l);
        Eigen::VectorXd target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(monos.size()));
        for (size_t m = 0; m < monos.size(); ++m) {
            auto it = poly.monomials.find(monos[m]);
            if (it != poly.monomials.end()) target(static_cast<Eigen::Index>(m)) = it->second;
        }
        // Rows of the expansion matrix are ridge powers; solving the transposed
        // system matches monomial coefficients exactly. Minimum-norm solution
        // for the underdetermined degrees below q.
        const Eigen::MatrixXd system = ridge_expansion_matrix(basis, l).transpose();
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
        const Eigen::VectorXd beta_l = cod.solve(target);
        const double residual = (system * beta_l - target).lpNorm<Eigen::Infinity>();
        if (residual > 1e-9)
            throw DecompositionError("solve_beta: residual above tolerance at degree " + std::to_string(l));
        coeffs.beta.col(l - 1) = beta_l;
    }
    coeffs.l1_norm = coeffs.beta.cwiseAbs().sum();
    return coeffs;
}

double sup_norm_q(const FeaturePolynomial& poly, int samples) {
    if (samples < 1) throw ParameterError("sup_norm_q: samples must be >= 1");
    std::vector<double> x(static_cast<size_t>(poly.dim), 0.0);
    double best = std::abs(poly.eval(x));
    for (int i = 0; i < poly.dim; ++i) {
        for (double sign : {1.0, -1.0}) {
            std::fill(x.begin(), x.end(), 0.0);
            x[static_cast<size_t>(i)] = sign;
            best = std::max(best, std::abs(poly.eval(x)));
        }
    }
    for (int k = 0; k < samples; ++k) {
        CounterRng rng(0xb0, "sup-norm-q", static_cast<std::uint64_t>(k));
        const std::vector<double> p = sample_ball_point(rng, poly.dim);
        best = std::max(best, std::abs(poly.eval(p)));
    }
    return best;
}

}  // namespace convapprox
