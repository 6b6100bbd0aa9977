#ifndef CONVAPPROX_BOUNDS_HPP
#define CONVAPPROX_BOUNDS_HPP

#include "convapprox/netbuild.hpp"
#include "convapprox/ridge.hpp"

namespace convapprox {

/// Bhat = B_Q + 2 q ||beta||_1, the sup-norm cap of the realized feature.
double bhat(double b_q, int q, double beta_l1);

/// The radial analogue is the fixed constant 1 + 4d.
double bhat_radial(int d);

/// Smallest parameter cap R making the constructed network a member of the
/// bounded hypothesis space: the five-way max over the filter bound of the
/// first group (through the first nonzero entry of the last ridge vector),
/// the filter bound of the second group, 20 ||beta||_1, 4 ||f||_inf / Bhat,
/// and |Q(0)| + 2 B_Q.
double radius_r(int s, double xi_lead, double beta_l1, double b_q, double q0,
                double f_sup, double b_hat);

/// First nonzero entry of the last basis vector (lowest index first).
double leading_entry(const RidgeBasis& basis);

double radius_r_for(const NetworkSpec& spec);

/// Covering-number constants depending only on d, q, s.
long long covering_a1(int d, int q, int s);
long long covering_a2(int d, int q, int s);

/// log N(eta, H_{R,N}) <= A1 N log(2/eta) + A2 N^2 log(2(s+1)R).
double covering_log_bound(int n, double r, int s, int d, int q, double eta);

/// The printed approximation-rate bound: 4 Bhat^alpha |f| N^-alpha for the
/// composite regime, 3 (1+4d)^alpha |f| N^-alpha for the radial one.
double approx_error_bound(NetworkKind kind, double alpha, double seminorm,
                          double b_hat_or_d, int n);

struct GeneralizationShape {
    double shape = 0.0;  // max{N^{-2 alpha}, N^2 / m}
    int n_star = 0;      // ceil(m^{1/(2+2 alpha)})
};

GeneralizationShape generalization_shape(long long m, int n, double alpha);

/// Closed-form cap on the number of free parameters of the construction.
long long param_count_bound(NetworkKind kind, int d, int q, int s, int n);

/// Every closed-form constant of a configuration in one record. covering_log
/// is a log-domain value; everything else is linear.
struct BoundReport {
    double b_hat = 0.0;
    double r = 0.0;
    long long a1 = 0;
    long long a2 = 0;
    double covering_log = 0.0;
    double approx_bound = 0.0;
    double gen_shape = 0.0;
    int n_star = 0;
    long long param_bound = 0;
};

BoundReport bound_report(NetworkKind kind, int d, int q, int s, int n, double alpha,
                         double seminorm, double f_sup, double b_q, double q0,
                         double beta_l1, double xi_lead, double eta, long long m);

}  // namespace convapprox

#endif
