#include "convapprox/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "convapprox/errors.hpp"

namespace convapprox {

double bhat(double b_q, int q, double beta_l1) {
    if (b_q < 0.0 || beta_l1 < 0.0) throw ParameterError("bhat: inputs must be nonnegative");
    return b_q + 2.0 * q * beta_l1;
}

double bhat_radial(int d) { return 1.0 + 4.0 * d; }

double radius_r(int s, double xi_lead, double beta_l1, double b_q, double q0,
                double f_sup, double b_hat) {
    const double s_half = std::pow(static_cast<double>(s), 0.5 * s);
    const double a = std::abs(xi_lead);
    const double group1 = s_half * (1.0 + a) * std::pow(1.0 + 1.0 / a, static_cast<double>(s));
    const double group2 = s_half * std::pow(2.0, static_cast<double>(s));
    const double fc = 20.0 * beta_l1;
    const double coeff = 4.0 * f_sup / b_hat;
    const double last_bias = std::abs(q0) + 2.0 * b_q;
    return std::max({group1, group2, fc, coeff, last_bias});
}

double leading_entry(const RidgeBasis& basis) {
    for (int i = 0; i < basis.d; ++i) {
        const double v = basis.xi(basis.n_q - 1, i);
        if (v != 0.0) return v;
    }
    throw NumericalError("leading_entry: last basis vector is zero");
}

double radius_r_for(const NetworkSpec& spec) {
    // Radial networks have no ridge vectors; the slots behave like the
    // coordinate directions, whose leading entry is 1.
    const double xi_lead = spec.kind == NetworkKind::radial ? 1.0 : leading_entry(spec.meta.basis);
    return radius_r(spec.s, xi_lead, spec.meta.beta_l1, spec.meta.b_q, spec.meta.q0,
                    spec.meta.f_sup, spec.meta.b_hat);
}

long long covering_a1(int d, int q, int s) {
    const long long n_q = nq(d, q);
    return (3ll * s + 2) * (4 + (10 + d) * n_q) + 10 + 2 * (2 * n_q + 1) * (s + 9);
}

long long covering_a2(int d, int q, int s) {
    const long long n_q = nq(d, q);
    const long long a1 = covering_a1(d, q, s);
    const long long a2_prime =
        (5 + (10 + d) * n_q) * a1 + (s + 9ll) * (4 + (10 + d) * n_q) * (5 + (12 + q) * n_q);
    return 2 * a2_prime;
}

double covering_log_bound(int n, double r, int s, int d, int q, double eta) {
    if (!(eta > 0.0) || eta > 1.0) throw ParameterError("covering_log_bound: need 0 < eta <= 1");
    if (r < 2.0) throw ParameterError("covering_log_bound: need R >= 2");
    const double a1 = static_cast<double>(covering_a1(d, q, s));
    const double a2 = static_cast<double>(covering_a2(d, q, s));
    return a1 * n * std::log(2.0 / eta) + a2 * static_cast<double>(n) * n * std::log(2.0 * (s + 1) * r);
}

double approx_error_bound(NetworkKind kind, double alpha, double seminorm,
                          double b_hat_or_d, int n) {
    if (n < 1) throw ParameterError("approx_error_bound: N must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ParameterError("approx_error_bound: alpha must be in (0, 1]");
    if (kind == NetworkKind::composite)
        return 4.0 * std::pow(b_hat_or_d, alpha) * seminorm * std::pow(n, -alpha);
    return 3.0 * std::pow(1.0 + 4.0 * b_hat_or_d, alpha) * seminorm * std::pow(n, -alpha);
}

GeneralizationShape generalization_shape(long long m, int n, double alpha) {
    if (m < 1) throw ParameterError("generalization_shape: m must be >= 1");
    GeneralizationShape out;
    out.shape = std::max(std::pow(n, -2.0 * alpha), static_cast<double>(n) * n / m);
    out.n_star = static_cast<int>(std::ceil(std::pow(static_cast<double>(m), 1.0 / (2.0 + 2.0 * alpha))));
    return out;
}

long long param_count_bound(NetworkKind kind, int d, int q, int s, int n) {
    if (kind == NetworkKind::radial) return (14ll * d + 2) * n + 22ll * d + s + 1;
    const long long n_q = nq(d, q);
    return (30 + 28 * n_q) * n + (8ll * d + q + 44) * n_q + 4ll * s + 49;
}

BoundReport bound_report(NetworkKind kind, int d, int q, int s, int n, double alpha,
                         double seminorm, double f_sup, double b_q, double q0,
                         double beta_l1, double xi_lead, double eta, long long m) {
    BoundReport rep;
    rep.b_hat = kind == NetworkKind::radial ? bhat_radial(d) : bhat(b_q, q, beta_l1);
    rep.r = radius_r(s, xi_lead, beta_l1, b_q, q0, f_sup, rep.b_hat);
    rep.a1 = covering_a1(d, q, s);
    rep.a2 = covering_a2(d, q, s);
    rep.covering_log = covering_log_bound(n, std::max(rep.r, 2.0), s, d, q, eta);
    rep.approx_bound = approx_error_bound(kind, alpha, seminorm,
                                          kind == NetworkKind::radial ? d : rep.b_hat, n);
    const GeneralizationShape gen = generalization_shape(m, n, alpha);
    rep.gen_shape = gen.shape;
    rep.n_star = gen.n_star;
    rep.param_bound = param_count_bound(kind, d, q, s, n);
    return rep;
}

}  // namespace convapprox
