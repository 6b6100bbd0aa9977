// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "convapprox/bounds.hpp"
#include "convapprox/harness.hpp"
#include "convapprox/netbuild.hpp"
#include "convapprox/neteval.hpp"
#include "convapprox/polyfactor.hpp"
#include "convapprox/rng.hpp"
#include "convapprox/spline.hpp"

using namespace convapprox;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
};

FeaturePolynomial poly_d3() {
    return FeaturePolynomial::from_monomials(3, {{{1, 1, 0}, 1.0}, {{0, 0, 2}, 1.0}});
}

FeaturePolynomial poly_d2() {
    return FeaturePolynomial::from_monomials(2, {{{1, 1}, 1.0}, {{2, 0}, 0.5}});
}

// ---- criterion 1: factorization reconstruction --------------------------

Check factorization_reconstruction() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    const int s_choices[] = {2, 3, 4, 6};
    for (int trial = 0; trial < 200; ++trial) {
        CounterRng rng(2024, "acc-filter", static_cast<std::uint64_t>(trial));
        const int len = 5 + static_cast<int>(rng.next_u64() % 56);
        std::vector<double> c(static_cast<size_t>(len));
        for (double& v : c) v = rng.uniform(-1.0, 1.0);
        const Filter w(std::move(c));
        const int s = s_choices[trial % 4];
        Factorization fac;
        try {
            fac = factorize_filter(w, s);
        } catch (const std::exception& e) {
            check.require(false, "trial " + std::to_string(trial) + ": " + e.what());
            continue;
        }
        const Filter recon = convolve_all(fac.factors);
        double res = 0.0;
        for (int i = 0; i < std::max(recon.support_len(), w.support_len()); ++i)
            res = std::max(res, std::abs(recon[i] - w[i]));
        check.require(res <= 1e-6 * w.linf_norm(), "residual " + std::to_string(res));
        const int m = w.trimmed().degree();
        check.require(static_cast<int>(fac.factors.size()) <= (m + s - 2) / (s - 1),
                      "factor count above ceil(M/(s-1))");
        check.require(factor_coefficient_certificate(fac, w, s), "Cauchy certificate failed");
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(dt < 30.0, "runtime " + std::to_string(dt) + " s exceeds 30 s");
    if (check.ok) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "200 filters, s in {2,3,4,6}, %.2f s", dt);
        check.detail = buf;
    }
    return check;
}

// ---- criterion 2: layer identities ---------------------------------------

Check layer_identities() {
    Check check;
    double worst1 = 0.0, worst2 = 0.0;
    for (int d : {2, 3}) {
        const FeaturePolynomial poly = d == 2 ? poly_d2() : poly_d3();
        const TargetFunction f = target_abs(0.3, -poly.b_q, poly.b_q);
        for (int n : {2, 4}) {
            const NetworkSpec spec = build_composite_network(f, poly, d, 2, n, 7);
            const KnotGrid grid = knots(n);
            for (int trial = 0; trial < 100; ++trial) {
                CounterRng rng(7, "acc-identity", static_cast<std::uint64_t>(trial));
                const std::vector<double> x = sample_ball_point(rng, d);
                const EvalTrace trace = forward(spec, x, true);
                const auto& h1 = trace.activations[static_cast<size_t>(spec.j1 - 1)];
                const auto& h2 = trace.activations.back();
                for (int k = 1; k <= spec.meta.d_down; ++k) {
                    double dot = 0.0;
                    if (k <= spec.meta.n_q)
                        for (int i = 0; i < d; ++i)
                            dot += spec.meta.basis.xi(k - 1, i) * x[static_cast<size_t>(i)];
                    worst1 = std::max(
                        worst1, std::abs(h1[static_cast<size_t>(k - 1)] - (dot + spec.meta.b)));
                    for (int j = 1; j <= 2 * n + 3; ++j) {
                        const double want = k <= spec.meta.n_q ? relu(dot - grid.at(j)) : 0.0;
                        worst2 = std::max(
                            worst2,
                            std::abs(h2[static_cast<size_t>((j - 1) * spec.meta.d_down + k - 1)] -
                                     want));
                    }
                }
            }
        }
    }
    check.require(worst1 <= 1e-8, "group-1 deviation " + std::to_string(worst1));
    check.require(worst2 <= 1e-8, "group-2 deviation " + std::to_string(worst2));
    if (check.ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "group-1 dev %.2e, group-2 dev %.2e", worst1, worst2);
        check.detail = buf;
    }
    return check;
}

// ---- criterion 3: spline suite -------------------------------------------

Check spline_suite() {
    Check check;
    auto dense = [](const KnotGrid& grid) {
        std::vector<double> pts;
        for (int i = 0; i <= 20 * grid.n; ++i) pts.push_back(-1.0 + 2.0 * i / (20 * grid.n));
        for (int j = 2; j <= 2 * grid.n + 2; ++j) pts.push_back(grid.at(j));
        return pts;
    };
    for (int n : {1, 2, 4, 8, 16, 32}) {
        const QuasiInterpolant unity = quasi_interpolate([](double) { return 1.0; }, n);
        const QuasiInterpolant affine =
            quasi_interpolate([](double u) { return 0.7 * u - 0.2; }, n);
        for (double u : dense(unity.grid)) {
            check.require(std::abs(unity(u) - 1.0) <= 1e-12,
                          "partition of unity at N=" + std::to_string(n));
            check.require(std::abs(affine(u) - (0.7 * u - 0.2)) <= 1e-12,
                          "affine reproduction at N=" + std::to_string(n));
        }
    }
    for (double a : {-0.3, 0.0, 0.7}) {
        for (int n = 2; n <= 32; ++n) {
            auto g = [a](double u) { return std::abs(u - a); };
            const QuasiInterpolant qi = quasi_interpolate(g, n);
            double sup = 0.0;
            for (double u : dense(qi.grid)) sup = std::max(sup, std::abs(qi(u) - g(u)));
            check.require(sup <= 2.0 / n, "kink target above 2/N at N=" + std::to_string(n));
        }
    }
    double v_max = 0.0;
    for (int l = 1; l <= 6; ++l)
        for (int n = 1; n <= 128; ++n)
            for (double v : v_ell(l, n)) v_max = std::max(v_max, std::abs(v));
    check.require(v_max <= 4.0, "||v^[l]||_inf above 4");
    if (check.ok) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max ||v^[l]||_inf = %.3g", v_max);
        check.detail = buf;
    }
    return check;
}

// ---- criteria 4 and 5: rate reproduction ----------------------------------

double measure_sup_error(const NetworkSpec& spec,
                         const std::function<double(const std::vector<double>&)>& target,
                         int samples, std::uint64_t seed) {
    std::vector<std::vector<double>> pts;
    pts.emplace_back(static_cast<size_t>(spec.d), 0.0);
    for (int i = 0; i < spec.d; ++i)
        for (double sign : {1.0, -1.0}) {
            std::vector<double> e(static_cast<size_t>(spec.d), 0.0);
            e[static_cast<size_t>(i)] = sign;
            pts.push_back(std::move(e));
        }
    for (int k = 0; k < samples; ++k) {
        CounterRng rng(seed, "acc-measure", static_cast<std::uint64_t>(k));
        pts.push_back(sample_ball_point(rng, spec.d));
    }
    double sup = 0.0;
    for (const auto& x : pts) sup = std::max(sup, std::abs(forward_value(spec, x) - target(x)));
    return sup;
}

Check radial_rates() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<int> ns = {4, 8, 16, 32, 64};

    std::vector<double> measured;
    const TargetFunction ident = target_identity(0.0, 1.0);
    for (int n : ns) {
        const NetworkSpec spec = build_radial_network(ident, 4, 2, n);
        const double sup = measure_sup_error(
            spec,
            [&](const std::vector<double>& x) {
                double nsq = 0.0;
                for (double v : x) nsq += v * v;
                return nsq;
            },
            1500, 404);
        measured.push_back(sup);
        check.require(sup <= 51.0 / n, "f(u)=u sup " + std::to_string(sup) +
                                           " above 51/N at N=" + std::to_string(n));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
        const double x = std::log(static_cast<double>(ns[i]));
        const double y = std::log(measured[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(ns.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    check.require(slope >= -1.3 && slope <= -0.7, "slope " + std::to_string(slope));

    const TargetFunction root = target_sqrt();
    for (int n : ns) {
        const NetworkSpec spec = build_radial_network(root, 4, 2, n);
        const double sup = measure_sup_error(
            spec,
            [&](const std::vector<double>& x) {
                double nsq = 0.0;
                for (double v : x) nsq += v * v;
                return std::sqrt(nsq);
            },
            1500, 405);
        check.require(sup <= 3.0 * std::sqrt(17.0) / std::sqrt(static_cast<double>(n)),
                      "sqrt sup above 3 sqrt(17) N^{-1/2} at N=" + std::to_string(n));
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(dt < 120.0, "runtime " + std::to_string(dt) + " s exceeds 2 min");
    if (check.ok) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "slope %.3f, %.1f s", slope, dt);
        check.detail = buf;
    }
    return check;
}

Check composite_rates() {
    Check check;
    const FeaturePolynomial poly = poly_d3();
    const TargetFunction f = target_abs(0.3, -poly.b_q, poly.b_q);
    double b_hat = 0.0;
    for (int n : {4, 8, 16, 32}) {
        const NetworkSpec spec = build_composite_network(f, poly, 3, 2, n, 7);
        b_hat = spec.meta.b_hat;
        const double sup = measure_sup_error(
            spec, [&](const std::vector<double>& x) { return f.eval_extended(poly.eval(x)); },
            1200, 505);
        check.require(sup <= 4.0 * b_hat / n,
                      "sup " + std::to_string(sup) + " above 4 Bhat/N at N=" + std::to_string(n));
    }
    if (check.ok) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "Bhat = %.4g", b_hat);
        check.detail = buf;
    }
    return check;
}

// ---- criterion 6: parameter counts ----------------------------------------

Check parameter_counts() {
    Check check;
    const FeaturePolynomial poly = poly_d3();
    const TargetFunction f = target_abs(0.3, -poly.b_q, poly.b_q);
    const NetworkSpec composite = build_composite_network(f, poly, 3, 2, 4, 7);
    const long long composite_count = count_free_parameters(composite);
    check.require(param_count_bound(NetworkKind::composite, 3, 2, 2, 4) == 1269,
                  "printed composite bound is not 1269");
    check.require(composite_count <= 1269, "composite count above 1269");

    const TargetFunction g = target_identity(0.0, 1.0);
    const NetworkSpec radial = build_radial_network(g, 4, 2, 8);
    const long long radial_count = count_free_parameters(radial);
    check.require(param_count_bound(NetworkKind::radial, 4, 2, 2, 8) == 555,
                  "printed radial bound is not 555");
    check.require(radial_count <= 555, "radial count above 555");
    if (check.ok)
        check.detail = "composite " + std::to_string(composite_count) + " <= 1269, radial " +
                       std::to_string(radial_count) + " <= 555";
    return check;
}

// ---- criterion 7: membership ----------------------------------------------

Check membership() {
    Check check;
    const TargetFunction g = target_identity(0.0, 1.0);
    const NetworkSpec radial = build_radial_network(g, 4, 2, 8);
    const double r_radial = radius_r_for(radial);
    check.require(check_membership(radial, r_radial).pass, "radial network not a member");

    const FeaturePolynomial poly = poly_d3();
    const TargetFunction f = target_abs(0.3, -poly.b_q, poly.b_q);
    const NetworkSpec composite = build_composite_network(f, poly, 3, 2, 4, 7);
    check.require(check_membership(composite, radius_r_for(composite)).pass,
                  "composite network not a member");

    NetworkSpec bad = radial;
    Filter& w = bad.layers[5].filter;
    const double scale = 10.0 * r_radial / w.linf_norm();
    for (double& v : w.coeffs) v *= scale;
    const MembershipReport rep = check_membership(bad, r_radial);
    check.require(!rep.constraints[0].pass, "scaled filter not caught");

    Eigen::MatrixXd fc(radial.fc_width(), static_cast<Eigen::Index>(radial.fc_row.size()));
    for (int j = 0; j < radial.fc_width(); ++j)
        for (size_t i = 0; i < radial.fc_row.size(); ++i)
            fc(j, static_cast<Eigen::Index>(i)) = radial.fc_row[i];
    fc(0, 3) += 1.0;
    bool identical_failed = false;
    for (const auto& c : check_membership(radial, fc, r_radial).constraints)
        if (c.name == "fc_identical_rows" && !c.pass) identical_failed = true;
    check.require(identical_failed, "non-identical rows not caught");
    if (check.ok) check.detail = "built networks pass, perturbations fail";
    return check;
}

// ---- criterion 8: covering constants ---------------------------------------

Check covering_constants() {
    Check check;
    check.require(covering_a1(3, 2, 2) == 952, "A1 != 952");
    check.require(covering_a2(3, 2, 2) == 318588, "A2 != 318588");
    double prev = 0.0;
    for (int n : {1, 2, 4, 8, 16}) {
        const double v = covering_log_bound(n, 4.0, 2, 3, 2, 0.5);
        check.require(v > prev, "not increasing in N");
        prev = v;
    }
    prev = 0.0;
    for (double r : {2.0, 8.0, 64.0}) {
        const double v = covering_log_bound(4, r, 2, 3, 2, 0.5);
        check.require(v > prev, "not increasing in R");
        prev = v;
    }
    prev = 0.0;
    for (double eta : {1.0, 0.25, 0.01}) {
        const double v = covering_log_bound(4, 4.0, 2, 3, 2, eta);
        check.require(v > prev, "not increasing in 1/eta");
        prev = v;
    }
    if (check.ok) check.detail = "A1 = 952, A2 = 318588, monotone";
    return check;
}

// ---- criterion 9: ERM trade-off --------------------------------------------

Check erm_tradeoff() {
    Check check;
    nlohmann::json base{{"kind", "radial"},
                        {"d", 2},
                        {"s", 2},
                        {"f", {{"name", "abs"}, {"a", 0.3}}},
                        {"m", {512}},
                        {"N", {2, 4, 8, 16, 32, 64}},
                        {"noise", 0.3},
                        {"M", 2.0},
                        {"test_samples", 10000}};
    std::vector<std::vector<double>> risks(6);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        base["seed"] = seed;
        const std::vector<ErmRow> rows = erm_c_fit(erm_config_from_json(base));
        for (size_t i = 0; i < rows.size(); ++i) risks[i].push_back(rows[i].risk);
    }
    std::vector<double> median(6);
    for (size_t i = 0; i < 6; ++i) {
        std::sort(risks[i].begin(), risks[i].end());
        median[i] = risks[i][2];
    }
    const size_t arg_min =
        static_cast<size_t>(std::min_element(median.begin(), median.end()) - median.begin());
    check.require(arg_min > 0 && arg_min + 1 < median.size(), "risk minimum not interior");
    check.require(median.front() > median[arg_min], "left endpoint not above the minimum");
    check.require(median.back() > median[arg_min], "right endpoint not above the minimum");

    const GeneralizationShape shape = generalization_shape(256, 4, 1.0);
    check.require(shape.n_star == 4, "N*(256) != 4");

    if (check.ok) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "median risks %.4f %.4f %.4f %.4f %.4f %.4f, N*(256) = %d", median[0],
                      median[1], median[2], median[3], median[4], median[5], shape.n_star);
        check.detail = buf;
    }
    return check;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {"factorization reconstruction", factorization_reconstruction},
        {"layer identities", layer_identities},
        {"spline suite", spline_suite},
        {"radial rate reproduction", radial_rates},
        {"composite rate reproduction", composite_rates},
        {"parameter counts", parameter_counts},
        {"membership", membership},
        {"covering constants", covering_constants},
        {"ERM trade-off", erm_tradeoff},
    };

    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_ok = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        if (only > 0 && static_cast<int>(i + 1) != only) continue;
        Check result;
        try {
            result = criteria[i].run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %zu: %s%s%s\n", result.ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, result.detail.empty() ? "" : " — ", result.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}
