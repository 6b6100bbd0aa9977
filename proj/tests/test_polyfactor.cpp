#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "convapprox/errors.hpp"
#include "convapprox/polyfactor.hpp"
#include "convapprox/rng.hpp"

using namespace convapprox;

namespace {

double reconstruction_residual(const Factorization& fac, const Filter& w) {
    const Filter recon = convolve_all(fac.factors);
    double res = 0.0;
    for (int i = 0; i < std::max(recon.support_len(), w.support_len()); ++i)
        res = std::max(res, std::abs(recon[i] - w[i]));
    return res;
}

Filter random_filter(CounterRng& rng, int len) {
    std::vector<double> c(static_cast<size_t>(len));
    for (double& v : c) v = rng.uniform(-1.0, 1.0);
    if (std::abs(c.back()) < 1e-2) c.back() = 0.3;
    if (std::abs(c.front()) < 1e-2) c.front() = 0.3;
    return Filter(std::move(c));
}

}  // namespace

TEST_CASE("symbol roots of simple polynomials") {
    auto roots = symbol_roots(Filter({-1.0, 0.0, 1.0}));  // z^2 - 1
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    CHECK(roots[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(roots[1].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(roots[0].imag()) < 1e-12);

    roots = symbol_roots(Filter({1.0, 1.0}));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].real() == doctest::Approx(-1.0));

    CHECK(symbol_roots(Filter({3.0})).empty());
}

TEST_CASE("the symbol vanishes at every reported root") {
    CounterRng rng(37, "pf-symbol");
    for (int trial = 0; trial < 10; ++trial) {
        const Filter w = random_filter(rng, 8 + static_cast<int>(rng.next_u64() % 12));
        const SymbolPoly symbol{w};
        for (const auto& z : symbol_roots(w))
            CHECK(std::abs(symbol.eval(z)) < 1e-8 * w.l1_norm() * std::pow(std::abs(z) + 1.0, symbol.degree()));
    }
}

TEST_CASE("symbol roots are conjugate closed") {
    CounterRng rng(19, "pf-conj");
    for (int trial = 0; trial < 20; ++trial) {
        const Filter w = random_filter(rng, 6 + static_cast<int>(rng.next_u64() % 20));
        auto roots = symbol_roots(w);
        for (const auto& z : roots) {
            if (std::abs(z.imag()) < 1e-9) continue;
            const auto mate = std::find_if(roots.begin(), roots.end(), [&](auto y) {
                return std::abs(std::conj(z) - y) < 1e-9 * (1.0 + std::abs(z));
            });
            CHECK(mate != roots.end());
        }
    }
}

TEST_CASE("w1 roots match the closed form") {
    // N=1, D=2: the 12th roots of unity without +-1
    const auto roots = w1_roots(1, 2);
    REQUIRE(roots.size() == 10);
    for (const auto& z : roots) {
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);
        CHECK(std::abs(z.imag()) > 1e-12);  // +-1 excluded
        const double angle = std::arg(z);
        const double steps = angle * 12.0 / (2.0 * std::numbers::pi);
        CHECK(std::abs(steps - std::round(steps)) < 1e-12);
    }
    // and the general solver finds the same multiset
    auto numeric = symbol_roots(build_w1_sequence(1, 2));
    REQUIRE(numeric.size() == roots.size());
    for (const auto& z : roots) {
        const auto hit = std::min_element(numeric.begin(), numeric.end(), [&](auto a, auto b) {
            return std::abs(a - z) < std::abs(b - z);
        });
        CHECK(std::abs(*hit - z) < 1e-9);
    }
}

TEST_CASE("cauchy bound") {
    CHECK(cauchy_bound(Filter({-2.0, 0.0, 1.0})) == doctest::Approx(3.0));
    for (const auto& z : symbol_roots(Filter({-2.0, 0.0, 1.0}))) CHECK(std::abs(z) <= 3.0);

    CHECK(cauchy_bound(Filter({1.0})) == doctest::Approx(1.0));

    CHECK(cauchy_bound(build_w1_sequence(3, 2)) == doctest::Approx(2.0));
    for (const auto& z : w1_roots(3, 2)) CHECK(std::abs(z) <= 2.0);
}

TEST_CASE("short filters factor trivially") {
    const Filter w({0.3, -0.7, 1.1});
    const Factorization fac = factorize_filter(w, 2);
    REQUIRE(fac.factors.size() == 1);
    CHECK(fac.factors[0].coeffs == w.coeffs);
    CHECK(fac.residual == 0.0);
    CHECK(factor_coefficient_certificate(fac, w, 2));
}

TEST_CASE("all-ones length 6 factors exactly") {
    const Filter w({1, 1, 1, 1, 1, 1});
    const Factorization fac = factorize_filter(w, 2);
    REQUIRE(fac.factors.size() == 3);
    CHECK(reconstruction_residual(fac, w) < 1e-14);

    // the factor multiset is (z+1), (z^2+z+1), (z^2-z+1) up to rounding
    std::vector<std::vector<double>> got;
    for (const Filter& f : fac.factors) got.push_back(f.coeffs);
    std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a[1] < b[1];
    });
    REQUIRE(got[0].size() == 2);
    CHECK(got[0][0] == doctest::Approx(1.0));
    CHECK(got[0][1] == doctest::Approx(1.0));
    CHECK(got[1][1] == doctest::Approx(-1.0));
    CHECK(got[2][1] == doctest::Approx(1.0));
    for (int i : {1, 2}) {
        CHECK(got[static_cast<size_t>(i)][0] == doctest::Approx(1.0));
        CHECK(got[static_cast<size_t>(i)][2] == doctest::Approx(1.0));
    }
}

TEST_CASE("random long filters factor within tolerance") {
    CounterRng rng(23, "pf-long");
    const Filter w = random_filter(rng, 40);
    const Factorization fac = factorize_filter(w, 3);
    CHECK(fac.factors.size() <= 20);  // ceil(39 / 2)
    for (const Filter& f : fac.factors) CHECK(f.support_len() <= 4);
    CHECK(fac.residual <= 1e-6 * w.linf_norm());
}

TEST_CASE("factor count bound and certificate over random filters") {
    CounterRng rng(29, "pf-prop");
    const int s_choices[] = {2, 3, 4, 6};
    for (int trial = 0; trial < 100; ++trial) {
        const int len = 5 + static_cast<int>(rng.next_u64() % 30);
        const int s = s_choices[trial % 4];
        const Filter w = random_filter(rng, len);
        const Factorization fac = factorize_filter(w, s);
        const int m = w.trimmed().degree();
        CHECK(static_cast<int>(fac.factors.size()) <= (m + s - 2) / (s - 1));
        for (const Filter& f : fac.factors) CHECK(f.support_len() <= s + 1);
        CHECK(factor_coefficient_certificate(fac, w, s));
        CHECK(reconstruction_residual(fac, w) <= 1e-6 * w.linf_norm());
    }
}

TEST_CASE("monic random filters keep the certificate") {
    CounterRng rng(31, "pf-monic");
    for (int trial = 0; trial < 100; ++trial) {
        Filter w = random_filter(rng, 20);
        w.coeffs.back() = 1.0;
        const Factorization fac = factorize_filter(w, 4);
        CHECK(factor_coefficient_certificate(fac, w, 4));
    }
}

TEST_CASE("build_w1_sequence layout") {
    CHECK(build_w1_sequence(1, 1).coeffs == std::vector<double>{1, 1, 1, 1, 1, 1});
    CHECK(build_w1_sequence(1, 2).coeffs ==
          std::vector<double>{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
    for (int n : {1, 3, 9}) {
        for (int dd : {1, 2, 5}) {
            const Filter w1 = build_w1_sequence(n, dd);
            CHECK(w1.support_len() == (2 * n + 3) * dd + 1);
            double sum = 0.0;
            for (double c : w1.coeffs) sum += c;
            CHECK(sum == doctest::Approx(2.0 * n + 4.0));
        }
    }
}

TEST_CASE("w1 factorization is near exact") {
    for (int n : {1, 2, 8}) {
        for (int dd : {1, 3, 6}) {
            for (int s : {2, 3}) {
                const Factorization fac = factorize_w1(n, dd, s);
                CHECK(reconstruction_residual(fac, build_w1_sequence(n, dd)) <= 1e-10);
                const int m = (2 * n + 3) * dd;
                CHECK(static_cast<int>(fac.factors.size()) <= (m + s - 2) / (s - 1));
            }
        }
    }
    // the large end of the documented envelope
    const Factorization big = factorize_w1(64, 16, 2);
    CHECK(reconstruction_residual(big, build_w1_sequence(64, 16)) <= 1e-10);
}

TEST_CASE("odd width puts -1 among the roots") {
    const auto roots = w1_roots(2, 3);
    const auto hit = std::min_element(roots.begin(), roots.end(), [](auto a, auto b) {
        return std::abs(a + 1.0) < std::abs(b + 1.0);
    });
    CHECK(std::abs(*hit + 1.0) < 1e-12);
    const Factorization fac = factorize_w1(2, 3, 2);
    bool has_linear = false;
    for (const Filter& f : fac.factors)
        if (f.support_len() == 2) has_linear = true;
    CHECK(has_linear);
}

TEST_CASE("repeated roots factor through cluster refinement") {
    Filter w = Filter::delta();
    for (int i = 0; i < 12; ++i) w = convolve(w, Filter({1.0, 1.0}));
    const Factorization fac = factorize_filter(w, 2);
    CHECK(reconstruction_residual(fac, w) <= 1e-6 * w.linf_norm());

    Filter v = Filter::delta();
    for (int i = 0; i < 8; ++i) v = convolve(v, Filter({1.0, 1.0, 1.0}));
    const Factorization vfac = factorize_filter(v, 2);
    CHECK(reconstruction_residual(vfac, v) <= 1e-6 * v.linf_norm());
}

TEST_CASE("inseparable root clusters raise a conditioning error") {
    // two multiplicity-20 roots only 0.05 apart: their eigenvalue clouds
    // overlap, which double precision cannot disentangle
    Filter w = Filter::delta();
    for (int i = 0; i < 20; ++i) w = convolve(w, Filter({1.0, 1.0}));
    for (int i = 0; i < 20; ++i) w = convolve(w, Filter({1.05, 1.0}));
    try {
        factorize_filter(w, 2);
        FAIL("expected ConditioningError");
    } catch (const ConditioningError& e) {
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("factorize rejects bad parameters") {
    CHECK_THROWS_AS(factorize_filter(Filter({1, 2, 3}), 1), ParameterError);
    CHECK_THROWS_AS(build_w1_sequence(0, 1), ParameterError);
}
