#include "convapprox/polyfactor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "convapprox/errors.hpp"

namespace convapprox {

namespace {

using cplx = std::complex<double>;

cplx horner(const std::vector<double>& c, cplx z) {
    cplx acc(0.0, 0.0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

cplx horner_deriv(const std::vector<double>& c, cplx z) {
    cplx acc(0.0, 0.0);
    for (size_t i = c.size(); i-- > 1;) acc = acc * z + c[i] * static_cast<double>(i);
    return acc;
}

// Simultaneous Aberth-Ehrlich correction pass over all roots.
void aberth_polish(const std::vector<double>& monic, std::vector<cplx>& roots) {
    const int n = static_cast<int>(roots.size());
    const int max_iter = 60;
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const cplx zi = roots[static_cast<size_t>(i)];
            const cplx p = horner(monic, zi);
            const cplx dp = horner_deriv(monic, zi);
            if (std::abs(dp) < 1e-290) continue;
            const cplx ratio = p / dp;
            cplx sum(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const cplx diff = zi - roots[static_cast<size_t>(j)];
                if (std::abs(diff) < 1e-290) continue;
                sum += 1.0 / diff;
            }
            const cplx denom = 1.0 - ratio * sum;
            if (std::abs(denom) < 1e-290) continue;
            const cplx step = ratio / denom;
            roots[static_cast<size_t>(i)] = zi - step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(zi)));
        }
        if (worst < 1e-15) break;
    }
}

// Snap near-real roots onto the axis and enforce exact conjugate symmetry;
// roots of a real polynomial must come back in conjugate pairs.
void symmetrize_conjugates(std::vector<cplx>& roots) {
    const double tol = 1e-9;
    std::vector<cplx> upper;
    std::vector<cplx> result;
    for (cplx& z : roots) {
        if (std::abs(z.imag()) <= tol * (1.0 + std::abs(z))) {
            result.emplace_back(z.real(), 0.0);
        } else if (z.imag() > 0) {
            upper.push_back(z);
        }
    }
    std::vector<cplx> lower;
    for (const cplx& z : roots)
        if (z.imag() < 0 && std::abs(z.imag()) > tol * (1.0 + std::abs(z))) lower.push_back(z);

    std::vector<bool> used(lower.size(), false);
    for (const cplx& z : upper) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < lower.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(std::conj(lower[j]) - z);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) {
            // Unpaired complex root of a real polynomial: numerical artifact,
            // force it onto the axis.
            result.emplace_back(z.real(), 0.0);
            continue;
        }
        used[static_cast<size_t>(best)] = true;
        const cplx avg = 0.5 * (z + std::conj(lower[static_cast<size_t>(best)]));
        result.push_back(avg);
        result.push_back(std::conj(avg));
    }
    for (size_t j = 0; j < lower.size(); ++j)
        if (!used[j]) result.emplace_back(lower[j].real(), 0.0);
    roots = std::move(result);
}

// A root item is either a single real root or a conjugate pair represented by
// its upper-half member.
struct RootItem {
    cplx z;
    bool pair = false;
    int deg() const { return pair ? 2 : 1; }
};

std::vector<RootItem> make_items(const std::vector<cplx>& roots) {
    std::vector<RootItem> items;
    for (const cplx& z : roots) {
        if (z.imag() > 0) items.push_back({z, true});
        else if (z.imag() == 0) items.push_back({z, false});
    }
    // Deterministic base order before the Leja pass.
    std::sort(items.begin(), items.end(), [](const RootItem& a, const RootItem& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return items;
}

// Order items so that each one maximizes the product of distances to the
// roots already chosen (Leja ordering). Scores are kept incrementally in the
// log domain; pair items are scored per root so pairs and singles compare
// fairly.
std::vector<RootItem> leja_order(std::vector<RootItem> items) {
    const size_t n = items.size();
    if (n <= 1) return items;
    std::vector<double> score(n, 0.0);
    std::vector<bool> taken(n, false);
    std::vector<RootItem> ordered;
    ordered.reserve(n);

    // Start from the item of largest modulus.
    size_t first = 0;
    for (size_t i = 1; i < n; ++i)
        if (std::abs(items[i].z) > std::abs(items[first].z)) first = i;

    auto log_dist = [](const cplx& a, const cplx& b) {
        const double d = std::abs(a - b);
        return std::log(std::max(d, 1e-280));
    };
    auto add_selected = [&](const RootItem& sel) {
        std::vector<cplx> pts{sel.z};
        if (sel.pair) pts.push_back(std::conj(sel.z));
        for (size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            for (const cplx& p : pts) {
                score[i] += log_dist(items[i].z, p);
                if (items[i].pair) score[i] += log_dist(std::conj(items[i].z), p);
            }
        }
    };

    taken[first] = true;
    ordered.push_back(items[first]);
    add_selected(items[first]);
    for (size_t step = 1; step < n; ++step) {
        size_t best = n;
        double best_score = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const double s = score[i] / static_cast<double>(items[i].deg());
            if (s > best_score) {
                best_score = s;
                best = i;
            }
        }
        taken[best] = true;
        ordered.push_back(items[best]);
        add_selected(items[best]);
    }
    return ordered;
}

Filter item_poly(const RootItem& item) {
    if (item.pair)
        return Filter({std::norm(item.z), -2.0 * item.z.real(), 1.0});
    return Filter({-item.z.real() + 0.0, 1.0});
}

// Fill factors greedily in Leja order. When the next item does not fit the
// open factor, scan ahead for one that does; close the factor only when
// nothing remaining fits. This keeps the factor count within ceil(M/(s-1)).
std::vector<Filter> group_into_factors(const std::vector<RootItem>& ordered, int s) {
    std::vector<Filter> factors;
    std::vector<bool> used(ordered.size(), false);
    size_t remaining = ordered.size();
    while (remaining > 0) {
        Filter factor = Filter::delta();
        int deg = 0;
        bool advanced = true;
        while (advanced && deg < s) {
            advanced = false;
            for (size_t i = 0; i < ordered.size(); ++i) {
                if (used[i] || deg + ordered[i].deg() > s) continue;
                factor = convolve(factor, item_poly(ordered[i]));
                deg += ordered[i].deg();
                used[i] = true;
                --remaining;
                advanced = true;
                break;
            }
        }
        factors.push_back(std::move(factor));
    }
    return factors;
}

Factorization assemble_factorization(const Filter& w, const std::vector<cplx>& roots,
                                     double scale, int s) {
    std::vector<RootItem> ordered = leja_order(make_items(roots));
    std::vector<Filter> factors = group_into_factors(ordered, s);
    if (factors.empty()) factors.push_back(Filter::delta());
    for (double& c : factors[0].coeffs) c *= scale;

    Factorization fac;
    fac.factors = std::move(factors);
    fac.scale_carrier_index = 0;

    const Filter recon = convolve_all(fac.factors);
    double res = 0.0;
    const int len = std::max(recon.support_len(), w.support_len());
    for (int i = 0; i < len; ++i) res = std::max(res, std::abs(recon[i] - w[i]));
    fac.residual = res;
    return fac;
}

// A root of multiplicity m is a simple root of the (m-1)-th derivative, so
// Newton on that derivative sharpens a cluster centroid to full precision.
cplx refine_multiple_root(const std::vector<double>& coeffs, int multiplicity, cplx start) {
    std::vector<double> p = coeffs;
    for (int k = 1; k < multiplicity && p.size() > 1; ++k) {
        std::vector<double> dp(p.size() - 1);
        double scale = 0.0;
        for (size_t i = 1; i < p.size(); ++i) {
            dp[i - 1] = p[i] * static_cast<double>(i);
            scale = std::max(scale, std::abs(dp[i - 1]));
        }
        if (scale > 0.0)
            for (double& v : dp) v /= scale;
        p = std::move(dp);
    }
    cplx z = start;
    for (int iter = 0; iter < 60; ++iter) {
        const cplx val = horner(p, z);
        const cplx dval = horner_deriv(p, z);
        if (std::abs(dval) < 1e-290) break;
        const cplx step = val / dval;
        z -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(z - start) > 1.0 + std::abs(start))
        return start;  // Newton wandered off; keep the centroid
    return z;
}

// Multiple roots come out of the eigensolver smeared into clusters of radius
// roughly eps^(1/multiplicity). Single-linkage clusters in the closed upper
// half-plane are replaced by their centroid, Newton-refined on the
// appropriate derivative, with the cluster's total multiplicity.
std::vector<cplx> cluster_roots(const std::vector<double>& monic, const std::vector<cplx>& roots,
                                double radius) {
    struct Member {
        cplx z;
        bool pair;
    };
    std::vector<Member> members;
    for (const cplx& z : roots) {
        if (z.imag() > 0) members.push_back({z, true});
        else if (z.imag() == 0) members.push_back({z, false});
    }
    const size_t n = members.size();
    std::vector<int> cluster_of(n, -1);
    int clusters = 0;
    for (size_t i = 0; i < n; ++i) {
        if (cluster_of[i] >= 0) continue;
        cluster_of[i] = clusters;
        // grow the cluster transitively
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t a = 0; a < n; ++a) {
                if (cluster_of[a] != clusters) continue;
                for (size_t b = 0; b < n; ++b) {
                    if (cluster_of[b] >= 0) continue;
                    if (std::abs(members[a].z - members[b].z) <= radius) {
                        cluster_of[b] = clusters;
                        grew = true;
                    }
                }
            }
        }
        ++clusters;
    }

    std::vector<cplx> merged;
    for (int c = 0; c < clusters; ++c) {
        cplx full_sum(0.0, 0.0);
        cplx upper_sum(0.0, 0.0);
        int full_count = 0;
        int upper_count = 0;
        int reals = 0;
        for (size_t i = 0; i < n; ++i) {
            if (cluster_of[i] != c) continue;
            if (members[i].pair) {
                full_sum += 2.0 * members[i].z.real();
                full_count += 2;
                upper_sum += members[i].z;
                ++upper_count;
            } else {
                full_sum += members[i].z;
                full_count += 1;
                ++reals;
            }
        }
        const cplx upper_centroid = upper_count > 0 ? upper_sum / static_cast<double>(upper_count)
                                                    : cplx(0.0, 0.0);
        if (reals > 0 || std::abs(upper_centroid.imag()) <= radius) {
            // self-conjugate cluster: one real root of full multiplicity
            const cplx centroid((full_sum / static_cast<double>(full_count)).real(), 0.0);
            const cplx refined = refine_multiple_root(monic, full_count, centroid);
            for (int m = 0; m < full_count; ++m) merged.emplace_back(refined.real(), 0.0);
        } else {
            const cplx refined = refine_multiple_root(monic, upper_count, upper_centroid);
            for (int m = 0; m < upper_count; ++m) {
                merged.push_back(refined);
                merged.push_back(std::conj(refined));
            }
        }
    }
    return merged;
}

Factorization factorize_from_roots(const Filter& w, const std::vector<cplx>& roots,
                                   double scale, int s, double residual_tol) {
    const double tol = residual_tol * std::max(w.linf_norm(), 1e-300);
    Factorization fac = assemble_factorization(w, roots, scale, s);
    if (fac.residual <= tol) return fac;

    // Retry with progressively coarser root clustering; this only runs when
    // the plain factorization already failed, and the residual check stays
    // the arbiter.
    std::vector<double> monic(w.coeffs);
    for (double& c : monic) c /= w.coeffs.back();
    double diameter = 0.0;
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            diameter = std::max(diameter, std::abs(roots[i] - roots[j]));
    Factorization best = fac;
    const double ladder[] = {1e-8, 1e-5, 1e-3,          1e-2, 5e-2,
                             2e-1, 5e-1, 0.5 * diameter, 1.01 * diameter};
    for (double radius : ladder) {
        if (radius <= 0.0) continue;
        const Factorization retry =
            assemble_factorization(w, cluster_roots(monic, roots, radius), scale, s);
        if (retry.residual < best.residual) best = retry;
        if (best.residual <= tol) return best;
    }
    throw ConditioningError("factorize_filter: reconstruction residual above tolerance",
                            best.residual);
}

}  // namespace

cplx SymbolPoly::eval(cplx z) const { return horner(coeffs.coeffs, z); }

std::vector<cplx> symbol_roots(const Filter& w) {
    // Degree-side zeros only define the degree; origin-side zeros are roots at 0.
    const double tol = 1e-14 * w.linf_norm();
    int hi = w.support_len() - 1;
    while (hi > 0 && std::abs(w[hi]) <= tol) --hi;
    int lo = 0;
    while (lo < hi && std::abs(w[lo]) <= tol) ++lo;
    if (hi <= 0) return {};

    std::vector<cplx> roots(static_cast<size_t>(lo), cplx(0.0, 0.0));
    const int deg = hi - lo;
    if (deg == 0) return roots;

    std::vector<double> monic(static_cast<size_t>(deg + 1));
    for (int i = 0; i <= deg; ++i) monic[static_cast<size_t>(i)] = w[lo + i] / w[hi];

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -monic[static_cast<size_t>(i)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symbol_roots: companion eigenvalue iteration failed");

    std::vector<cplx> inner(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) inner[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    aberth_polish(monic, inner);
    for (const cplx& z : inner)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("symbol_roots: root iteration diverged");
    symmetrize_conjugates(inner);
    roots.insert(roots.end(), inner.begin(), inner.end());
    return roots;
}

double cauchy_bound(const Filter& w) {
    const Filter t = w.trimmed();
    const int k = t.degree();
    double m = 0.0;
    for (int j = 0; j < k; ++j) m = std::max(m, std::abs(t[j] / t[k]));
    return 1.0 + m;
}

Factorization factorize_filter(const Filter& w, int s) {
    if (s < 2) throw ParameterError("factorize_filter: s must be >= 2");
    // Trim the degree side only; zeros at the low end are roots at the origin
    // and must survive so the factorization reproduces the original offsets.
    const double tol = 1e-14 * w.linf_norm();
    int hi = w.support_len() - 1;
    while (hi > 0 && std::abs(w[hi]) <= tol) --hi;
    Filter t(std::vector<double>(w.coeffs.begin(), w.coeffs.begin() + hi + 1));
    if (t.support_len() <= s + 1) {
        Factorization fac;
        fac.factors = {t};
        fac.scale_carrier_index = 0;
        fac.residual = 0.0;
        return fac;
    }
    const double scale = t.coeffs.back();
    return factorize_from_roots(t, symbol_roots(t), scale, s, 1e-6);
}

bool factor_coefficient_certificate(const Factorization& fac, const Filter& w_orig, int s) {
    const double bound = std::pow(static_cast<double>(s), 0.5 * s) *
                         std::pow(cauchy_bound(w_orig), static_cast<double>(s));
    for (const Filter& f : fac.factors) {
        const double top = f.coeffs.back();
        if (top == 0.0) return false;
        for (double c : f.coeffs)
            if (std::abs(c / top) > bound * (1.0 + 1e-12)) return false;
    }
    return true;
}

Filter build_w1_sequence(int n, int d_down) {
    if (n < 1 || d_down < 1) throw ParameterError("build_w1_sequence: N and D must be >= 1");
    std::vector<double> c(static_cast<size_t>((2 * n + 3) * d_down + 1), 0.0);
    for (int k = 0; k <= 2 * n + 3; ++k) c[static_cast<size_t>(k * d_down)] = 1.0;
    return Filter(std::move(c));
}

std::vector<cplx> w1_roots(int n, int d_down) {
    if (n < 1 || d_down < 1) throw ParameterError("w1_roots: N and D must be >= 1");
    const int period = 2 * n + 4;
    const int total = d_down * period;
    std::vector<cplx> roots;
    roots.reserve(static_cast<size_t>((2 * n + 3) * d_down));
    for (int l = 1; l < total; ++l) {
        if (l % period == 0) continue;
        const double theta = 2.0 * std::numbers::pi * l / total;
        roots.emplace_back(std::cos(theta), std::sin(theta));
    }
    return roots;
}

Factorization factorize_w1(int n, int d_down, int s) {
    if (s < 2) throw ParameterError("factorize_w1: s must be >= 2");
    const Filter w1 = build_w1_sequence(n, d_down);
    if (w1.support_len() <= s + 1) {
        Factorization fac;
        fac.factors = {w1};
        fac.residual = 0.0;
        return fac;
    }
    std::vector<cplx> roots = w1_roots(n, d_down);
    // Exact conjugate closure: keep the upper half, mirror it, and place -1
    // (present exactly when D is odd) as a real root.
    std::vector<cplx> closed;
    for (const cplx& z : roots) {
        if (std::abs(z.imag()) < 1e-15) closed.emplace_back(z.real(), 0.0);
        else closed.push_back(z);
    }
    return factorize_from_roots(w1, closed, 1.0, s, 1e-6);
}

}  // namespace convapprox
