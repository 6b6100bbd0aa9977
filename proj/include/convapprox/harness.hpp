#ifndef CONVAPPROX_HARNESS_HPP
#define CONVAPPROX_HARNESS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "convapprox/netbuild.hpp"
#include "convapprox/ridge.hpp"

namespace convapprox {

/// A measured sup error above its printed bound. Never downgraded to a row
/// note: the sweep aborts on it.
struct BoundViolation : std::runtime_error {
    explicit BoundViolation(const std::string& what) : std::runtime_error(what) {}
};

/// One rate-sweep experiment: build one network per N, measure the sup error
/// against the target over seeded ball samples plus the axis points, and
/// compare with the printed bound.
struct SweepConfig {
    NetworkKind kind = NetworkKind::radial;
    int d = 0;
    int s = 0;
    int q = 0;
    nlohmann::json f;          // target descriptor (named family + parameters)
    FeaturePolynomial poly;    // composite targets only
    bool has_poly = false;
    std::vector<int> n_list;
    int samples = 2000;
    std::uint64_t seed = 0;
    std::string output;
};

struct SweepRow {
    int n = 0;
    double measured = 0.0;
    double bound = 0.0;
    long long params = 0;
    long long param_bound = 0;
    int depth = 0;
    double seconds = 0.0;
    bool built = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;  // least-squares slope of log(measured) vs log(N)
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepResult rate_sweep(const SweepConfig& cfg);

/// Convex outer-coefficient ERM: draw m noisy samples of the target, fit c
/// by least squares under the hypothesis-space cap, report the truncated
/// test risk on a fresh sample.
struct ErmConfig {
    NetworkKind kind = NetworkKind::radial;
    int d = 0;
    int s = 0;
    int q = 0;
    nlohmann::json f;
    FeaturePolynomial poly;
    bool has_poly = false;
    std::vector<long long> m_list;
    std::vector<int> n_list;
    double noise = 0.0;
    double m_clamp = 1.0;  // the response clamp M
    std::uint64_t seed = 0;
    int test_samples = 10000;
};

struct ErmRow {
    long long m = 0;
    int n = 0;
    double risk = 0.0;
    bool ridge_flagged = false;  // normal equations needed regularization
};

ErmConfig erm_config_from_json(const nlohmann::json& j);
std::vector<ErmRow> erm_c_fit(const ErmConfig& cfg);

/// Deterministic report writers. CSV carries exactly one header line plus one
/// line per row; JSON additionally carries the fitted slope rounded to six
/// significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const SweepResult& result);
std::string erm_csv(const std::vector<ErmRow>& rows);
std::string erm_json(const std::vector<ErmRow>& rows);

/// Writes rows to path in the requested format ("csv" or "json").
void report(const SweepResult& result, const std::string& format, const std::string& path);
void report(const std::vector<ErmRow>& rows, const std::string& format, const std::string& path);

/// Builds the target over its native domain for a config (radial: [0,1];
/// composite: [-B_Q, B_Q]).
TargetFunction make_target(NetworkKind kind, const nlohmann::json& descriptor,
                           const FeaturePolynomial* poly);

}  // namespace convapprox

#endif
