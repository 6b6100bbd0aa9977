#include "convapprox/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "convapprox/bounds.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/neteval.hpp"
#include "convapprox/parallel.hpp"
#include "convapprox/rng.hpp"
#include "convapprox/serialize.hpp"

namespace convapprox {

namespace {

NetworkKind kind_from_string(const std::string& kind) {
    if (kind == "radial") return NetworkKind::radial;
    if (kind == "composite") return NetworkKind::composite;
    throw IoError("config: kind must be 'radial' or 'composite'");
}

void require_increasing(const std::vector<int>& ns) {
    for (size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw ParameterError("config: N list must be strictly increasing");
}

// Axis points first (0 and +-e_i, the known extrema), then the seeded ball
// sample. Streams are split per (row, purpose) so parallel evaluation cannot
// perturb the draw.
std::vector<std::vector<double>> measurement_points(int d, int samples, std::uint64_t seed,
                                                    std::uint64_t row_lane) {
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<size_t>(samples + 2 * d + 1));
    pts.emplace_back(static_cast<size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> e(static_cast<size_t>(d), 0.0);
            e[static_cast<size_t>(i)] = sign;
            pts.push_back(std::move(e));
        }
    }
    for (int k = 0; k < samples; ++k) {
        CounterRng rng(seed, "sweep-points", (row_lane << 32) | static_cast<std::uint64_t>(k));
        pts.push_back(sample_ball_point(rng, d));
    }
    return pts;
}

double fit_loglog_slope(const std::vector<SweepRow>& rows) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const SweepRow& row : rows) {
        if (!row.built || !(row.measured > 0.0)) continue;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.measured);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return 0.0;
    const double denom = count * sxx - sx * sx;
    return denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
}

double round_sig6(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

TargetFunction make_target(NetworkKind kind, const nlohmann::json& descriptor,
                           const FeaturePolynomial* poly) {
    if (kind == NetworkKind::radial) return target_from_json(descriptor, 0.0, 1.0);
    if (poly == nullptr) throw ParameterError("composite target requires a feature polynomial");
    return target_from_json(descriptor, -poly->b_q, poly->b_q);
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig cfg;
    cfg.kind = kind_from_string(j.at("kind").get<std::string>());
    cfg.d = j.at("d").get<int>();
    cfg.s = j.at("s").get<int>();
    cfg.q = j.value("q", cfg.kind == NetworkKind::radial ? 2 : 0);
    cfg.f = j.at("f");
    cfg.n_list = j.at("N").get<std::vector<int>>();
    cfg.samples = j.value("samples", 2000);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output = j.value("output", std::string{});
    if (cfg.s < 2 || cfg.s > cfg.d) throw ParameterError("config: need 2 <= s <= d");
    require_increasing(cfg.n_list);
    if (j.contains("Q")) {
        cfg.poly = feature_polynomial_from_json(j.at("Q"), cfg.d);
        cfg.has_poly = true;
        if (cfg.q == 0) cfg.q = std::max(cfg.poly.degree, 1);
    }
    if (cfg.kind == NetworkKind::composite && !cfg.has_poly)
        throw ParameterError("config: composite sweeps need a feature polynomial Q");
    return cfg;
}

SweepResult rate_sweep(const SweepConfig& cfg) {
    const TargetFunction f = make_target(cfg.kind, cfg.f, cfg.has_poly ? &cfg.poly : nullptr);

    SweepResult result;
    for (size_t row_idx = 0; row_idx < cfg.n_list.size(); ++row_idx) {
        const int n = cfg.n_list[row_idx];
        SweepRow row;
        row.n = n;
        const auto start = std::chrono::steady_clock::now();
        try {
            NetworkSpec spec =
                cfg.kind == NetworkKind::radial
                    ? build_radial_network(f, cfg.d, cfg.s, n)
                    : build_composite_network(f, cfg.poly, cfg.d, cfg.s, n, cfg.seed);

            const auto pts = measurement_points(cfg.d, cfg.samples, cfg.seed,
                                                static_cast<std::uint64_t>(row_idx));
            std::vector<double> errs(pts.size());
            parallel_for(static_cast<int>(pts.size()), [&](int i) {
                const std::vector<double>& x = pts[static_cast<size_t>(i)];
                double target = 0.0;
                if (cfg.kind == NetworkKind::radial) {
                    double norm_sq = 0.0;
                    for (double v : x) norm_sq += v * v;
                    target = f.eval_extended(norm_sq);
                } else {
                    target = f.eval_extended(cfg.poly.eval(x));
                }
                errs[static_cast<size_t>(i)] = std::abs(forward_value(spec, x) - target);
            });
            row.measured = *std::max_element(errs.begin(), errs.end());
            row.bound = approx_error_bound(cfg.kind, f.alpha, f.seminorm,
                                           cfg.kind == NetworkKind::radial
                                               ? static_cast<double>(cfg.d)
                                               : spec.meta.b_hat,
                                           n);
            row.params = count_free_parameters(spec);
            row.param_bound = param_count_bound(cfg.kind, cfg.d, spec.q, cfg.s, n);
            row.depth = spec.j2 + 1;
            row.built = true;
            if (row.measured > row.bound)
                throw BoundViolation("rate_sweep: measured error " + std::to_string(row.measured) +
                                     " exceeds the bound " + std::to_string(row.bound) +
                                     " at N = " + std::to_string(n));
        } catch (const BoundViolation&) {
            throw;
        } catch (const std::exception& e) {
            row.built = false;
            row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.rows.push_back(std::move(row));
    }
    result.slope = fit_loglog_slope(result.rows);
    return result;
}

ErmConfig erm_config_from_json(const nlohmann::json& j) {
    ErmConfig cfg;
    cfg.kind = kind_from_string(j.at("kind").get<std::string>());
    cfg.d = j.at("d").get<int>();
    cfg.s = j.at("s").get<int>();
    cfg.q = j.value("q", cfg.kind == NetworkKind::radial ? 2 : 0);
    cfg.f = j.at("f");
    cfg.m_list = j.at("m").get<std::vector<long long>>();
    cfg.n_list = j.at("N").get<std::vector<int>>();
    cfg.noise = j.value("noise", 0.0);
    cfg.m_clamp = j.at("M").get<double>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.test_samples = j.value("test_samples", 10000);
    if (!(cfg.m_clamp > 0.0)) throw ParameterError("config: M must be positive");
    if (cfg.s < 2 || cfg.s > cfg.d) throw ParameterError("config: need 2 <= s <= d");
    require_increasing(cfg.n_list);
    if (j.contains("Q")) {
        cfg.poly = feature_polynomial_from_json(j.at("Q"), cfg.d);
        cfg.has_poly = true;
        if (cfg.q == 0) cfg.q = std::max(cfg.poly.degree, 1);
    }
    if (cfg.kind == NetworkKind::composite && !cfg.has_poly)
        throw ParameterError("config: composite fits need a feature polynomial Q");
    return cfg;
}

std::vector<ErmRow> erm_c_fit(const ErmConfig& cfg) {
    const TargetFunction f = make_target(cfg.kind, cfg.f, cfg.has_poly ? &cfg.poly : nullptr);
    auto regression_value = [&](const std::vector<double>& x) {
        if (cfg.kind == NetworkKind::radial) {
            double norm_sq = 0.0;
            for (double v : x) norm_sq += v * v;
            return f.eval_extended(norm_sq);
        }
        return f.eval_extended(cfg.poly.eval(x));
    };

    // One fixed test sample for the whole table.
    std::vector<std::vector<double>> test_pts(static_cast<size_t>(cfg.test_samples));
    std::vector<double> test_truth(test_pts.size());
    for (int i = 0; i < cfg.test_samples; ++i) {
        CounterRng rng(cfg.seed, "erm-test", static_cast<std::uint64_t>(i));
        test_pts[static_cast<size_t>(i)] = sample_ball_point(rng, cfg.d);
        test_truth[static_cast<size_t>(i)] = regression_value(test_pts[static_cast<size_t>(i)]);
    }

    std::vector<ErmRow> rows;
    for (const int n : cfg.n_list) {
        NetworkSpec spec = cfg.kind == NetworkKind::radial
                               ? build_radial_network(f, cfg.d, cfg.s, n)
                               : build_composite_network(f, cfg.poly, cfg.d, cfg.s, n, cfg.seed);
        const int p = spec.fc_width();
        const double cap = n * radius_r_for(spec);

        Eigen::MatrixXd test_features(cfg.test_samples, p);
        parallel_for(cfg.test_samples, [&](int i) {
            const std::vector<double> phi = fc_features(spec, test_pts[static_cast<size_t>(i)]);
            for (int k = 0; k < p; ++k) test_features(i, k) = phi[static_cast<size_t>(k)];
        });

        for (const long long m : cfg.m_list) {
            std::vector<std::vector<double>> train_pts(static_cast<size_t>(m));
            std::vector<double> y(static_cast<size_t>(m));
            for (long long i = 0; i < m; ++i) {
                const std::uint64_t lane = (static_cast<std::uint64_t>(m) << 24) |
                                           static_cast<std::uint64_t>(i);
                CounterRng rng(cfg.seed, "erm-train", lane);
                train_pts[static_cast<size_t>(i)] = sample_ball_point(rng, cfg.d);
                CounterRng noise_rng(cfg.seed, "erm-noise", lane);
                const double value =
                    regression_value(train_pts[static_cast<size_t>(i)]) + cfg.noise * noise_rng.gaussian();
                y[static_cast<size_t>(i)] = std::clamp(value, -cfg.m_clamp, cfg.m_clamp);
            }

            Eigen::MatrixXd train_features(m, p);
            parallel_for(static_cast<int>(m), [&](int i) {
                const std::vector<double> phi = fc_features(spec, train_pts[static_cast<size_t>(i)]);
                for (int k = 0; k < p; ++k) train_features(i, k) = phi[static_cast<size_t>(k)];
            });

            Eigen::MatrixXd gram = train_features.transpose() * train_features;
            const Eigen::VectorXd rhs =
                train_features.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), m);

            ErmRow row;
            row.m = m;
            row.n = n;
            Eigen::VectorXd c = gram.ldlt().solve(rhs);
            const double rel_residual =
                (gram * c - rhs).norm() / std::max(rhs.norm(), 1e-300);
            if (!c.allFinite() || rel_residual > 1e-6) {
                gram.diagonal().array() += 1e-10 * std::max(gram.trace() / p, 1.0);
                c = gram.ldlt().solve(rhs);
                row.ridge_flagged = true;
            }
            for (int k = 0; k < p; ++k) c(k) = std::clamp(c(k), -cap, cap);

            double risk = 0.0;
            const Eigen::VectorXd predictions = test_features * c;
            for (int i = 0; i < cfg.test_samples; ++i) {
                const double diff =
                    truncate(predictions(i), cfg.m_clamp) - test_truth[static_cast<size_t>(i)];
                risk += diff * diff;
            }
            row.risk = risk / cfg.test_samples;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "N,measured,bound,params,param_bound,depth,seconds\n";
    char buf[256];
    for (const SweepRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%lld,%lld,%d,%.6g\n", row.n,
                      row.built ? row.measured : std::nan(""), row.built ? row.bound : std::nan(""),
                      row.params, row.param_bound, row.depth, row.seconds);
        out += buf;
    }
    return out;
}

std::string sweep_json(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : result.rows) {
        nlohmann::json r{{"N", row.n},          {"measured", row.measured},
                         {"bound", row.bound},  {"params", row.params},
                         {"param_bound", row.param_bound},
                         {"depth", row.depth},  {"seconds", row.seconds},
                         {"built", row.built}};
        if (!row.error.empty()) r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    nlohmann::json j{{"rows", rows}, {"slope", round_sig6(result.slope)}};
    return j.dump(2) + "\n";
}

std::string erm_csv(const std::vector<ErmRow>& rows) {
    std::string out = "m,N,risk,ridge_flagged\n";
    char buf[128];
    for (const ErmRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%d,%.12g,%d\n", row.m, row.n, row.risk,
                      row.ridge_flagged ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string erm_json(const std::vector<ErmRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const ErmRow& row : rows)
        out.push_back(nlohmann::json{{"m", row.m},
                                     {"N", row.n},
                                     {"risk", row.risk},
                                     {"ridge_flagged", row.ridge_flagged}});
    return out.dump(2) + "\n";
}

void report(const SweepResult& result, const std::string& format, const std::string& path) {
    if (result.rows.empty()) throw ParameterError("report: no rows");
    if (format == "csv") write_text_file(path, sweep_csv(result.rows));
    else if (format == "json") write_text_file(path, sweep_json(result));
    else throw ParameterError("report: unknown format '" + format + "'");
}

void report(const std::vector<ErmRow>& rows, const std::string& format, const std::string& path) {
    if (rows.empty()) throw ParameterError("report: no rows");
    if (format == "csv") write_text_file(path, erm_csv(rows));
    else if (format == "json") write_text_file(path, erm_json(rows));
    else throw ParameterError("report: unknown format '" + format + "'");
}

}  // namespace convapprox
