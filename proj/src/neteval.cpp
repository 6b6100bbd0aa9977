#include "convapprox/neteval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convapprox/errors.hpp"

namespace convapprox {

EvalTrace forward(const NetworkSpec& spec, const std::vector<double>& x, bool capture) {
    if (static_cast<int>(x.size()) != spec.d)
        throw DimensionError("forward: input dimension mismatch");

    EvalTrace trace;
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;
    trace.outside_domain = norm_sq > 1.0 + 1e-12;

    std::vector<double> h = x;
    for (const ConvLayerSpec& layer : spec.layers) {
        h = apply_layer(layer, h);
        if (capture) trace.activations.push_back(h);
    }
    if (static_cast<int>(h.size()) != static_cast<int>(spec.fc_row.size()))
        throw DimensionError("forward: fully connected width mismatch");

    // All rows of the fully connected matrix are identical, so the matrix
    // product is one inner product replicated across the biases.
    double z = 0.0;
    for (size_t i = 0; i < h.size(); ++i) z += spec.fc_row[i] * h[i];

    double out = 0.0;
    std::vector<double> fc(static_cast<size_t>(spec.fc_width()));
    for (int j = 0; j < spec.fc_width(); ++j) {
        fc[static_cast<size_t>(j)] = relu(z - spec.fc_bias[static_cast<size_t>(j)]);
        out += spec.c[static_cast<size_t>(j)] * fc[static_cast<size_t>(j)];
    }
    if (capture) trace.fc_activation = std::move(fc);
    trace.output = out;
    return trace;
}

double forward_value(const NetworkSpec& spec, const std::vector<double>& x) {
    return forward(spec, x, false).output;
}

std::vector<double> fc_features(const NetworkSpec& spec, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != spec.d)
        throw DimensionError("fc_features: input dimension mismatch");
    std::vector<double> h = x;
    for (const ConvLayerSpec& layer : spec.layers) h = apply_layer(layer, h);
    double z = 0.0;
    for (size_t i = 0; i < h.size(); ++i) z += spec.fc_row[i] * h[i];
    std::vector<double> features(static_cast<size_t>(spec.fc_width()));
    for (int j = 0; j < spec.fc_width(); ++j)
        features[static_cast<size_t>(j)] = relu(z - spec.fc_bias[static_cast<size_t>(j)]);
    return features;
}

double truncate(double y, double m) {
    if (!(m > 0.0)) throw ParameterError("truncate: M must be positive");
    return std::clamp(y, -m, m);
}

namespace {

double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

MembershipReport check_membership(const NetworkSpec& spec, const Eigen::MatrixXd& fc_matrix,
                                  double r) {
    if (r < 2.0) throw ParameterError("check_membership: need R >= 2");
    MembershipReport report;

    // Filters: ||w^(j)||_inf <= R for every conv layer.
    double worst_filter = 0.0;
    for (const ConvLayerSpec& layer : spec.layers)
        worst_filter = std::max(worst_filter, layer.filter.linf_norm());
    report.constraints.push_back(
        {"filter_sup_norm", worst_filter <= r, worst_filter, r, false});

    // Biases: ||b^(j)||_inf <= (2(s+1)R)^j, compared as log||b|| <= j log(2(s+1)R)
    // because the right side overflows for deep networks. The fully connected
    // bias is layer J2+1.
    const double log_base = std::log(2.0 * (spec.s + 1) * r);
    double worst_bias_margin = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < spec.layers.size(); ++j) {
        const double norm = linf(spec.layers[j].bias);
        if (norm == 0.0) continue;
        worst_bias_margin =
            std::max(worst_bias_margin, std::log(norm) - static_cast<double>(j + 1) * log_base);
    }
    {
        const double norm = linf(spec.fc_bias);
        if (norm > 0.0)
            worst_bias_margin = std::max(
                worst_bias_margin, std::log(norm) - static_cast<double>(spec.layers.size() + 1) * log_base);
    }
    report.constraints.push_back(
        {"bias_log_margin", worst_bias_margin <= 0.0, worst_bias_margin, 0.0, true});

    // Output coefficients: ||c||_inf <= N R.
    const double c_norm = linf(spec.c);
    report.constraints.push_back({"c_sup_norm", c_norm <= spec.n * r, c_norm, spec.n * r, false});

    // Fully connected matrix: identical rows with l1-norm <= N^2 R.
    double row_l1 = 0.0;
    for (Eigen::Index i = 0; i < fc_matrix.rows(); ++i)
        row_l1 = std::max(row_l1, fc_matrix.row(i).cwiseAbs().sum());
    const double fc_limit = static_cast<double>(spec.n) * spec.n * r;
    report.constraints.push_back({"fc_row_l1", row_l1 <= fc_limit, row_l1, fc_limit, false});

    double row_spread = 0.0;
    for (Eigen::Index i = 1; i < fc_matrix.rows(); ++i)
        row_spread = std::max(row_spread, (fc_matrix.row(i) - fc_matrix.row(0)).cwiseAbs().maxCoeff());
    const double spread_tol = 1e-12 * std::max(1.0, fc_matrix.cwiseAbs().maxCoeff());
    report.constraints.push_back(
        {"fc_identical_rows", row_spread <= spread_tol, row_spread, spread_tol, false});

    // Middle-bias equality on every conv layer the architecture restricts
    // (all but the last one, whose bias encodes the knots).
    bool middle_ok = true;
    for (size_t j = 0; j + 1 < spec.layers.size(); ++j) {
        const int width_in = spec.meta.widths[j];
        if (!has_equal_middle_bias(spec.layers[j], width_in)) middle_ok = false;
    }
    report.constraints.push_back({"middle_bias_equality", middle_ok, middle_ok ? 0.0 : 1.0, 0.0, false});

    report.pass = std::all_of(report.constraints.begin(), report.constraints.end(),
                              [](const MembershipConstraint& c) { return c.pass; });
    return report;
}

MembershipReport check_membership(const NetworkSpec& spec, double r) {
    Eigen::MatrixXd fc(spec.fc_width(), static_cast<Eigen::Index>(spec.fc_row.size()));
    for (int j = 0; j < spec.fc_width(); ++j)
        for (size_t i = 0; i < spec.fc_row.size(); ++i)
            fc(j, static_cast<Eigen::Index>(i)) = spec.fc_row[i];
    return check_membership(spec, fc, r);
}

}  // namespace convapprox
