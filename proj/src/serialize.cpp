#include "convapprox/serialize.hpp"

#include <fstream>

#include "convapprox/errors.hpp"

namespace convapprox {

json filter_to_json(const Filter& f) { return json(f.coeffs); }

Filter filter_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw IoError("filter: expected a nonempty JSON array");
    return Filter(j.get<std::vector<double>>());
}

json factorization_to_json(const Factorization& fac) {
    json factors = json::array();
    for (const Filter& f : fac.factors) factors.push_back(filter_to_json(f));
    return json{{"factors", factors},
                {"scale_carrier_index", fac.scale_carrier_index},
                {"residual", fac.residual}};
}

json feature_polynomial_to_json(const FeaturePolynomial& poly) {
    json j = json::object();
    for (const auto& [exps, coeff] : poly.monomials) j[json(exps).dump()] = coeff;
    return j;
}

FeaturePolynomial feature_polynomial_from_json(const json& j, int dim) {
    if (!j.is_object()) throw IoError("feature polynomial: expected a JSON object");
    std::map<std::vector<int>, double> monomials;
    for (const auto& [key, value] : j.items()) {
        json exps = json::parse(key, nullptr, false);
        if (exps.is_discarded() || !exps.is_array())
            throw IoError("feature polynomial: key is not a multi-index array: " + key);
        monomials[exps.get<std::vector<int>>()] = value.get<double>();
    }
    return FeaturePolynomial::from_monomials(dim, std::move(monomials));
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) return Eigen::MatrixXd();
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>();
    return m;
}

}  // namespace

json network_to_json(const NetworkSpec& spec) {
    json layers = json::array();
    for (const ConvLayerSpec& layer : spec.layers)
        layers.push_back(json{{"filter", layer.filter.coeffs},
                              {"bias", layer.bias},
                              {"downsample", layer.downsample > 1}});
    json meta{{"kind", spec.kind == NetworkKind::radial ? "radial" : "composite"},
              {"q", spec.q},
              {"B", spec.meta.b},
              {"B_hat", spec.meta.b_hat},
              {"B_Q", spec.meta.b_q},
              {"Q0", spec.meta.q0},
              {"beta_l1", spec.meta.beta_l1},
              {"n_q", spec.meta.n_q},
              {"d_down", spec.meta.d_down},
              {"widths", spec.meta.widths},
              {"f_alpha", spec.meta.f_alpha},
              {"f_seminorm", spec.meta.f_seminorm},
              {"f_sup", spec.meta.f_sup}};
    if (spec.meta.basis.n_q > 0) {
        meta["basis"] = matrix_to_json(spec.meta.basis.xi);
        meta["beta"] = matrix_to_json(spec.meta.beta);
    }
    return json{{"version", 1},
                {"d", spec.d},
                {"s", spec.s},
                {"N", spec.n},
                {"J1", spec.j1},
                {"J2", spec.j2},
                {"layers", layers},
                {"fc_row", spec.fc_row},
                {"fc_bias", spec.fc_bias},
                {"c", spec.c},
                {"meta", meta}};
}

NetworkSpec network_from_json(const json& j) {
    if (!j.is_object() || j.value("version", 0) != 1)
        throw IoError("network: missing or unsupported version");
    NetworkSpec spec;
    spec.d = j.at("d").get<int>();
    spec.s = j.at("s").get<int>();
    spec.n = j.at("N").get<int>();
    spec.j1 = j.at("J1").get<int>();
    spec.j2 = j.at("J2").get<int>();
    for (const json& layer_json : j.at("layers")) {
        ConvLayerSpec layer;
        layer.filter = Filter(layer_json.at("filter").get<std::vector<double>>());
        layer.bias = layer_json.at("bias").get<std::vector<double>>();
        layer.downsample = layer_json.at("downsample").get<bool>() ? spec.d : 0;
        spec.layers.push_back(std::move(layer));
    }
    spec.fc_row = j.at("fc_row").get<std::vector<double>>();
    spec.fc_bias = j.at("fc_bias").get<std::vector<double>>();
    spec.c = j.at("c").get<std::vector<double>>();

    const json& meta = j.at("meta");
    spec.kind = meta.value("kind", "composite") == "radial" ? NetworkKind::radial
                                                            : NetworkKind::composite;
    spec.q = meta.value("q", 0);
    spec.meta.b = meta.value("B", 0.0);
    spec.meta.b_hat = meta.value("B_hat", 0.0);
    spec.meta.b_q = meta.value("B_Q", 0.0);
    spec.meta.q0 = meta.value("Q0", 0.0);
    spec.meta.beta_l1 = meta.value("beta_l1", 0.0);
    spec.meta.n_q = meta.value("n_q", 0);
    spec.meta.d_down = meta.value("d_down", 0);
    spec.meta.widths = meta.value("widths", std::vector<int>{});
    spec.meta.f_alpha = meta.value("f_alpha", 1.0);
    spec.meta.f_seminorm = meta.value("f_seminorm", 0.0);
    spec.meta.f_sup = meta.value("f_sup", 0.0);
    if (meta.contains("basis")) {
        spec.meta.basis.xi = matrix_from_json(meta.at("basis"));
        spec.meta.basis.d = static_cast<int>(spec.meta.basis.xi.cols());
        spec.meta.basis.n_q = static_cast<int>(spec.meta.basis.xi.rows());
        spec.meta.basis.q = spec.q;
        spec.meta.beta = matrix_from_json(meta.at("beta"));
    }
    return spec;
}

json membership_to_json(const MembershipReport& report) {
    json constraints = json::array();
    for (const MembershipConstraint& c : report.constraints)
        constraints.push_back(json{{"name", c.name},
                                   {"pass", c.pass},
                                   {"measured", c.measured},
                                   {"limit", c.limit},
                                   {"log_domain", c.log_domain}});
    return json{{"pass", report.pass}, {"constraints", constraints}};
}

json bound_report_to_json(const BoundReport& report) {
    return json{{"B_hat", report.b_hat},
                {"R", report.r},
                {"A1", report.a1},
                {"A2", report.a2},
                {"covering_log", report.covering_log},
                {"approx_bound", report.approx_bound},
                {"gen_shape", report.gen_shape},
                {"N_star", report.n_star},
                {"param_bound", report.param_bound},
                {"log_domain_fields", json::array({"covering_log"})}};
}

TargetFunction target_from_json(const json& j, double lo, double hi) {
    const std::string name = j.at("name").get<std::string>();
    if (name == "identity") return target_identity(lo, hi);
    if (name == "constant") return target_constant(j.value("value", 1.0), lo, hi);
    if (name == "abs") return target_abs(j.value("a", 0.0), lo, hi);
    if (name == "sqrt") return target_sqrt();
    if (name == "sin") return target_sin(j.value("freq", 1.0), lo, hi);
    throw IoError("target: unknown family '" + name + "'");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw IoError("invalid JSON in " + path);
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace convapprox
