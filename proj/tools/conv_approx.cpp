// conv-approx: build, evaluate and audit the constructed networks, factorize
// filters, print bound reports, and run the rate-sweep / ERM experiments.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convapprox/bounds.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/harness.hpp"
#include "convapprox/netbuild.hpp"
#include "convapprox/neteval.hpp"
#include "convapprox/polyfactor.hpp"
#include "convapprox/serialize.hpp"

namespace ca = convapprox;

namespace {

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) std::cout << text;
    else ca::write_text_file(output, text);
}

ca::NetworkSpec build_from_config(const ca::json& cfg) {
    const std::string kind = cfg.at("kind").get<std::string>();
    const int d = cfg.at("d").get<int>();
    const int s = cfg.at("s").get<int>();
    const int n = cfg.at("N").get<int>();
    if (kind == "radial") {
        const ca::TargetFunction f = ca::target_from_json(cfg.at("f"), 0.0, 1.0);
        return ca::build_radial_network(f, d, s, n);
    }
    if (kind != "composite") throw ca::IoError("build: kind must be 'radial' or 'composite'");
    const ca::FeaturePolynomial poly = ca::feature_polynomial_from_json(cfg.at("Q"), d);
    const ca::TargetFunction f = ca::target_from_json(cfg.at("f"), -poly.b_q, poly.b_q);
    return ca::build_composite_network(f, poly, d, s, n, cfg.value("seed", std::uint64_t{0}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downsampled convolutional network constructions and experiments"};
    app.require_subcommand(1);

    std::string config_path, output_path, network_path, input_path, point_text;
    std::string format = "csv";

    auto* build = app.add_subcommand("build", "Build a network from a JSON config");
    build->add_option("--config", config_path, "config JSON")->required();
    build->add_option("--output", output_path, "where to write the network JSON");

    auto* eval = app.add_subcommand("eval", "Evaluate a stored network at a point");
    eval->add_option("--network", network_path, "network JSON")->required();
    eval->add_option("--point", point_text, "comma-separated coordinates")->required();

    auto* factorize = app.add_subcommand("factorize", "Factor a filter into short filters");
    int factor_s = 2;
    factorize->add_option("--input", input_path, "JSON array of filter coefficients")->required();
    factorize->add_option("--s", factor_s, "filter length budget")->check(CLI::Range(2, 64));
    factorize->add_option("--output", output_path, "where to write factors JSON");

    auto* bounds_cmd = app.add_subcommand("bounds", "Print the bound report for a configuration");
    std::string bounds_kind = "composite";
    int b_d = 3, b_q = 2, b_s = 2, b_n = 4;
    double b_alpha = 1.0, b_seminorm = 1.0, b_fsup = 1.0, b_bq = 1.0, b_q0 = 0.0;
    double b_beta_l1 = 1.0, b_xi_lead = 1.0, b_eta = 0.5;
    long long b_m = 256;
    bounds_cmd->add_option("--kind", bounds_kind)->check(CLI::IsMember({"composite", "radial"}));
    bounds_cmd->add_option("--d", b_d);
    bounds_cmd->add_option("--q", b_q);
    bounds_cmd->add_option("--s", b_s);
    bounds_cmd->add_option("--N", b_n);
    bounds_cmd->add_option("--alpha", b_alpha);
    bounds_cmd->add_option("--f-seminorm", b_seminorm);
    bounds_cmd->add_option("--f-sup", b_fsup);
    bounds_cmd->add_option("--B-Q", b_bq);
    bounds_cmd->add_option("--Q0", b_q0);
    bounds_cmd->add_option("--beta-l1", b_beta_l1);
    bounds_cmd->add_option("--xi-lead", b_xi_lead);
    bounds_cmd->add_option("--eta", b_eta);
    bounds_cmd->add_option("--m", b_m);

    auto* sweep = app.add_subcommand("rate-sweep", "Approximation-rate sweep over N");
    sweep->add_option("--config", config_path, "SweepConfig JSON")->required();
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output", output_path, "report path (default: config's output)");

    auto* erm = app.add_subcommand("erm-fit", "Convex outer-coefficient ERM experiment");
    erm->add_option("--config", config_path, "ErmConfig JSON")->required();
    erm->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    erm->add_option("--output", output_path, "report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            const ca::NetworkSpec spec = build_from_config(ca::load_json_file(config_path));
            emit(ca::network_to_json(spec).dump(2) + "\n", output_path);
        } else if (eval->parsed()) {
            const ca::NetworkSpec spec = ca::network_from_json(ca::load_json_file(network_path));
            const ca::EvalTrace trace = ca::forward(spec, parse_point(point_text));
            ca::json out{{"output", trace.output}, {"outside_domain", trace.outside_domain}};
            std::cout << out.dump(2) << "\n";
        } else if (factorize->parsed()) {
            const ca::Filter w = ca::filter_from_json(ca::load_json_file(input_path));
            const ca::Factorization fac = ca::factorize_filter(w, factor_s);
            emit(ca::factorization_to_json(fac).dump(2) + "\n", output_path);
        } else if (bounds_cmd->parsed()) {
            const ca::NetworkKind kind = bounds_kind == "radial" ? ca::NetworkKind::radial
                                                                 : ca::NetworkKind::composite;
            const ca::BoundReport rep =
                ca::bound_report(kind, b_d, b_q, b_s, b_n, b_alpha, b_seminorm, b_fsup, b_bq,
                                 b_q0, b_beta_l1, b_xi_lead, b_eta, b_m);
            std::cout << ca::bound_report_to_json(rep).dump(2) << "\n";
        } else if (sweep->parsed()) {
            const ca::SweepConfig cfg = ca::sweep_config_from_json(ca::load_json_file(config_path));
            const ca::SweepResult result = ca::rate_sweep(cfg);
            const std::string path = !output_path.empty() ? output_path : cfg.output;
            if (path.empty()) {
                std::cout << (format == "json" ? ca::sweep_json(result) : ca::sweep_csv(result.rows));
            } else {
                ca::report(result, format, path);
            }
            std::cerr << "slope: " << result.slope << "\n";
        } else if (erm->parsed()) {
            const ca::ErmConfig cfg = ca::erm_config_from_json(ca::load_json_file(config_path));
            const std::vector<ca::ErmRow> rows = ca::erm_c_fit(cfg);
            if (output_path.empty()) {
                std::cout << (format == "json" ? ca::erm_json(rows) : ca::erm_csv(rows));
            } else {
                ca::report(rows, format, output_path);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
