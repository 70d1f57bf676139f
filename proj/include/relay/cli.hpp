#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relay/analytic.hpp"
#include "relay/cost.hpp"
#include "relay/density.hpp"
#include "relay/errors.hpp"
#include "relay/lloyd.hpp"
#include "relay/scenario_io.hpp"
#include "relay/sweep.hpp"

namespace relay {

inline constexpr const char* kVersion = "0.1.0";

namespace cli_detail {

struct CommonFlags {
    std::string scenario_path;
    double lambda = 1.0;
    std::string lambda_grid_spec;
    int n = 0;  // 0: take from scenario file
    std::string mode = "centralized";
    std::uint64_t seed = 1;
    std::size_t samples = 200000;
    int restarts = 10;
    int max_iterations = 200;
    std::string out;
    std::string format = "csv";
};

inline Mode parse_mode(const std::string& s) {
    if (s == "centralized") return Mode::centralized;
    if (s == "distributed") return Mode::distributed;
    throw usage_error("mode must be centralized or distributed, got " + s);
}

// "log:LO:HI:COUNT" or a comma-separated list; "0," prefix allowed.
inline std::vector<double> parse_lambda_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.rfind("log:", 0) == 0) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        if (std::sscanf(spec.c_str(), "log:%lf:%lf:%d", &lo, &hi, &count) !=
                3 ||
            !(lo > 0.0) || !(hi > lo) || count < 2)
            throw usage_error("bad --lambda-grid spec: " + spec);
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            grid.push_back(lo * std::pow(hi / lo, t));
        }
        return grid;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) grid.push_back(std::stod(tok));
    if (grid.empty()) throw usage_error("bad --lambda-grid spec: " + spec);
    return grid;
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numerical_error("cannot open output file: " + path);
    out << text;
}

inline nlohmann::json meta_json(const CommonFlags& f,
                                const std::string& command) {
    return {{"version", kVersion},
            {"command", command},
            {"seed", f.seed},
            {"samples", f.samples},
            {"mode", f.mode},
            {"n", f.n},
            {"lambda", f.lambda}};
}

inline nlohmann::json rows_json(const std::vector<ResultsRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"mode", r.mode},
                       {"n", r.n},
                       {"lambda", r.lambda},
                       {"p_uav", r.p_uav},
                       {"p_gt", r.p_gt},
                       {"se_uav", r.se_uav},
                       {"se_gt", r.se_gt}});
    return arr;
}

inline nlohmann::json deployment_json(const std::vector<DeploymentRow>& rows,
                                      int dim) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json o = {{"run_id", r.run_id},
                            {"relay_index", r.relay_index},
                            {"x", r.position[0]}};
        if (dim == 2) o["y"] = r.position[1];
        arr.push_back(o);
    }
    return arr;
}

inline std::vector<DeploymentRow> to_rows(const Deployment& U, int run_id) {
    std::vector<DeploymentRow> rows;
    for (std::size_t i = 0; i < U.size(); ++i)
        rows.push_back({run_id, static_cast<int>(i), U.positions[i]});
    return rows;
}

inline EvalConfig make_eval_config(const Scenario& sc, const CommonFlags& f,
                                   const std::string& method) {
    if (method == "quadrature" || (method.empty() && sc.dim() == 1)) {
        if (sc.dim() != 1)
            throw usage_error("quadrature evaluation requires dimension 1");
        return EvalConfig::quadrature();
    }
    return EvalConfig::monte_carlo(f.seed, f.samples);
}

}  // namespace cli_detail

// Full CLI entry point; argv excludes the program name.
inline int run_cli(const std::vector<std::string>& argv) {
    using namespace cli_detail;
    CLI::App app{"Power-optimal aerial relay deployment between ground "
                 "transmitter and receiver densities"};
    app.require_subcommand(1);
    CommonFlags f;
    std::string eval_method;
    std::string deployment_path;
    std::string hull_out;

    const auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
        auto* opt = cmd->add_option("--scenario", f.scenario_path,
                                    "Scenario file (JSON)");
        if (needs_scenario) opt->required();
        cmd->add_option("--n", f.n, "Relay count (default: scenario file)");
        cmd->add_option("--mode", f.mode,
                        "Selection mode: centralized|distributed");
        cmd->add_option("--seed", f.seed, "RNG seed");
        cmd->add_option("--samples", f.samples,
                        "Monte-Carlo sample count per restart/evaluation");
        cmd->add_option("--restarts", f.restarts, "Lloyd restarts");
        cmd->add_option("--max-iterations", f.max_iterations,
                        "Lloyd iteration cap");
        cmd->add_option("--out", f.out, "Output path (default: stdout)");
        cmd->add_option("--format", f.format, "Output format: csv|json");
    };

    auto* cmd_optimize =
        app.add_subcommand("optimize", "Lloyd-optimize a deployment at one "
                                       "lambda and evaluate it");
    add_common(cmd_optimize);
    cmd_optimize->add_option("--lambda", f.lambda, "Lagrange multiplier")
        ->required();
    std::string deploy_out;
    cmd_optimize->add_option("--deployment-out", deploy_out,
                             "Also write the deployment dump CSV here");
    cmd_optimize->add_option("--method", eval_method,
                             "Evaluation method: quadrature|monte_carlo");

    auto* cmd_eval = app.add_subcommand(
        "eval", "Evaluate an existing deployment dump at one lambda");
    add_common(cmd_eval);
    cmd_eval->add_option("--lambda", f.lambda, "Lagrange multiplier")
        ->required();
    cmd_eval->add_option("--deployment", deployment_path,
                         "Deployment dump CSV to evaluate")
        ->required();
    cmd_eval->add_option("--method", eval_method,
                         "Evaluation method: quadrature|monte_carlo");

    auto* cmd_sweep = app.add_subcommand(
        "sweep", "Trace the tradeoff curve over a lambda grid");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--lambda-grid", f.lambda_grid_spec,
                          "Grid spec: log:LO:HI:COUNT or comma list");
    cmd_sweep->add_option("--hull-out", hull_out,
                          "Also write the lower convex hull CSV here");
    cmd_sweep->add_option("--method", eval_method,
                          "Evaluation method: quadrature|monte_carlo");

    auto* cmd_analytic = app.add_subcommand(
        "analytic", "Closed-form tradeoff curves (r = 2)");
    add_common(cmd_analytic);
    bool single_relay = false;
    cmd_analytic->add_flag("--single-relay", single_relay,
                           "Single-relay curve instead of the asymptotic one");

    auto* cmd_deploy = app.add_subcommand(
        "deploy", "Inverse-transform deployment from the optimal point "
                  "density (d = 1)");
    add_common(cmd_deploy);
    cmd_deploy->add_option("--lambda", f.lambda, "Lagrange multiplier")
        ->required();

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Scenario sc = parse_scenario(f.scenario_path);
        if (f.n > 0) sc.n = f.n;
        f.n = sc.n;
        const Mode mode = parse_mode(f.mode);

        LloydConfig lloyd;
        lloyd.seed = f.seed;
        lloyd.sample_count = f.samples;
        lloyd.restarts = f.restarts;
        lloyd.max_iterations = f.max_iterations;

        if (*cmd_optimize || *cmd_eval) {
            Deployment U;
            if (*cmd_optimize) {
                U = optimize(sc, f.lambda, mode, lloyd).deployment;
            } else {
                std::ifstream in(deployment_path);
                if (!in)
                    throw parse_error("cannot open deployment file: " +
                                      deployment_path);
                for (const auto& row : read_deployment_csv(in, sc.dim()))
                    U.positions.push_back(row.position);
                if (U.positions.empty())
                    throw parse_error("deployment file has no rows");
            }
            SelectionRule rule{mode, f.lambda, {}};
            if (mode == Mode::distributed)
                rule.gr_side_costs = gr_side_costs(U, sc.fY, sc.h, sc.r);
            const PowerEstimate est =
                evaluate(U, rule, sc, make_eval_config(sc, f, eval_method));
            const std::vector<ResultsRow> rows{
                {f.mode, static_cast<int>(U.size()), f.lambda, est.p_uav,
                 est.p_gt, est.se_uav, est.se_gt}};
            const auto dep_rows = to_rows(U, 0);
            if (f.format == "json") {
                nlohmann::json doc = {
                    {"meta", meta_json(f, *cmd_optimize ? "optimize" : "eval")},
                    {"rows", rows_json(rows)},
                    {"deployment", deployment_json(dep_rows, sc.dim())}};
                write_text(f.out, doc.dump(2) + "\n");
            } else {
                write_text(f.out, results_csv(rows));
                if (!deploy_out.empty())
                    write_text(deploy_out, deployment_csv(dep_rows, sc.dim()));
            }
        } else if (*cmd_sweep) {
            SweepSpec spec;
            spec.n = sc.n;
            spec.mode = mode;
            spec.lloyd = lloyd;
            spec.eval = make_eval_config(sc, f, eval_method);
            if (!f.lambda_grid_spec.empty()) {
                spec.lambda_grid = parse_lambda_grid(f.lambda_grid_spec);
                std::sort(spec.lambda_grid.begin(), spec.lambda_grid.end());
            }
            const SweepResult result = sweep(sc, spec);
            const auto rows_of = [&](const std::vector<SweepPoint>& pts) {
                std::vector<ResultsRow> rows;
                for (const auto& p : pts)
                    rows.push_back({f.mode, sc.n, p.lambda, p.p_uav, p.p_gt,
                                    p.se_uav, p.se_gt});
                return rows;
            };
            if (f.format == "json") {
                nlohmann::json doc = {
                    {"meta", meta_json(f, "sweep")},
                    {"rows", rows_json(rows_of(result.raw_points))},
                    {"hull", rows_json(rows_of(result.hull_points))}};
                write_text(f.out, doc.dump(2) + "\n");
            } else {
                write_text(f.out, results_csv(rows_of(result.raw_points)));
                if (!hull_out.empty())
                    write_text(hull_out,
                               results_csv(rows_of(result.hull_points)));
            }
        } else if (*cmd_analytic) {
            if (sc.r != 2.0)
                throw usage_error("analytic curves require r = 2");
            const MomentSet m = moments(sc.fX, sc.fY);
            std::vector<double> grid = default_lambda_grid();
            grid.push_back(1e6);  // lambda -> infinity endpoint
            std::vector<ResultsRow> rows;
            const std::string label =
                single_relay || sc.n == 1 ? "single_relay" : f.mode;
            for (const double lambda : grid) {
                double p_uav = 0.0, p_gt = 0.0;
                if (label == "single_relay") {
                    const SingleUavPoint pt = single_uav_point(m, lambda, sc.h);
                    p_uav = pt.p_uav;
                    p_gt = pt.p_gt;
                } else {
                    std::tie(p_uav, p_gt) =
                        asymptotic_tradeoff(m, lambda, mode, sc.h);
                }
                rows.push_back({label, sc.n, lambda, p_uav, p_gt, 0.0, 0.0});
            }
            if (f.format == "json") {
                nlohmann::json doc = {{"meta", meta_json(f, "analytic")},
                                      {"rows", rows_json(rows)}};
                write_text(f.out, doc.dump(2) + "\n");
            } else {
                write_text(f.out, results_csv(rows));
            }
        } else if (*cmd_deploy) {
            if (sc.dim() != 1)
                throw unsupported_error("deploy supports d = 1 only");
            if (sc.r != 2.0 && mode == Mode::centralized)
                throw usage_error("deploy requires r = 2 for the Z density");
            GridDensity fz = mode == Mode::centralized
                                 ? combine_z(sc.fX, sc.fY, f.lambda, 2048)
                                 : rasterize(combine_w(sc.fX, sc.fY.mean(),
                                                       f.lambda),
                                             2048);
            const GridDensity ell = point_density(fz, sc.r);
            const Deployment U = inverse_transform_deployment(ell, sc.n);
            const auto dep_rows = to_rows(U, 0);
            if (f.format == "json") {
                nlohmann::json doc = {
                    {"meta", meta_json(f, "deploy")},
                    {"deployment", deployment_json(dep_rows, 1)}};
                write_text(f.out, doc.dump(2) + "\n");
            } else {
                write_text(f.out, deployment_csv(dep_rows, 1));
            }
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace relay
