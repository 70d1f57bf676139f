#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relay/cost.hpp"
#include "relay/density.hpp"
#include "relay/errors.hpp"

namespace relay {

namespace io_detail {

inline Density parse_density(const nlohmann::json& arr, int dim,
                             const std::string& path) {
    if (!arr.is_array() || arr.empty())
        throw parse_error(path + ": expected a nonempty array of boxes");
    std::vector<MixtureComponent> comps;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string at = path + "[" + std::to_string(k) + "]";
        const auto& b = arr[k];
        if (!b.is_object()) throw parse_error(at + ": expected an object");
        for (const char* key : {"weight", "lo", "hi"})
            if (!b.contains(key))
                throw parse_error(at + "." + key + ": missing");
        MixtureComponent c;
        if (!b["weight"].is_number())
            throw parse_error(at + ".weight: expected a number");
        c.weight = b["weight"].get<double>();
        for (const char* key : {"lo", "hi"}) {
            const auto& v = b[key];
            if (!v.is_array() || static_cast<int>(v.size()) != dim)
                throw parse_error(at + "." + key + ": expected an array of " +
                                  std::to_string(dim) + " numbers");
            for (int j = 0; j < dim; ++j) {
                if (!v[j].is_number())
                    throw parse_error(at + "." + key + ": expected numbers");
                (key[0] == 'l' ? c.box.lo : c.box.hi)[j] = v[j].get<double>();
            }
        }
        for (int j = 0; j < dim; ++j)
            if (!(c.box.lo[j] < c.box.hi[j]))
                throw parse_error(at + ": lo must be < hi on every axis");
        comps.push_back(c);
    }
    try {
        return Density(dim, std::move(comps));
    } catch (const usage_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

}  // namespace io_detail

inline Scenario parse_scenario_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw parse_error("scenario: expected a JSON object");
    if (!doc.contains("dimension"))
        throw parse_error("dimension: missing");
    const int dim = doc["dimension"].get<int>();
    if (dim != 1 && dim != 2)
        throw parse_error("dimension: must be 1 or 2");
    for (const char* key : {"gt_density", "gr_density"})
        if (!doc.contains(key))
            throw parse_error(std::string(key) + ": missing");
    const auto number = [&](const char* key, double dflt) {
        if (!doc.contains(key)) return dflt;
        if (!doc[key].is_number())
            throw parse_error(std::string(key) + ": expected a number");
        return doc[key].get<double>();
    };
    Density fX = io_detail::parse_density(doc["gt_density"], dim, "gt_density");
    Density fY = io_detail::parse_density(doc["gr_density"], dim, "gr_density");
    try {
        return Scenario(std::move(fX), std::move(fY), number("h", 0.0),
                        number("r", 2.0), number("rho", 1.0),
                        static_cast<int>(number("n", 1.0)));
    } catch (const usage_error& e) {
        throw parse_error(e.what());
    }
}

inline Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open scenario file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return parse_scenario_json(doc);
}

inline nlohmann::json emit_scenario(const Scenario& sc) {
    const auto density = [&](const Density& f) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : f.components()) {
            nlohmann::json lo = nlohmann::json::array();
            nlohmann::json hi = nlohmann::json::array();
            for (int j = 0; j < f.dim(); ++j) {
                lo.push_back(c.box.lo[j]);
                hi.push_back(c.box.hi[j]);
            }
            arr.push_back({{"weight", c.weight}, {"lo", lo}, {"hi", hi}});
        }
        return arr;
    };
    return nlohmann::json{{"dimension", sc.dim()},
                          {"h", sc.h},
                          {"r", sc.r},
                          {"rho", sc.rho},
                          {"n", sc.n},
                          {"gt_density", density(sc.fX)},
                          {"gr_density", density(sc.fY)}};
}

// 17 significant digits: round-trips every double exactly.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ResultsRow {
    std::string mode;
    int n = 0;
    double lambda = 0.0;
    double p_uav = 0.0;
    double p_gt = 0.0;
    double se_uav = 0.0;
    double se_gt = 0.0;
};

inline std::string results_csv(const std::vector<ResultsRow>& rows) {
    std::ostringstream out;
    out << "mode,n,lambda,p_uav,p_gt,se_uav,se_gt\n";
    for (const auto& r : rows)
        out << r.mode << ',' << r.n << ',' << format_number(r.lambda) << ','
            << format_number(r.p_uav) << ',' << format_number(r.p_gt) << ','
            << format_number(r.se_uav) << ',' << format_number(r.se_gt)
            << '\n';
    return out.str();
}

inline std::vector<ResultsRow> read_results_csv(std::istream& in) {
    std::vector<ResultsRow> rows;
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("results csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ResultsRow r;
        std::string field;
        std::getline(ls, r.mode, ',');
        std::getline(ls, field, ',');
        r.n = std::stoi(field);
        const auto num = [&](double& dst) {
            std::getline(ls, field, ',');
            dst = std::stod(field);
        };
        num(r.lambda);
        num(r.p_uav);
        num(r.p_gt);
        num(r.se_uav);
        num(r.se_gt);
        rows.push_back(r);
    }
    return rows;
}

struct DeploymentRow {
    int run_id = 0;
    int relay_index = 0;
    Point position{0.0, 0.0};
};

inline std::string deployment_csv(const std::vector<DeploymentRow>& rows,
                                  int dim) {
    std::ostringstream out;
    out << (dim == 1 ? "run_id,relay_index,x\n" : "run_id,relay_index,x,y\n");
    for (const auto& r : rows) {
        out << r.run_id << ',' << r.relay_index << ','
            << format_number(r.position[0]);
        if (dim == 2) out << ',' << format_number(r.position[1]);
        out << '\n';
    }
    return out.str();
}

inline std::vector<DeploymentRow> read_deployment_csv(std::istream& in,
                                                      int dim) {
    std::vector<DeploymentRow> rows;
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("deployment csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        DeploymentRow r;
        std::string field;
        std::getline(ls, field, ',');
        r.run_id = std::stoi(field);
        std::getline(ls, field, ',');
        r.relay_index = std::stoi(field);
        std::getline(ls, field, ',');
        r.position[0] = std::stod(field);
        if (dim == 2) {
            std::getline(ls, field, ',');
            r.position[1] = std::stod(field);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace relay
