#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "qbb/cartan.hpp"
#include "qbb/exprparse.hpp"
#include "qbb/freealg.hpp"

namespace qbb {

struct DatumFile {
    CartanDatum datum;
    TauTable tau;
};

inline int resolve_node(const CartanDatum& D, const std::string& token) {
    for (size_t i = 0; i < D.names.size(); ++i)
        if (D.names[i] == token) return static_cast<int>(i);
    try {
        size_t used = 0;
        long idx = std::stol(token, &used);
        if (used == token.size() && idx >= 1 && idx <= D.size()) return static_cast<int>(idx - 1);
    } catch (...) {
    }
    throw input_error("unknown node '" + token + "' in tau table");
}

inline void parse_tau_object(const nlohmann::json& obj, const CartanDatum& D, TauTable& tau) {
    for (const auto& [key, value] : obj.items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos)
            throw input_error("tau key '" + key + "' is not of the form node,level");
        int node = resolve_node(D, key.substr(0, comma));
        int level = 0;
        try {
            level = std::stoi(key.substr(comma + 1));
        } catch (...) {
            throw input_error("tau key '" + key + "' has a malformed level");
        }
        if (level < 1) throw input_error("tau level must be positive in key '" + key + "'");
        tau.set(node, level, parse_rational_function(value.get<std::string>()));
    }
}

/// Reads a datum file: fields `nodes` (names), `a` (row-major integer
/// matrix), `s` (positive integers), optional `tau` (strings keyed by
/// "node,level").
inline DatumFile load_datum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open datum file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    DatumFile out;
    try {
        if (j.contains("nodes")) out.datum.names = j.at("nodes").get<std::vector<std::string>>();
        out.datum.a = j.at("a").get<std::vector<std::vector<long long>>>();
        out.datum.s = j.at("s").get<std::vector<long long>>();
    } catch (const std::exception& e) {
        throw input_error("datum file " + path + " misses required fields: " + e.what());
    }
    if (out.datum.names.empty())
        for (size_t i = 0; i < out.datum.a.size(); ++i)
            out.datum.names.push_back(std::to_string(i + 1));
    if (out.datum.names.size() != out.datum.a.size())
        throw input_error("datum file: nodes and matrix size disagree");
    if (j.contains("tau")) parse_tau_object(j.at("tau"), out.datum, out.tau);
    return out;
}

/// Merges a standalone tau override file ({"tau": {...}} or a bare object).
inline void load_tau_overrides(const std::string& path, const CartanDatum& D, TauTable& tau) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open tau file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    parse_tau_object(j.contains("tau") ? j.at("tau") : j, D, tau);
}

} // namespace qbb
