#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biruin/errors.hpp"
#include "biruin/joint.hpp"

namespace biruin {

// One computation request: the model plus numeric knobs.
//
// precision_bits selects the working mantissa width; the implementation
// rounds it up to the nearest supported width (64 = IEEE double, 128, 256,
// 512). Decimal parameters written as JSON strings are converted directly
// at that precision; plain JSON numbers are read as their shortest decimal
// form, which round-trips the intended literal in every width.
struct RunConfig {
    JointSpec model;
    int u_max = 12;
    int N = 20;
    unsigned precision_bits = 256;
    double trunc_eps = 1e-15;
    double es_tol = 1e-30;
    int window_cap = 4096;
    std::string out;  // CSV destination; empty writes no file
    bool svg = false;
};

namespace detail {

inline std::string number_text(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    throw ParameterError(std::string(what) + " must be a number or a decimal string");
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const char* where) {
    for (const auto& item : j.items()) {
        if (!item.key().empty() && item.key().front() == '_') continue;  // comment keys
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok)
            throw ParameterError("unknown key \"" + item.key() + "\" in " + where);
    }
}

inline MarginalSpec parse_marginal(const nlohmann::json& j, const char* where) {
    if (!j.is_object()) throw ParameterError(std::string(where) + " must be an object");
    const std::string kind = j.value("kind", std::string());
    if (kind == "poisson") {
        reject_unknown(j, {"kind", "rate"}, where);
        if (!j.contains("rate")) throw ParameterError(std::string(where) + ": poisson needs rate");
        return MarginalSpec::poisson(number_text(j.at("rate"), "rate"));
    }
    if (kind == "shifted_zeta") {
        reject_unknown(j, {"kind", "exponent"}, where);
        if (!j.contains("exponent"))
            throw ParameterError(std::string(where) + ": shifted_zeta needs exponent");
        return MarginalSpec::shifted_zeta(number_text(j.at("exponent"), "exponent"));
    }
    if (kind == "finite") {
        reject_unknown(j, {"kind", "pmf"}, where);
        if (!j.contains("pmf") || !j.at("pmf").is_array())
            throw ParameterError(std::string(where) + ": finite needs a pmf array");
        std::vector<std::string> pmf;
        for (const auto& v : j.at("pmf")) pmf.push_back(number_text(v, "pmf entry"));
        return MarginalSpec::finite(std::move(pmf));
    }
    throw ParameterError(std::string(where) +
                         ": kind must be poisson, shifted_zeta, or finite");
}

inline JointSpec parse_model(const nlohmann::json& j) {
    if (!j.is_object()) throw ParameterError("model must be an object");
    const std::string kind = j.value("kind", std::string());
    if (kind == "explicit") {
        reject_unknown(j, {"kind", "matrix"}, "model");
        if (!j.contains("matrix") || !j.at("matrix").is_array())
            throw ParameterError("explicit model needs a matrix array");
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : j.at("matrix")) {
            if (!row.is_array()) throw ParameterError("matrix rows must be arrays");
            std::vector<std::string> r;
            for (const auto& v : row) r.push_back(number_text(v, "matrix entry"));
            rows.push_back(std::move(r));
        }
        return JointSpec::explicit_matrix(std::move(rows));
    }
    if (kind == "product") {
        reject_unknown(j, {"kind", "x", "y"}, "model");
        if (!j.contains("x") || !j.contains("y"))
            throw ParameterError("product model needs x and y marginals");
        return JointSpec::product(parse_marginal(j.at("x"), "model.x"),
                                  parse_marginal(j.at("y"), "model.y"));
    }
    if (kind == "bivariate_poisson") {
        reject_unknown(j, {"kind", "lambda1", "lambda2", "lambda"}, "model");
        for (const char* k : {"lambda1", "lambda2", "lambda"})
            if (!j.contains(k))
                throw ParameterError(std::string("bivariate_poisson model needs ") + k);
        return JointSpec::bivariate_poisson(number_text(j.at("lambda1"), "lambda1"),
                                            number_text(j.at("lambda2"), "lambda2"),
                                            number_text(j.at("lambda"), "lambda"));
    }
    if (kind == "clayton") {
        reject_unknown(j, {"kind", "theta", "x", "y"}, "model");
        if (!j.contains("theta") || !j.contains("x") || !j.contains("y"))
            throw ParameterError("clayton model needs theta, x, and y");
        return JointSpec::clayton(number_text(j.at("theta"), "theta"),
                                  parse_marginal(j.at("x"), "model.x"),
                                  parse_marginal(j.at("y"), "model.y"));
    }
    throw ParameterError("model.kind must be explicit, product, bivariate_poisson, or clayton");
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ParameterError("config root must be an object");
    detail::reject_unknown(j,
                           {"model", "u_max", "N", "precision_bits", "trunc_eps", "es_tol",
                            "window_cap", "out", "svg"},
                           "config");
    if (!j.contains("model")) throw ParameterError("config needs a model");
    RunConfig c;
    c.model = detail::parse_model(j.at("model"));
    c.u_max = j.value("u_max", c.u_max);
    c.N = j.value("N", c.N);
    if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<unsigned>();
    if (j.contains("trunc_eps")) {
        const std::string t = detail::number_text(j.at("trunc_eps"), "trunc_eps");
        try {
            c.trunc_eps = std::stod(t);
        } catch (const std::exception&) {
            throw ParameterError("trunc_eps is not a number: " + t);
        }
    }
    if (j.contains("es_tol")) {
        const std::string t = detail::number_text(j.at("es_tol"), "es_tol");
        try {
            c.es_tol = std::stod(t);
        } catch (const std::exception&) {
            throw ParameterError("es_tol is not a number: " + t);
        }
    }
    c.window_cap = j.value("window_cap", c.window_cap);
    c.out = j.value("out", c.out);
    c.svg = j.value("svg", c.svg);

    if (c.u_max < 0 || c.u_max > 100000) throw ParameterError("u_max must lie in [0, 100000]");
    if (c.N < 2 || c.N > 1000000) throw ParameterError("N must lie in [2, 1000000]");
    if (c.precision_bits < 64) throw ParameterError("precision_bits must be at least 64");
    if (!(c.trunc_eps > 0) || c.trunc_eps >= 1)
        throw ParameterError("trunc_eps must lie in (0, 1)");
    if (!(c.es_tol >= 0)) throw ParameterError("es_tol must be >= 0");
    if (c.window_cap < 2) throw ParameterError("window_cap must be >= 2");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j);
}

}  // namespace biruin
