#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvol/errors.hpp"
#include "nvol/germ.hpp"
#include "nvol/graded.hpp"
#include "nvol/minimize.hpp"
#include "nvol/monomial_ideal.hpp"
#include "nvol/rational.hpp"

namespace nvol {

using Json = nlohmann::json;

/** Decimal-free exact rendering: "p/q", or just "p" for integers. */
inline std::string rat_to_string(const Rat& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error("malformed rational literal: " + s);
    }
}

inline std::string double_to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline Json rat_json(const Rat& q) {
    return Json{{"exact", rat_to_string(q)}, {"approx", to_double(q)}};
}

inline Json vecq_json(const VecQ& v) {
    Json arr = Json::array();
    for (const Rat& q : v) arr.push_back(rat_to_string(q));
    return arr;
}

inline Json vecz_json(const VecZ& v) {
    Json arr = Json::array();
    for (const Int& x : v) arr.push_back(x.str());
    return arr;
}

inline VecQ vecq_from_json(const Json& arr) {
    VecQ out;
    for (const auto& e : arr) {
        if (e.is_string())
            out.push_back(rat_from_string(e.get<std::string>()));
        else if (e.is_number_integer())
            out.push_back(Rat(e.get<long long>()));
        else
            throw Error("expected an integer or a \"p/q\" string");
    }
    return out;
}

/** Germ file: {"rank": n, "rays": [[...], ...], "name": optional}. */
inline GermPtr load_germ(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open germ file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("germ file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("rays") || !j["rays"].is_array())
        throw Error("germ file needs a \"rays\" array");
    std::vector<VecZ> rays;
    for (const auto& row : j["rays"]) {
        VecZ r;
        for (const auto& e : row) r.push_back(Int(e.get<long long>()));
        rays.push_back(std::move(r));
    }
    if (j.contains("rank")) {
        const int rank = j["rank"].get<int>();
        for (const VecZ& r : rays)
            if (static_cast<int>(r.size()) != rank)
                throw Error("ray length does not match the declared rank");
    }
    return build_germ(rays, j.value("name", std::string{}));
}

/** Ideal file: {"generators": [[...], ...], "germ": optional name tag}. */
inline MonomialIdeal load_ideal(const std::string& path, const GermPtr& germ) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ideal file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("ideal file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("generators") || !j["generators"].is_array())
        throw Error("ideal file needs a \"generators\" array");
    if (j.contains("germ") && !germ->name().empty() &&
        j["germ"].get<std::string>() != germ->name())
        throw GermMismatch("ideal file references germ \"" +
                           j["germ"].get<std::string>() + "\"");
    std::vector<VecZ> gens;
    for (const auto& row : j["generators"]) {
        VecZ g;
        for (const auto& e : row) g.push_back(Int(e.get<long long>()));
        gens.push_back(std::move(g));
    }
    return MonomialIdeal(germ, gens);
}

inline Json germ_json(const ToricGerm& g) {
    Json rays = Json::array();
    for (const VecZ& r : g.sigma().rays()) rays.push_back(vecz_json(r));
    Json dual = Json::array();
    for (const VecZ& r : g.sigma_dual().rays()) dual.push_back(vecz_json(r));
    Json out{{"rank", g.rank()},
             {"rays", rays},
             {"dual_rays", dual},
             {"w", vecq_json(g.gorenstein_covector())},
             {"gorenstein_index", g.gorenstein_index().str()}};
    if (!g.name().empty()) out["name"] = g.name();
    return out;
}

inline Json report_json(const MinimizationReport& r) {
    Json u = Json::array();
    for (double c : r.u_star) u.push_back(c);
    return Json{{"u_star", u},
                {"nvol_star", r.nvol_star},
                {"starts", r.starts},
                {"spread", r.spread},
                {"evaluations", r.evaluations},
                {"slice_residual", r.slice_residual}};
}

}  // namespace nvol
