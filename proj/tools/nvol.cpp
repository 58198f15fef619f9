// Command-line front end: parse germ/ideal files, dispatch computations,
// emit machine-readable JSON reports.
//
// Exit codes: 0 ok, 2 invalid germ/input, 3 invariant violation (NotPrimary,
// bad generators, ...), 4 domain error (boundary/unbounded), 5 internal limit
// (UnsupportedRank).

#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nvol/graded.hpp"
#include "nvol/io.hpp"
#include "nvol/minimize.hpp"
#include "nvol/monomial_ideal.hpp"
#include "nvol/valuation.hpp"

namespace {

using namespace nvol;

struct Classified {
    int code;
    const char* type;
};

Classified classify(const std::exception& e) {
    if (dynamic_cast<const UnsupportedRank*>(&e)) return {5, "UnsupportedRank"};
    if (dynamic_cast<const Unbounded*>(&e)) return {4, "Unbounded"};
    if (dynamic_cast<const IrrationalMode*>(&e)) return {4, "IrrationalMode"};
    if (dynamic_cast<const Infeasible*>(&e)) return {4, "Infeasible"};
    if (dynamic_cast<const UnboundedObjective*>(&e)) return {4, "UnboundedObjective"};
    if (dynamic_cast<const NotPrimary*>(&e)) return {3, "NotPrimary"};
    if (dynamic_cast<const EmptyIdeal*>(&e)) return {3, "EmptyIdeal"};
    if (dynamic_cast<const UnitIdeal*>(&e)) return {3, "UnitIdeal"};
    if (dynamic_cast<const GermMismatch*>(&e)) return {3, "GermMismatch"};
    if (dynamic_cast<const InvalidGenerator*>(&e)) return {3, "InvalidGenerator"};
    if (dynamic_cast<const NotQGorenstein*>(&e)) return {2, "NotQGorenstein"};
    if (dynamic_cast<const NotStronglyConvex*>(&e)) return {2, "NotStronglyConvex"};
    if (dynamic_cast<const NotFullDimensional*>(&e)) return {2, "NotFullDimensional"};
    if (dynamic_cast<const NoInteriorStart*>(&e)) return {4, "NoInteriorStart"};
    return {2, "Error"};
}

struct Output {
    std::string path;  // empty = stdout
    bool deterministic = false;

    void emit(Json j) const {
        if (!deterministic) {
            char buf[32];
            const std::time_t now = std::time(nullptr);
            std::tm tm{};
            gmtime_r(&now, &tm);
            std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
            j["timestamp"] = buf;
        }
        const std::string text = j.dump(2) + "\n";
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(path);
            if (!out) throw Error("cannot write output file: " + path);
            out << text;
        }
    }
};

VecQ parse_u(const std::string& text, int rank) {
    VecQ u;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) u.push_back(rat_from_string(item));
    if (static_cast<int>(u.size()) != rank)
        throw Unbounded("--u needs " + std::to_string(rank) + " comma-separated rationals");
    return u;
}

int cmd_check(const std::string& germ_file, const Output& out) {
    const GermPtr g = load_germ(germ_file);
    Json j = germ_json(*g);
    j["command"] = "check";
    j["valid"] = true;
    out.emit(j);
    return 0;
}

int cmd_lct(const std::string& germ_file, const std::string& ideal_file, const Output& out) {
    const GermPtr g = load_germ(germ_file);
    const MonomialIdeal a = load_ideal(ideal_file, g);
    Json j{{"command", "lct"}};
    const auto l = a.lct_extended();
    if (l) {
        j["lct"] = rat_json(*l);
    } else {
        j["lct"] = "inf";
    }
    out.emit(j);
    return 0;
}

int cmd_mult(const std::string& germ_file, const std::string& ideal_file,
             const Output& out) {
    const GermPtr g = load_germ(germ_file);
    const MonomialIdeal a = load_ideal(ideal_file, g);
    Json j{{"command", "mult"}, {"mult", rat_json(a.multiplicity())}};
    out.emit(j);
    return 0;
}

int cmd_nvol_eval(const std::string& germ_file, const std::string& u_text,
                  const Output& out) {
    const GermPtr g = load_germ(germ_file);
    const VecQ u = parse_u(u_text, g->rank());
    const ToricValuation v = ToricValuation::exact(g, u);
    Json j{{"command", "nvol-eval"},
           {"u", vecq_json(u)},
           {"A", rat_json(v.log_discrepancy())},
           {"vol", rat_json(v.volume())},
           {"nvol", rat_json(v.normalized_volume())}};
    out.emit(j);
    return 0;
}

int cmd_nvol_min(const std::string& germ_file, const MinimizeConfig& cfg,
                 const Output& out) {
    const GermPtr g = load_germ(germ_file);
    const MinimizationReport rep = minimize(g, cfg);
    Json j = report_json(rep);
    j["command"] = "nvol-min";
    const RationalityProbe probe = rationality_probe(rep, g, Int(10000));
    j["probe"] = Json{{"label", probe.label},
                      {"divisorial_candidate", probe.divisorial_candidate}};
    if (probe.divisorial_candidate) j["probe"]["direction"] = vecz_json(probe.direction);
    out.emit(j);
    return 0;
}

int cmd_converge(const std::string& germ_file, const std::string& u_text, int max_m,
                 const Output& out) {
    const GermPtr g = load_germ(germ_file);
    const VecQ u = parse_u(u_text, g->rank());
    const ToricValuation v = ToricValuation::exact(g, u);
    const int n = g->rank();
    const Rat vol = v.volume();
    Json rows = Json::array();
    bool all_bounds = true;
    Rat prev_doubling = -1;
    bool doubling_ok = true;
    Int fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    for (int m = 1; m <= max_m; ++m) {
        Rat mn = 1;
        for (int i = 0; i < n; ++i) mn *= m;
        const Int len = v.colength(Rat(m));
        const Rat colen_ratio = Rat(fact) * Rat(len) / mn;
        const Rat mult_ratio = v.valuation_ideal(Rat(m)).multiplicity() / mn;
        const bool bound = vol <= mult_ratio;
        all_bounds = all_bounds && bound;
        if ((m & (m - 1)) == 0) {  // doubling subsequence
            if (prev_doubling >= 0 && mult_ratio > prev_doubling) doubling_ok = false;
            prev_doubling = mult_ratio;
        }
        rows.push_back(Json{{"m", m},
                            {"colength", len.str()},
                            {"colength_ratio", rat_json(colen_ratio)},
                            {"mult_ratio", rat_json(mult_ratio)},
                            {"vol_le_mult_ratio", bound}});
    }
    Json j{{"command", "converge"},
           {"u", vecq_json(u)},
           {"A", rat_json(v.log_discrepancy())},
           {"vol", rat_json(vol)},
           {"rows", rows},
           {"lower_bound_holds", all_bounds},
           {"doubling_non_increasing", doubling_ok}};
    out.emit(j);
    return 0;
}

int cmd_lct_seq(const std::string& germ_file, const std::string& ideal_file,
                const std::string& u_text, int max_m, const Output& out) {
    const GermPtr g = load_germ(germ_file);
    Json j{{"command", "lct-seq"}};
    GradedSequence seq = [&] {
        if (!ideal_file.empty()) {
            j["kind"] = "powers-of-ideal";
            return GradedSequence::powers(load_ideal(ideal_file, g));
        }
        if (u_text.empty()) throw Error("lct-seq needs an ideal file or --u");
        j["kind"] = "valuation-ideals";
        const VecQ u = parse_u(u_text, g->rank());
        return GradedSequence::valuation_ideals(ToricValuation::exact(g, u));
    }();
    const int m_max = max_m > 0 ? max_m : seq.default_truncation();
    const auto l = lct_sequence(seq, m_max);
    Json trend = Json::array();
    for (std::size_t i = 0; i < l.trend.size(); ++i)
        trend.push_back(Json{{"m", i + 1}, {"m_lct", rat_json(l.trend[i])}});
    j["trend"] = trend;
    j["lower_bound"] = rat_json(l.lower);
    if (seq.at(1).is_primary()) {
        const auto e = mult_sequence(seq, m_max);
        Json mt = Json::array();
        for (std::size_t i = 0; i < e.trend.size(); ++i)
            mt.push_back(Json{{"m", i + 1}, {"mult_ratio", rat_json(e.trend[i])}});
        j["mult_trend"] = mt;
        j["mult_estimate"] = rat_json(e.estimate);
        Rat ln = 1;
        for (int i = 0; i < g->rank(); ++i) ln *= l.lower;
        j["normalized_multiplicity"] = rat_json(ln * e.estimate);
    }
    out.emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"normalized volumes of Q-Gorenstein toric singularities"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand arguments

    Output out;
    app.add_option("--output", out.path, "write the JSON report to a file");
    app.add_flag("--deterministic", out.deterministic,
                 "suppress the timestamp for byte-identical reports");

    std::string germ_file, ideal_file, u_text;
    int max_m = 12;
    MinimizeConfig cfg;

    auto* check = app.add_subcommand("check", "validate a germ file");
    check->add_option("germ", germ_file)->required();

    auto* lct = app.add_subcommand("lct", "log canonical threshold of a monomial ideal");
    lct->add_option("germ", germ_file)->required();
    lct->add_option("ideal", ideal_file)->required();

    auto* mult = app.add_subcommand("mult", "Hilbert-Samuel multiplicity");
    mult->add_option("germ", germ_file)->required();
    mult->add_option("ideal", ideal_file)->required();

    auto* eval = app.add_subcommand("nvol-eval", "A, vol, nvol of a toric valuation");
    eval->add_option("germ", germ_file)->required();
    eval->add_option("--u", u_text, "rational coordinates a,b,...")->required();

    auto* minimize_cmd = app.add_subcommand("nvol-min", "minimize nvol over Int(sigma)");
    minimize_cmd->add_option("germ", germ_file)->required();
    minimize_cmd->add_option("--tol", cfg.tol, "simplex diameter tolerance");
    minimize_cmd->add_option("--starts", cfg.starts, "number of multistart runs");
    minimize_cmd->add_option("--seed", cfg.seed, "PRNG seed");
    minimize_cmd->add_option("--max-evals", cfg.max_evals, "per-start eval budget");

    auto* converge = app.add_subcommand("converge", "colength and multiplicity trends");
    converge->add_option("germ", germ_file)->required();
    converge->add_option("--u", u_text, "rational coordinates a,b,...")->required();
    converge->add_option("--max-m", max_m, "largest index in the table");

    auto* lct_seq = app.add_subcommand("lct-seq", "graded-sequence trends");
    lct_seq->add_option("germ", germ_file)->required();
    lct_seq->add_option("ideal", ideal_file, "powers of this ideal");
    lct_seq->add_option("--u", u_text, "valuation-ideal sequence of v_u");
    lct_seq->add_option("--max-m", max_m, "truncation (default per rank)")->default_val(0);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(germ_file, out);
        if (lct->parsed()) return cmd_lct(germ_file, ideal_file, out);
        if (mult->parsed()) return cmd_mult(germ_file, ideal_file, out);
        if (eval->parsed()) return cmd_nvol_eval(germ_file, u_text, out);
        if (minimize_cmd->parsed()) return cmd_nvol_min(germ_file, cfg, out);
        if (converge->parsed()) return cmd_converge(germ_file, u_text, max_m, out);
        if (lct_seq->parsed())
            return cmd_lct_seq(germ_file, ideal_file, u_text, max_m, out);
    } catch (const std::exception& e) {
        const Classified c = classify(e);
        Json j{{"error", Json{{"type", c.type}, {"message", e.what()}}}};
        out.emit(j);
        return c.code;
    }
    return 1;
}
