// Command-line front end: datum validation, normal forms, characters,
// weight multiplicities, root multiplicities, tensor decomposition and the
// relation checks, over datum files described in the README.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbb/charcalc.hpp"
#include "qbb/datum_io.hpp"
#include "qbb/exprparse.hpp"
#include "qbb/freealg.hpp"
#include "qbb/stringalg.hpp"
#include "qbb/ubase.hpp"
#include "qbb/verma.hpp"

using nlohmann::json;
using namespace qbb;

namespace {

std::vector<long long> parse_int_list(const std::string& src, size_t expect,
                                      const std::string& what) {
    std::vector<long long> out;
    std::stringstream ss(src);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoll(tok));
        } catch (...) {
            throw input_error("malformed " + what + " entry '" + tok + "'");
        }
    }
    if (out.size() != expect)
        throw input_error(what + " needs " + std::to_string(expect) + " comma-separated entries");
    return out;
}

std::string beta_string(const CartanDatum& D, const RootVec& beta) {
    std::string s;
    for (int i = 0; i < D.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(beta[(size_t)i]);
    }
    return s;
}

std::string lambda_string(const CartanDatum& D, const Weight& w) {
    std::string s;
    for (int i = 0; i < D.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w.h[(size_t)i]);
    }
    return s;
}

struct Options {
    std::string datum_path;
    std::string tau_path;
    std::string lambda, mu, beta, expr;
    int cutoff = 4;
    int safety_limit = 8;
    std::string format = "text";

    bool machine() const { return format == "machine"; }

    DatumFile load() const {
        DatumFile df = load_datum(datum_path);
        if (!tau_path.empty()) load_tau_overrides(tau_path, df.datum, df.tau);
        if (cutoff < 0 || cutoff > safety_limit)
            throw input_error("cutoff must lie in [0, " + std::to_string(safety_limit) +
                              "] (see --safety-limit)");
        return df;
    }
};

int cmd_validate(const Options& opt) {
    DatumFile df = load_datum(opt.datum_path);
    auto diag = df.datum.validate();
    if (opt.machine()) {
        json out = {{"command", "validate"},
                    {"datum", opt.datum_path},
                    {"valid", !diag.has_value()}};
        if (diag) out["diagnostic"] = *diag;
        std::cout << out.dump(2) << "\n";
    } else if (diag) {
        std::cout << "invalid: " << *diag << "\n";
    } else {
        std::cout << "valid\n";
    }
    return diag ? 1 : 0;
}

int cmd_normal_form(const Options& opt) {
    DatumFile df = opt.load();
    Algebra A(df.datum, df.tau, opt.cutoff);
    ExprParser parser(opt.expr, A);
    AlgebraElement x = parser.parse_element();
    if (opt.machine()) {
        json terms = json::array();
        for (const auto& [t, c] : x.terms) {
            json term;
            term["coefficient"] = c.to_string();
            json fw = json::array(), ew = json::array();
            for (const auto& l : t.f.w)
                fw.push_back({{"node", df.datum.names[(size_t)l.node]}, {"level", l.level}});
            for (const auto& l : t.e.w)
                ew.push_back({{"node", df.datum.names[(size_t)l.node]}, {"level", l.level}});
            term["f"] = fw;
            term["torus_h"] = t.t.h;
            term["torus_d"] = t.t.d;
            term["e"] = ew;
            terms.push_back(term);
        }
        json out = {{"command", "normal-form"}, {"input", opt.expr}, {"terms", terms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << A.to_string(x) << "\n";
    }
    return 0;
}

int cmd_character(const Options& opt) {
    DatumFile df = opt.load();
    CharacterCalculator calc(df.datum, opt.cutoff);
    Weight lam = weight_from_lambda_coeffs(
        df.datum, parse_int_list(opt.lambda, (size_t)df.datum.size(), "--lambda"));
    ConeSeries ch = calc.character(lam, opt.cutoff);
    if (opt.machine()) {
        json rows = json::array();
        for (const auto& beta : calc.cone_points(opt.cutoff))
            rows.push_back({{"beta", beta},
                            {"height", height(beta)},
                            {"multiplicity", coeff(ch, beta)}});
        json out = {{"command", "character"},
                    {"lambda", opt.lambda},
                    {"cutoff", opt.cutoff},
                    {"rows", rows}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "ch V(" << lambda_string(df.datum, lam) << ") through height " << opt.cutoff
                  << ":\n";
        for (const auto& beta : calc.cone_points(opt.cutoff))
            std::cout << "  height " << height(beta) << "  beta (" << beta_string(df.datum, beta)
                      << ")  mult " << coeff(ch, beta) << "\n";
    }
    return 0;
}

int cmd_weight_mult(const Options& opt) {
    DatumFile df = opt.load();
    RootVec beta = parse_int_list(opt.beta, (size_t)df.datum.size(), "--beta");
    if (!in_positive_cone(beta)) throw input_error("--beta must lie in the positive cone");
    int depth = static_cast<int>(height(beta));
    if (depth > opt.cutoff) throw input_error("--beta is deeper than the cutoff");
    Algebra A(df.datum, df.tau, depth);
    Weight lam = weight_from_lambda_coeffs(
        df.datum, parse_int_list(opt.lambda, (size_t)df.datum.size(), "--lambda"));
    if (!is_dominant(lam)) throw input_error("--lambda must be dominant");
    VermaModule M(A, lam, depth);
    long long mult = static_cast<long long>(matrix_rank(M.gram(beta)));
    if (opt.machine()) {
        json out = {{"command", "weight-mult"}, {"lambda", opt.lambda},
                    {"beta", beta},           {"multiplicity", mult},
                    {"verma_dim", M.data().dim_at(M.weight_of(beta))}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "dim V(lambda)_{lambda-beta} = " << mult << "\n";
    }
    return 0;
}

int cmd_root_mult(const Options& opt) {
    DatumFile df = opt.load();
    CharacterCalculator calc(df.datum, opt.cutoff);
    std::vector<long long> by_height(static_cast<size_t>(opt.cutoff) + 1, 0);
    for (const auto& [beta, m] : calc.multiplicities()) by_height[(size_t)height(beta)] += m;
    if (opt.machine()) {
        json rows = json::array();
        for (const auto& [beta, m] : calc.multiplicities())
            rows.push_back({{"beta", beta}, {"height", height(beta)}, {"multiplicity", m}});
        json out = {{"command", "root-mult"}, {"cutoff", opt.cutoff}, {"rows", rows}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "root multiplicities through height " << opt.cutoff << ":\n";
        for (const auto& [beta, m] : calc.multiplicities())
            std::cout << "  beta (" << beta_string(df.datum, beta) << ")  height "
                      << height(beta) << "  mult " << m << "\n";
        std::cout << "totals by height:";
        for (int h = 1; h <= opt.cutoff; ++h) std::cout << " " << by_height[(size_t)h];
        std::cout << "\n";
    }
    return 0;
}

int cmd_decompose(const Options& opt) {
    DatumFile df = opt.load();
    Weight lam = weight_from_lambda_coeffs(
        df.datum, parse_int_list(opt.lambda, (size_t)df.datum.size(), "--lambda"));
    Weight mu = weight_from_lambda_coeffs(
        df.datum, parse_int_list(opt.mu, (size_t)df.datum.size(), "--mu"));
    if (!is_dominant(lam) || !is_dominant(mu))
        throw input_error("--lambda and --mu must be dominant");
    int depth = opt.cutoff;
    for (;;) {
        Algebra A(df.datum, df.tau, depth);
        CharacterCalculator calc(df.datum, depth);
        VermaModule M1(A, lam, depth), M2(A, mu, depth);
        IrreducibleModule V1(M1), V2(M2);
        ModuleData T = tensor_modules(df.datum, V1.data(), V2.data(), depth);
        std::vector<std::pair<Weight, long long>> comps;
        try {
            comps = decompose(df.datum, T, calc);
        } catch (const consistency_error&) {
            // distinguish a truncation artifact from a genuine failure by
            // re-running one level deeper
            if (depth < opt.safety_limit) {
                ++depth;
                continue;
            }
            throw;
        }
        if (opt.machine()) {
            json rows = json::array();
            for (const auto& [nu, m] : comps)
                rows.push_back({{"lambda", lambda_string(df.datum, nu)},
                                {"h_pairings", nu.h},
                                {"multiplicity", m}});
            json out = {{"command", "decompose"}, {"lambda", opt.lambda}, {"mu", opt.mu},
                        {"cutoff", depth},        {"components", rows}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "V(" << opt.lambda << ") (x) V(" << opt.mu << ") within height " << depth
                      << ":\n";
            for (const auto& [nu, m] : comps)
                std::cout << "  V(" << lambda_string(df.datum, nu) << ")  multiplicity " << m
                          << "\n";
        }
        return 0;
    }
}

int cmd_check_relations(const Options& opt) {
    DatumFile df = opt.load();
    Algebra A(df.datum, df.tau, opt.cutoff);
    const CartanDatum& D = A.datum();
    int n = D.size();
    bool all_ok = true;
    json checks = json::array();
    auto report = [&](const std::string& name, bool ok) {
        all_ok = all_ok && ok;
        if (opt.machine())
            checks.push_back({{"check", name}, {"ok", ok}});
        else
            std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    };

    for (int i = 0; i < n; ++i) {
        if (!D.is_real(i)) continue;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            int lmax = D.is_real(j) ? 1 : opt.cutoff;
            for (int l = 1; l <= lmax; ++l) {
                long long b = 1 - (long long)l * D.a[i][j];
                if (b + l > opt.cutoff) continue;
                bool ok = A.serre_residual(i, j, l, false).is_zero() &&
                          A.serre_residual(i, j, l, true).is_zero();
                report("serre i=" + D.names[(size_t)i] + " (j,l)=(" + D.names[(size_t)j] + "," +
                           std::to_string(l) + ")",
                       ok);
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            if (D.a[i][j] != 0) continue;
            if (i == j && !D.is_isotropic(i)) continue;
            int kmax = D.is_real(i) ? 1 : opt.cutoff;
            for (int k = 1; k <= kmax; ++k) {
                int lmax = D.is_real(j) ? 1 : opt.cutoff;
                for (int l = (i == j ? k + 1 : 1); l <= lmax; ++l) {
                    if (k + l > opt.cutoff) continue;
                    bool ok = A.commute_residual(i, k, j, l, false).is_zero() &&
                              A.commute_residual(i, k, j, l, true).is_zero();
                    report("commute (" + D.names[(size_t)i] + "," + std::to_string(k) + ")x(" +
                               D.names[(size_t)j] + "," + std::to_string(l) + ")",
                           ok);
                }
            }
        }
    for (int i = 0; i < n; ++i) {
        int top = D.is_real(i) ? 1 : opt.cutoff;
        for (int k = 1; k <= top; ++k)
            for (int l = 1; l <= top; ++l) {
                bool ok = A.string_residual(i, k, l).is_zero();
                report("string i=" + D.names[(size_t)i] + " k=" + std::to_string(k) +
                           " l=" + std::to_string(l),
                       ok);
            }
        int dtop = std::min(top, 2);
        for (int k = 1; k <= dtop; ++k)
            for (int l = 1; l <= dtop; ++l) {
                bool ok = A.string_delta_residual(i, k, l).empty();
                report("delta-string i=" + D.names[(size_t)i] + " k=" + std::to_string(k) +
                           " l=" + std::to_string(l),
                       ok);
            }
    }

    // per-degree diagnostic: elimination dimension vs Lusztig-form Gram rank
    TauTable tau = df.tau;
    LusztigForm L(D, tau);
    json degrees = json::array();
    for (const auto& beta : A.graded_degrees()) {
        long long dim = A.dim_minus(beta);
        size_t rank = matrix_rank(L.gram_matrix(beta));
        if (opt.machine())
            degrees.push_back({{"beta", beta},
                               {"dim", dim},
                               {"gram_rank", rank},
                               {"radical", dim - (long long)rank}});
        else
            std::cout << "degree (" << beta_string(D, beta) << "): dim " << dim << ", form rank "
                      << rank << (dim == (long long)rank ? "" : "  <- radical present") << "\n";
    }

    if (opt.machine()) {
        json out = {{"command", "check-relations"},
                    {"cutoff", opt.cutoff},
                    {"all_ok", all_ok},
                    {"checks", checks},
                    {"degrees", degrees}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (all_ok ? "all residuals zero\n" : "RESIDUAL FAILURES PRESENT\n");
    }
    if (!all_ok) throw consistency_error("nonzero relation residual");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact symbolic computation for quantum Borcherds-Bozec algebras"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--safety-limit", opt.safety_limit,
                   "upper bound accepted for --cutoff (default 8)");

    auto add_common = [&](CLI::App* sub, bool needs_cutoff = true) {
        sub->add_option("--datum", opt.datum_path, "datum JSON file")->required();
        sub->add_option("--tau", opt.tau_path, "tau override JSON file");
        sub->add_option("--format", opt.format, "text | machine")
            ->check(CLI::IsMember({"text", "machine"}));
        if (needs_cutoff) sub->add_option("--cutoff", opt.cutoff, "height cutoff N (default 4)");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a datum file");
    add_common(validate, false);

    CLI::App* normal_form =
        app.add_subcommand("normal-form", "triangular normal form of a generator expression");
    add_common(normal_form);
    normal_form->add_option("expr", opt.expr, "expression, e.g. \"e[1,1] f[1,1]\"")->required();

    CLI::App* character = app.add_subcommand("character", "truncated character of V(lambda)");
    add_common(character);
    character->add_option("--lambda", opt.lambda, "Lambda-coefficients c1,...,cn")->required();

    CLI::App* weight_mult =
        app.add_subcommand("weight-mult", "dim V(lambda)_{lambda-beta} via the Gram rank");
    add_common(weight_mult);
    weight_mult->add_option("--lambda", opt.lambda, "Lambda-coefficients")->required();
    weight_mult->add_option("--beta", opt.beta, "root coordinates k1,...,kn")->required();

    CLI::App* root_mult = app.add_subcommand("root-mult", "root multiplicities dim g_beta");
    add_common(root_mult);

    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "decompose V(lambda) (x) V(mu) into irreducibles");
    add_common(decompose_cmd);
    decompose_cmd->add_option("--lambda", opt.lambda, "Lambda-coefficients")->required();
    decompose_cmd->add_option("--mu", opt.mu, "Lambda-coefficients")->required();

    CLI::App* check = app.add_subcommand("check-relations", "relation residuals and form ranks");
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opt);
        if (app.got_subcommand(normal_form)) return cmd_normal_form(opt);
        if (app.got_subcommand(character)) return cmd_character(opt);
        if (app.got_subcommand(weight_mult)) return cmd_weight_mult(opt);
        if (app.got_subcommand(root_mult)) return cmd_root_mult(opt);
        if (app.got_subcommand(decompose_cmd)) return cmd_decompose(opt);
        if (app.got_subcommand(check)) return cmd_check_relations(opt);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
