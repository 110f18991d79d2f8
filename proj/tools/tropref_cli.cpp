#include "tropref/driver.hpp"
#include "tropref/io.hpp"
#include "tropref/menelaus.hpp"
#include "tropref/oracle.hpp"
#include "tropref/orientkit.hpp"
#include "tropref/rng.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

using namespace tropref;

namespace {

struct CommonArgs {
    std::string degree_file;
    std::string degree_inline;
    std::uint64_t seed = 1;
    std::string format = "text";
};

DegreeSpec load_degree(const CommonArgs& args, bool require_even) {
    std::string text;
    if (!args.degree_inline.empty())
        text = args.degree_inline;
    else if (!args.degree_file.empty())
        text = read_file(args.degree_file);
    else
        fail(Err::ParseError, "no degree given (use --degree or --vectors)");
    return validate_degree(degree_vectors_from_json(text), require_even);
}

Parity parse_parity(const std::string& s) {
    if (s.size() != 3 || s[1] != ',' || (s[0] != '0' && s[0] != '1') ||
        (s[2] != '0' && s[2] != '1'))
        fail(Err::ParseError, "parity must be given as a,b with a,b in {0,1}");
    return {s[0] - '0', s[2] - '0'};
}

void emit_poly(const LaurentPoly& p, const std::string& format) {
    if (format == "json")
        std::cout << poly_to_json(p) << "\n";
    else
        std::cout << p.to_canonical_string() << "\n";
}

// Exponent congruences of the vanishing theorems: kappa in 2Z and
// kappa = A(Delta) mod 4.
bool exponents_admissible(const LaurentPoly& p, const DegreeSpec& degree) {
    Int area = degree.area();
    for (const auto& [h, c] : p.terms()) {
        if (h % 4 != 0) return false;  // doubled exponent of a non-even kappa
        Int kappa = Int(h) / 2;
        if ((area - kappa) % 4 != 0) return false;
    }
    return true;
}

int run_check(const DegreeSpec& degree, Parity parity, std::uint64_t seed) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) all_ok = false;
    };

    LaurentPoly g0_a = g0(degree, seed);
    LaurentPoly g0_b = g0(degree, mix_seed(seed, "check-alt"));
    report("g0 seed-invariance", g0_a == g0_b);
    report("g0 exponent congruences", exponents_admissible(g0_a, degree));

    G1Options opts;
    opts.collect_curves = true;
    G1Result res = g1_full(degree, parity, seed, opts);
    LaurentPoly via_oracle = g1_oracle(degree, parity, seed);
    report("g1 cycle vs oracle", res.value == via_oracle);
    report("g1 exponent congruences", exponents_admissible(res.value, degree));

    auto [values, sum] = lambda_and_menelaus(res.data.lines);
    report("menelaus sum exactly zero", sum == 0);

    bool curves_ok = true, mult_ok = true, signs_ok = true;
    for (const auto& T : res.curves) {
        auto bal = check_balancing(T);
        auto gs = genus_and_simplicity(T);
        auto cp = curve_parity(T);
        curves_ok = curves_ok && bal.ok && gs.genus == 1 && gs.simple &&
                    cp.status == ParityStatus::HasParity && cp.parity == parity;
        try {
            KitContext ctx = KitContext::build(T);
            mult_ok = mult_ok && ctx.refined_multiplicity_sum() == ctx.refined_multiplicity_closed();
            for (const auto& kit : ctx.enumerate_kits()) ctx.welschinger_sign(kit);
        } catch (const Error&) {
            signs_ok = false;
        }
    }
    report("curves balanced/simple/elliptic/parity", curves_ok);
    report("multiplicity sum equals closed form", mult_ok);
    report("sign identity on all kits", signs_ok);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Refined tropical invariants of toric surfaces"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string parity_str, method = "cycle", curve_file, out_file;
    bool allow_non_admissible = false, render_dual = false;
    int k_component = -1;

    auto add_common = [&](CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--degree", args.degree_file, "degree JSON file");
        cmd->add_option("--vectors", args.degree_inline, "inline degree JSON");
        if (with_seed) cmd->add_option("--seed", args.seed, "deterministic seed");
        cmd->add_option("--format", args.format, "text|json");
    };

    auto* cmd_g0 = app.add_subcommand("g0", "refined rational invariant");
    add_common(cmd_g0);

    auto* cmd_g1 = app.add_subcommand("g1", "refined elliptic invariant");
    add_common(cmd_g1);
    cmd_g1->add_option("--parity", parity_str, "parity a,b")->required();
    cmd_g1->add_option("--method", method, "cycle|oracle");
    cmd_g1->add_flag("--allow-non-admissible", allow_non_admissible,
                     "compute a constraint-dependent value for non-admissible parities");
    cmd_g1->add_option("--k-component", k_component, "index of the K component to use");

    auto* cmd_mult = app.add_subcommand("mult", "refined multiplicity of a curve");
    cmd_mult->add_option("--curve", curve_file, "curve JSON file")->required();
    cmd_mult->add_option("--format", args.format, "text|json");

    auto* cmd_check = app.add_subcommand("check", "cross-validation suite");
    add_common(cmd_check);
    cmd_check->add_option("--parity", parity_str, "parity a,b")->required();

    auto* cmd_render = app.add_subcommand("render", "SVG of a curve or its dual subdivision");
    cmd_render->add_option("--curve", curve_file, "curve JSON file")->required();
    cmd_render->add_option("--out", out_file, "output SVG path")->required();
    cmd_render->add_flag("--dual", render_dual, "render the dual subdivision");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_g0->parsed()) {
            DegreeSpec degree = load_degree(args, /*require_even=*/true);
            emit_poly(g0(degree, args.seed), args.format);
        } else if (cmd_g1->parsed()) {
            DegreeSpec degree = load_degree(args, /*require_even=*/true);
            Parity parity = parse_parity(parity_str);
            if (method == "oracle") {
                InitialDataOptions opts;
                opts.allow_non_admissible = allow_non_admissible;
                opts.k_component = k_component;
                emit_poly(g1_oracle(degree, parity, args.seed, opts), args.format);
            } else if (method == "cycle") {
                G1Options opts;
                opts.initial.allow_non_admissible = allow_non_admissible;
                opts.initial.k_component = k_component;
                G1Result res = g1_full(degree, parity, args.seed, opts);
                if (res.data.admissibility_overridden)
                    std::cerr << "warning: non-admissible parity; value is constraint-dependent\n";
                emit_poly(res.value, args.format);
            } else {
                fail(Err::ParseError, "method must be cycle or oracle");
            }
        } else if (cmd_mult->parsed()) {
            ParamTropicalCurve T = curve_from_json(read_file(curve_file));
            KitContext ctx = KitContext::build(T);
            LaurentPoly sum = ctx.refined_multiplicity_sum();
            LaurentPoly closed = ctx.refined_multiplicity_closed();
            if (sum != closed)
                fail(Err::InternalInconsistency, "kit sum disagrees with the closed form");
            emit_poly(sum, args.format);
        } else if (cmd_check->parsed()) {
            DegreeSpec degree = load_degree(args, /*require_even=*/true);
            Parity parity = parse_parity(parity_str);
            return run_check(degree, parity, args.seed);
        } else if (cmd_render->parsed()) {
            ParamTropicalCurve T = curve_from_json(read_file(curve_file));
            std::string svg =
                render_dual ? render_subdivision_svg(dual_subdivision(T)) : render_curve_svg(T);
            write_file(out_file, svg);
        }
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"" << err_name(e.code()) << "\", \"message\": \"" << e.what()
                  << "\"}\n";
        if (e.code() == Err::InternalInconsistency || e.code() == Err::DuplicateCurve) return 3;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"Unexpected\", \"message\": \"" << e.what() << "\"}\n";
        return 3;
    }
    return 0;
}
