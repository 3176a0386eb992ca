// Command-line front end: build and inspect graded modular data, certify the
// category-level predicates against the arithmetic criteria, and compute
// tau(M, xi) for plumbed manifolds.
//
// Exit codes: 0 success, 1 predicate/invariance mismatch, 2 input error or
// cap overflow. Diagnostics go to stderr; data goes to stdout.

#include "gcat/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace gcat;

struct CommonArgs {
    std::string cartan;
    long r = 0;
    long zeta = 1;
    int parallelism = 1;
    long max_enum = 0;  // 0: keep defaults

    Caps caps() const {
        Caps c;
        if (const char* env = std::getenv("GCAT_MAX_ENUM")) {
            long v = std::atol(env);
            if (v > 0) {
                c.colorings = v;
                c.classes = v;
            }
        }
        if (max_enum > 0) {
            c.colorings = max_enum;
            c.classes = max_enum;
        }
        return c;
    }
    AlcoveSpec spec() const {
        return make_alcove_spec(build_root_system(CartanType::parse(cartan)), r, zeta);
    }
    BuildOptions build_options() const { return BuildOptions{caps(), parallelism}; }
};

void add_common(CLI::App* cmd, CommonArgs& a, bool need_r = true, bool need_cartan = true) {
    auto* copt = cmd->add_option("cartan", a.cartan, "Cartan type, e.g. A1, B3, E8");
    if (need_cartan) copt->required();
    auto* ropt = cmd->add_option("R", a.r, "order of eps^2");
    if (need_r) ropt->required();
    cmd->add_option("--zeta", a.zeta, "exponent s in zeta = zeta_{2Dr}^s (default 1)");
    cmd->add_option("--type", a.cartan, "alias for the cartan positional");
    cmd->add_option("--r", a.r, "alias for the R positional");
    cmd->add_option("--parallelism", a.parallelism, "worker threads for independent work items");
    cmd->add_option("--max-enum", a.max_enum, "enumeration cap override (also GCAT_MAX_ENUM)");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

PlumbingForest load_plumbing(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot open plumbing file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw spec_error(std::string("invalid JSON: ") + e.what());
    }
    return plumbing_from_json(j);
}

// Class string: one entry per vertex separated by commas; tuple components
// within an entry separated by ':'. For trivial G every entry is "0".
GClass parse_class(const std::string& text, const CenterGroup& g, size_t vertices) {
    GClass xi;
    std::istringstream is(text);
    std::string entry;
    while (std::getline(is, entry, ',')) {
        CenterGroup::Elem e;
        std::istringstream es(entry);
        std::string part;
        while (std::getline(es, part, ':')) {
            size_t start = part.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            try {
                e.push_back(std::stol(part.substr(start)));
            } catch (const std::exception&) {
                throw spec_error("malformed class entry: " + entry);
            }
        }
        if (g.invariants.empty()) {
            if (!(e.empty() || (e.size() == 1 && e[0] == 0)))
                throw spec_error("center group is trivial; class entries must be 0");
            e.clear();
        } else if (e.size() != g.invariants.size()) {
            throw spec_error("class entry " + entry + " needs " +
                             std::to_string(g.invariants.size()) + " components");
        }
        for (size_t i = 0; i < e.size(); ++i) e[i] = pos_mod(e[i], g.invariants[i]);
        xi.alpha.push_back(std::move(e));
    }
    if (xi.alpha.size() != vertices)
        throw spec_error("class has " + std::to_string(xi.alpha.size()) + " entries for " +
                         std::to_string(vertices) + " vertices");
    return xi;
}

std::string center_name(const CenterGroup& g) {
    if (g.invariants.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < g.invariants.size(); ++i)
        s += (i ? "x" : "") + ("Z" + std::to_string(g.invariants[i]));
    return s;
}

int cmd_info(const CommonArgs& a, bool have_r) {
    auto rs = build_root_system(CartanType::parse(a.cartan));
    std::cout << "type=" << rs->type.name() << " rank=" << rs->rank << "\n";
    std::cout << "d=" << rs->d << " D=" << rs->D << " h=" << rs->h << " h_dual=" << rs->h_dual
              << " |G|=" << rs->center.order() << " G=" << center_name(rs->center) << "\n";
    std::cout << "weyl_order=" << rs->weyl_order.get_str()
              << " positive_roots=" << rs->positive_roots.size() << "\n";
    if (!have_r) return 0;
    AlcoveCase c = classify_case(*rs, a.r);
    std::cout << "r=" << a.r << " case=" << case_name(c) << "\n";
    if (c == AlcoveCase::unsupported) return 0;
    AlcoveSpec spec = make_alcove_spec(rs, a.r, a.zeta);
    Alcove alc = enumerate_alcove(spec);
    std::cout << "N=" << spec.N << " k=" << spec.k << " alcove_size=" << alc.size() << "\n";
    std::cout << "grades:";
    for (const auto& [grade, members] : alc.by_grade)
        std::cout << " " << CenterGroup::elem_str(grade) << ":" << members.size();
    std::cout << "\n";
    return 0;
}

int cmd_alcove(const CommonArgs& a) {
    AlcoveSpec spec = a.spec();
    Alcove alc = enumerate_alcove(spec);
    for (size_t i = 0; i < alc.size(); ++i) {
        const auto& mu = alc.simples[i].mu;
        std::cout << "mu=(";
        for (size_t k = 0; k < mu.size(); ++k) std::cout << (k ? "," : "") << mu[k];
        std::cout << ") grade=" << CenterGroup::elem_str(alc.grades[i]) << "\n";
    }
    return 0;
}

int cmd_modular_data(const CommonArgs& a, const std::string& format) {
    AlcoveSpec spec = a.spec();
    GradedModularData data = build_modular_data(spec, a.build_options());
    ClassificationReport rep = classify(data);
    if (format == "json") {
        std::cout << modular_data_to_json(data, rep).dump(2) << "\n";
        return 0;
    }
    std::cout << "# " << spec.name() << " case=" << case_name(spec.cse) << " N=" << spec.N << "\n";
    std::cout << "# idx mu grade qdim qdim_approx twist_exponent\n";
    for (size_t i = 0; i < data.size(); ++i) {
        auto approx = data.qdim[i].embed(1);
        std::cout << i << " " << data.alcove.simples[i].str() << " "
                  << CenterGroup::elem_str(data.grade(i)) << " \"" << data.qdim[i].str() << "\" "
                  << approx.real() << (approx.imag() < 0 ? "" : "+") << approx.imag() << "i "
                  << data.twist_exp[i] << "\n";
    }
    std::cout << "# S-matrix\n";
    for (size_t i = 0; i < data.size(); ++i)
        for (size_t k = 0; k < data.size(); ++k)
            std::cout << "S[" << i << "][" << k << "] = " << data.smat[i][k].str() << "\n";
    std::cout << "# Gauss sums per grade\n";
    for (const auto& [grade, val] : data.delta) {
        std::cout << "delta" << CenterGroup::elem_str(grade) << " = " << val.str() << "\n";
        std::cout << "delta+" << CenterGroup::elem_str(grade) << " = "
                  << data.delta_plus.at(grade).str() << "\n";
        std::cout << "delta-" << CenterGroup::elem_str(grade) << " = "
                  << data.delta_minus.at(grade).str() << "\n";
    }
    return 0;
}

int print_check_report(const std::string& name, const CrossValidation& cv,
                       const GradedModularData* data) {
    auto line = [&](const std::string& flag, bool computed, const std::string& predicted) {
        std::string witness;
        auto it = cv.computed.witnesses.find(flag);
        if (it != cv.computed.witnesses.end()) witness = it->second;
        std::cout << "flag=" << flag << " computed=" << bool_str(computed)
                  << " predicted=" << predicted << " witness=" << witness << "\n";
    };
    line("weakly_nondegenerate", cv.computed.weakly_nondegenerate,
         bool_str(cv.predicted.weakly_nondegenerate) +
             (cv.predicted.weak_exact ? " (exact)" : " (sufficient)"));
    line("regular", cv.computed.regular, bool_str(cv.predicted.regular) + " (sufficient)");
    line("g_modular", cv.computed.g_modular, bool_str(cv.predicted.g_modular) + " (sufficient)");
    line("ungraded_modular", cv.computed.ungraded_modular,
         cv.computed.regular && cv.computed.g_modular ? "true (implied)" : "-");
    if (data) {
        std::cout << "transparent=";
        for (size_t i : cv.computed.transparent)
            std::cout << data->alcove.simples[i].str() << " ";
        std::cout << "\n";
    }
    for (const auto& m : cv.mismatches) std::cout << "mismatch: " << m << "\n";
    std::cout << "result=" << (cv.ok() ? "match" : "mismatch") << " spec=" << name << "\n";
    return cv.ok() ? 0 : 1;
}

int cmd_check(const CommonArgs& a, const std::string& verify_json) {
    if (!verify_json.empty()) {
        std::ifstream in(verify_json);
        if (!in) throw spec_error("cannot open " + verify_json);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw spec_error(std::string("invalid JSON: ") + e.what());
        }
        JsonVerification v = verify_modular_data_json(j);
        std::cout << "flag=weakly_nondegenerate recomputed="
                  << bool_str(v.recomputed.weakly_nondegenerate) << "\n";
        std::cout << "flag=regular recomputed=" << bool_str(v.recomputed.regular) << "\n";
        std::cout << "flag=g_modular recomputed=" << bool_str(v.recomputed.g_modular) << "\n";
        std::cout << "flag=ungraded_modular recomputed="
                  << bool_str(v.recomputed.ungraded_modular) << "\n";
        for (const auto& m : v.mismatches) std::cout << "mismatch: " << m << "\n";
        std::cout << "result=" << (v.ok() ? "match" : "mismatch") << "\n";
        return v.ok() ? 0 : 1;
    }
    if (a.cartan.empty() || a.r <= 0)
        throw spec_error("check needs CARTAN and R, or --verify-json FILE");
    AlcoveSpec spec = a.spec();
    GradedModularData data = build_modular_data(spec, a.build_options());
    CrossValidation cv = cross_validate_data(data);
    return print_check_report(spec.name(), cv, &data);
}

int cmd_sweep(const CommonArgs& a, long r_min, long r_max) {
    auto rs = build_root_system(CartanType::parse(a.cartan));
    int mismatches = 0;
    long done = 0;
    for (long r = r_min; r <= r_max; ++r) {
        if (classify_case(*rs, r) == AlcoveCase::unsupported) {
            std::cout << rs->type.name() << " r=" << r << " case=unsupported skipped\n";
            continue;
        }
        AlcoveSpec spec = make_alcove_spec(rs, r, a.zeta);
        CrossValidation cv = cross_validate(spec, a.build_options());
        std::cout << spec.name() << " case=" << case_name(spec.cse)
                  << " weak=" << bool_str(cv.computed.weakly_nondegenerate)
                  << " regular=" << bool_str(cv.computed.regular)
                  << " g_modular=" << bool_str(cv.computed.g_modular)
                  << " ungraded=" << bool_str(cv.computed.ungraded_modular)
                  << " result=" << (cv.ok() ? "match" : "mismatch") << "\n";
        for (const auto& m : cv.mismatches) std::cout << "mismatch: " << m << "\n";
        if (!cv.ok()) ++mismatches;
        std::cerr << "sweep: " << ++done << " specs done\r";
    }
    std::cerr << "\n";
    return mismatches ? 1 : 0;
}

int cmd_classes(const CommonArgs& a, const std::string& plumbing) {
    PlumbingForest f = load_plumbing(plumbing);
    auto rs = build_root_system(CartanType::parse(a.cartan));
    auto classes = cohomology_classes(linking_matrix(f), rs->center, a.caps().classes);
    std::cout << "count=" << classes.size() << "\n";
    for (const auto& c : classes) std::cout << c.str() << "\n";
    return 0;
}

int cmd_tau(const CommonArgs& a, const std::string& plumbing, const std::string& class_text) {
    PlumbingForest f = load_plumbing(plumbing);
    AlcoveSpec spec = a.spec();
    GradedModularData data = build_modular_data(spec, a.build_options());
    GClass xi = parse_class(class_text, spec.rs->center, f.size());
    TauResult t = tau(f, xi, data, a.caps());
    std::cout << "tau = " << t.value.str() << "\n";
    auto approx = t.value.approx();
    std::cout << "approx = " << approx.real() << (approx.imag() < 0 ? "" : "+") << approx.imag()
              << "i\n";
    std::cout << "sigma+=" << t.sigma_plus << " sigma-=" << t.sigma_minus << " b1=" << t.b1
              << "\n";
    return 0;
}

int cmd_split_check(const CommonArgs& a, const std::string& plumbing, bool scan, int max_vertices,
                    long max_framing) {
    AlcoveSpec spec = a.spec();
    GradedModularData data = build_modular_data(spec, a.build_options());
    ClassificationReport rep = classify(data);
    if (!rep.regular)
        std::cerr << "note: " << spec.name()
                  << " is not regular; vanishing off the kernel is not expected\n";
    if (scan) {
        SplitScanReport r = split_vanishing_scan(data, max_vertices, max_framing, a.caps(),
                                                 a.parallelism);
        std::cout << "shapes=" << r.shapes << " assignments=" << r.assignments.get_str()
                  << " vanishing_required=" << r.vanishing_required.get_str() << "\n";
        for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
        std::cout << "result=" << (r.ok() ? "pass" : "fail") << "\n";
        return r.ok() ? 0 : 1;
    }
    PlumbingForest f = load_plumbing(plumbing);
    SplitVanishReport r = split_vanishing_check(f, data, a.caps());
    std::cout << "grade_vectors=" << r.classes_checked
              << " vanishing_required=" << r.vanishing_required << "\n";
    for (const auto& v : r.failures) std::cout << "violation: " << v << "\n";
    std::cout << "result=" << (r.ok() ? "pass" : "fail") << "\n";
    return r.ok() ? 0 : 1;
}

int cmd_kirby(const CommonArgs& a, int count, int max_vertices, unsigned long seed) {
    AlcoveSpec spec = a.spec();
    GradedModularData data = build_modular_data(spec, a.build_options());
    KirbyReport r = kirby_invariance_check(data, count, max_vertices, seed, a.caps());
    std::cout << "forests=" << r.forests << " tau_evaluations=" << r.tau_evaluations
              << " blowdowns=" << r.blowdowns << " relabelings=" << r.relabelings << "\n";
    for (const auto& f : r.failures) std::cout << "failure: " << f << "\n";
    std::cout << "result=" << (r.ok() ? "pass" : "fail") << "\n";
    return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded modular data and surgery invariants of quantum-group categories"};
    app.require_subcommand(1);

    CommonArgs info_args, alcove_args, md_args, check_args, sweep_args, classes_args, tau_args,
        split_args, kirby_args;

    auto* info = app.add_subcommand("info", "Cartan data, case classification, alcove size");
    add_common(info, info_args, false);

    auto* alcove = app.add_subcommand("alcove", "dump the simple-object alcove with grades");
    add_common(alcove, alcove_args);

    std::string md_format = "table";
    auto* md = app.add_subcommand("modular-data", "compute qdim/twist/S-matrix/Gauss sums");
    add_common(md, md_args);
    md->add_option("--format", md_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    std::string verify_json;
    auto* check = app.add_subcommand("check", "classify and compare with the arithmetic criteria");
    add_common(check, check_args, false, false);
    check->add_option("--verify-json", verify_json,
                      "verify flags stored in a modular-data JSON export instead");

    long r_min = 0, r_max = 0;
    auto* sweep = app.add_subcommand("sweep", "cross-validate a range of r values");
    sweep->add_option("cartan", sweep_args.cartan)->required();
    sweep->add_option("rmin", r_min)->required();
    sweep->add_option("rmax", r_max)->required();
    sweep->add_option("--zeta", sweep_args.zeta);
    sweep->add_option("--parallelism", sweep_args.parallelism);
    sweep->add_option("--max-enum", sweep_args.max_enum);

    std::string classes_plumbing;
    auto* classes = app.add_subcommand("classes", "enumerate H^1(M;G) for a plumbing");
    add_common(classes, classes_args);
    classes->add_option("--plumbing", classes_plumbing, "plumbing JSON file")->required();

    std::string tau_plumbing, tau_class;
    auto* tauc = app.add_subcommand("tau", "compute tau(M, xi) for a plumbed manifold");
    add_common(tauc, tau_args);
    tauc->add_option("--plumbing", tau_plumbing, "plumbing JSON file")->required();
    tauc->add_option("--class", tau_class, "meridian values, one entry per vertex")->required();

    std::string split_plumbing;
    bool split_scan = false;
    int split_max_vertices = 4;
    long split_max_framing = 3;
    auto* split = app.add_subcommand("split-check", "verify bracket vanishing off the kernel");
    add_common(split, split_args);
    split->add_option("--plumbing", split_plumbing, "plumbing JSON file");
    split->add_flag("--scan", split_scan, "sweep all forest shapes instead of one file");
    split->add_option("--max-vertices", split_max_vertices, "scan: vertices per forest (<= 4)");
    split->add_option("--max-framing", split_max_framing, "scan: framing bound");

    int kirby_count = 50, kirby_max_vertices = 6;
    unsigned long kirby_seed = 20240915;
    auto* kirby = app.add_subcommand("kirby-check", "random blow-down/relabeling invariance");
    add_common(kirby, kirby_args);
    kirby->add_option("--count", kirby_count, "number of random forests");
    kirby->add_option("--max-vertices", kirby_max_vertices);
    kirby->add_option("--seed", kirby_seed, "RNG seed (fixed default for reproducibility)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "input error: " << e.get_name() << ": " << e.what() << "\n";
        return 2;
    }

    try {
        if (info->parsed()) return cmd_info(info_args, info->count("R") || info->count("--r"));
        if (alcove->parsed()) return cmd_alcove(alcove_args);
        if (md->parsed()) return cmd_modular_data(md_args, md_format);
        if (check->parsed()) return cmd_check(check_args, verify_json);
        if (sweep->parsed()) return cmd_sweep(sweep_args, r_min, r_max);
        if (classes->parsed()) return cmd_classes(classes_args, classes_plumbing);
        if (tauc->parsed()) return cmd_tau(tau_args, tau_plumbing, tau_class);
        if (split->parsed()) {
            if (!split_scan && split_plumbing.empty())
                throw spec_error("split-check needs --plumbing FILE or --scan");
            return cmd_split_check(split_args, split_plumbing, split_scan, split_max_vertices,
                                   split_max_framing);
        }
        if (kirby->parsed()) return cmd_kirby(kirby_args, kirby_count, kirby_max_vertices, kirby_seed);
    } catch (const cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const spec_error& e) {
        std::cerr << (std::string(e.what()).find("plumbing") != std::string::npos
                          ? "plumbing error: "
                          : "input error: ")
                  << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
