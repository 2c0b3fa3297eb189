#include "indep/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indep/atoms.hpp"
#include "indep/calculus.hpp"
#include "indep/pregeom.hpp"
#include "indep/synth.hpp"
#include "indep/teams.hpp"

namespace indep::cli {

namespace {

using nlohmann::json;

constexpr int exit_input = 2;
constexpr int exit_internal = 3;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    bool json = false;
    std::uint64_t seed = 0;
};

struct SigmaArgs {
    std::string inline_list;
    std::string file;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

AtomSet load_sigma(const SigmaArgs& s) {
    if (!s.inline_list.empty() && !s.file.empty()) throw InputError("give either --sigma or --sigma-file, not both");
    if (!s.file.empty()) {
        try {
            return parse_atom_file(read_file(s.file));
        } catch (const ParseError& e) {
            throw InputError(s.file + ": " + e.what());
        }
    }
    return parse_atom_list(s.inline_list);
}

void add_sigma_options(CLI::App* cmd, SigmaArgs& s) {
    cmd->add_option("--sigma", s.inline_list, "Hypotheses as a ';'-separated atom list");
    cmd->add_option("--sigma-file", s.file, "Hypotheses file, one atom per line");
}

std::vector<std::string> atom_strings(const std::vector<Atom>& atoms) {
    std::vector<std::string> out;
    for (const auto& a : atoms) out.push_back(format_atom(a));
    return out;
}

std::vector<Vector> parse_vector_list(const std::string& text) {
    std::vector<Vector> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto semi = text.find(';', start);
        const auto piece = text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
        if (piece.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_vector(piece));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

json team_json(const Team& t) {
    std::vector<std::string> vars;
    for (const auto& v : t.dom()) vars.push_back(v.name());
    return {{"vars", vars}, {"rows", t.rows()}};
}

json report_json(const AxiomReport& r) {
    json results = json::array();
    for (const auto& a : r.results) {
        json j = {{"axiom", a.name}, {"trials", a.trials}, {"premises_held", a.premises_held},
                  {"failures", a.failures}, {"pass", a.ok()}};
        if (a.witness) j["witness"] = *a.witness;
        results.push_back(j);
    }
    return {{"model", r.model}, {"pass", r.ok()}, {"results", results}};
}

std::vector<std::string> vector_strings(const std::vector<Vector>& vs) {
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(format_vector(v));
    return out;
}

// ---------------------------------------------------------------------------

struct DeriveArgs {
    SigmaArgs sigma;
    std::string goal;
    int depth = 6;
    bool conditional = false;
    bool no_proof = false;
};

void cmd_derive(const DeriveArgs& a, const Globals& g, std::ostream& out) {
    const AtomSet sigma = load_sigma(a.sigma);
    const Atom goal = parse_atom(a.goal);
    const bool marginal = !a.conditional && sigma.all_marginal() && goal.is_marginal();
    const Verdict v = marginal ? derives_marginal(sigma, goal) : derives_conditional(sigma, goal, a.depth);
    if (v.proof) {
        const AtomSet check_against = sigma;
        if (auto c = validate_proof(*v.proof, check_against); !c.ok)
            throw std::logic_error("emitted proof fails replay at step " + std::to_string(c.failed_step) + ": " + c.reason);
    }
    if (g.json) {
        json j = {{"status", status_name(v.status)}, {"engine", marginal ? "marginal" : "conditional"},
                  {"goal", format_atom(goal)}};
        if (!marginal) j["depth"] = a.depth;
        if (v.proof && !a.no_proof) j["proof"] = proof_to_json(*v.proof);
        out << j.dump(2) << '\n';
        return;
    }
    out << status_name(v.status);
    if (v.status == Status::unknown) out << " (no derivation within depth " << a.depth << ")";
    out << '\n';
    if (v.proof && !a.no_proof) out << format_proof(*v.proof);
}

struct ClosureArgs {
    SigmaArgs sigma;
    int depth = 6;
    bool conditional = false;
};

void cmd_closure(const ClosureArgs& a, const Globals& g, std::ostream& out) {
    const AtomSet sigma = load_sigma(a.sigma);
    std::vector<Atom> atoms;
    std::optional<bool> saturated;
    if (!a.conditional && sigma.all_marginal()) {
        atoms = MarginalClosure(sigma).atoms();
    } else {
        ConditionalClosure c(sigma, a.depth);
        atoms = c.atoms();
        saturated = c.saturated();
    }
    if (g.json) {
        json j = {{"engine", saturated ? "conditional" : "marginal"}, {"atoms", atom_strings(atoms)}};
        if (saturated) {
            j["depth"] = a.depth;
            j["saturated"] = *saturated;
        }
        out << j.dump(2) << '\n';
        return;
    }
    for (const auto& s : atom_strings(atoms)) out << s << '\n';
}

struct CountermodelArgs {
    SigmaArgs sigma;
    std::string goal;
    TeamBounds bounds;
    std::string team_file;
};

void cmd_countermodel(const CountermodelArgs& a, const Globals& g, std::ostream& out) {
    const AtomSet sigma = load_sigma(a.sigma);
    const Atom goal = parse_atom(a.goal);
    if (!a.team_file.empty()) {
        Team team;
        try {
            team = parse_team_csv(read_file(a.team_file));
        } catch (const ParseError& e) {
            throw InputError(a.team_file + ": " + e.what());
        }
        json checks = json::array();
        bool all = true;
        for (const auto& h : sigma) {
            const bool ok = satisfies(team, h);
            all = all && ok;
            checks.push_back({{"atom", format_atom(h)}, {"role", "sigma"}, {"holds", ok}});
        }
        const bool gh = satisfies(team, goal);
        checks.push_back({{"atom", format_atom(goal)}, {"role", "goal"}, {"holds", gh}});
        const bool counter = all && !gh;
        if (g.json) {
            out << json{{"countermodel", counter}, {"checks", checks}}.dump(2) << '\n';
            return;
        }
        for (const auto& c : checks)
            out << c["role"].get<std::string>() << "  " << c["atom"].get<std::string>() << "  "
                << (c["holds"].get<bool>() ? "holds" : "fails") << '\n';
        out << "countermodel: " << (counter ? "yes" : "no") << '\n';
        return;
    }
    TeamSearch search(set_union(sigma.universe(), goal.vars()), a.bounds);
    const auto team = search.find(sigma, goal);
    if (g.json) {
        json j = {{"found", team.has_value()}, {"candidates", search.candidates()}, {"exhaustive", search.exhaustive()}};
        if (team) j["team"] = team_json(*team);
        out << j.dump(2) << '\n';
        return;
    }
    if (team)
        write_team_csv(out, *team);
    else
        out << "none within bounds\n";
}

struct SynthArgs {
    SigmaArgs sigma;
    std::string goal;
};

void cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out) {
    const AtomSet sigma = load_sigma(a.sigma);
    const Atom goal = parse_atom(a.goal);
    try {
        out << counterexample_to_json(synthesize_counterexample(sigma, goal)).dump(2) << '\n';
    } catch (const GoalDerivable& e) {
        if (g.json) {
            out << json{{"status", "DERIVED"}, {"proof", proof_to_json(e.proof())}}.dump(2) << '\n';
            return;
        }
        out << "DERIVED: no counterexample exists\n" << format_proof(e.proof());
    }
}

struct AxiomsArgs {
    std::string model = "vspace:Q:4";
    std::size_t trials = 1000;
    std::string relation = "rank";
    bool laws = false;
};

void cmd_axioms(const AxiomsArgs& a, const Globals& g, std::ostream& out) {
    const auto model = parse_model(a.model);
    const Relation rel = a.relation == "rank" ? rank_relation() : per_element_relation();
    const auto report = axiom_suite(model, g.seed, a.trials, rel);
    std::optional<AxiomReport> laws;
    if (a.laws) laws = pregeometry_laws(model, g.seed, a.trials);
    if (g.json) {
        json j = {{"relation", a.relation}, {"axioms", report_json(report)}};
        if (laws) j["pregeometry"] = report_json(*laws);
        out << j.dump(2) << '\n';
        return;
    }
    out << "relation " << a.relation << '\n' << format_report(report);
    if (laws) out << format_report(*laws);
}

struct FederationArgs {
    std::string model = "vspace:Q:4";
    std::size_t n = 0;
};

void cmd_federation(const FederationArgs& a, const Globals& g, std::ostream& out) {
    const auto model = parse_model(a.model);
    const auto n = a.n ? a.n : model.dim();
    const auto bound = federation_index_lower_bound(model, n);
    if (g.json) {
        out << json{{"model", model.descriptor()},
                    {"index_lower_bound", n},
                    {"sequence", vector_strings(bound.sequence)},
                    {"witnesses", vector_strings(bound.witnesses)}}
                   .dump(2)
            << '\n';
        return;
    }
    out << "model " << model.descriptor() << '\n' << "sequence " << format_elements(bound.sequence) << '\n';
    for (std::size_t m = 0; m < bound.witnesses.size(); ++m)
        out << "m=" << m + 1 << " witness " << format_vector(bound.witnesses[m]) << " verified\n";
    out << "index of federation >= " << n << '\n';
}

struct HyttinenArgs {
    std::string model = "vspace:Q:3";
    std::string sequence;
    std::string base;
    std::string combiner = "sum";
};

void cmd_hyttinen(const HyttinenArgs& a, const Globals& g, std::ostream& out) {
    const auto model = parse_model(a.model);
    std::vector<Vector> d = parse_vector_list(a.sequence);
    if (a.sequence.empty())
        for (std::size_t i = 0; i < model.dim(); ++i) d.push_back(Vector::unit(model.dim(), i));
    const auto base = parse_vector_list(a.base);
    Combiner comb = sum_combiner();
    if (a.combiner == "first") comb = [](const Vector& u, const Vector&) { return u; };
    if (a.combiner == "second") comb = [](const Vector&, const Vector& v) { return v; };
    const auto report = hyttinen_chain(model, d, base, comb);
    if (g.json) {
        json checks = json::array();
        for (const auto& c : report.checks) checks.push_back({{"index", c.index}, {"property", c.property}, {"holds", c.holds}});
        out << json{{"model", model.descriptor()},
                    {"chain", vector_strings(report.chain)},
                    {"checks", checks},
                    {"federated", report.federated},
                    {"pass", report.ok()}}
                   .dump(2)
            << '\n';
        return;
    }
    for (std::size_t i = 0; i < report.chain.size(); ++i) out << "d*" << i << " = " << format_vector(report.chain[i]) << '\n';
    for (const auto& c : report.checks)
        out << (c.holds ? "PASS " : "FAIL ") << "property " << c.property << " at i=" << c.index << '\n';
    out << (report.federated ? "PASS " : "FAIL ") << "final element outside closures of proper subsets\n";
}

// ---------------------------------------------------------------------------

struct Fixture {
    std::string name;
    std::function<bool()> check;
};

std::vector<Fixture> demo_fixtures(std::uint64_t seed) {
    auto derives = [](std::string sigma, std::string goal) {
        const auto s = parse_atom_list(sigma);
        const auto v = derives_marginal(s, parse_atom(goal));
        return v.derived() && validate_proof(*v.proof, s).ok;
    };
    auto derives_c = [](std::string sigma, std::string goal, int depth) {
        const auto s = parse_atom_list(sigma);
        const auto v = derives_conditional(s, parse_atom(goal), depth);
        return v.derived() && validate_proof(*v.proof, s).ok;
    };
    auto synth_case = [](std::string sigma, std::string goal, SynthCase kind, std::size_t dim) {
        const auto c = synthesize_counterexample(parse_atom_list(sigma), parse_atom(goal));
        return c.kind == kind && c.assignment.model().dim() == dim;
    };
    std::vector<Fixture> f;
    f.push_back({"D3: x _|_ y; x,y _|_ z derives x _|_ y,z in 3 steps", [] {
                     const auto s = parse_atom_list("x _|_ y; x,y _|_ z");
                     const auto v = derives_marginal(s, parse_atom("x _|_ y,z"));
                     return v.derived() && v.proof->size() == 3 && v.proof->steps().back().rule == Rule::D3;
                 }});
    f.push_back({"A3: x _|_ () from nothing", [=] { return derives("", "x _|_ ()"); }});
    f.push_back({"E3: x _|_ x derives x _|_ y", [=] { return derives("x _|_ x", "x _|_ y"); }});
    f.push_back({"x _|_ y does not derive x _|_ z", [] {
                     return derives_marginal(parse_atom_list("x _|_ y"), parse_atom("x _|_ z")).status ==
                            Status::not_derivable;
                 }});
    f.push_back({"A5: x _|_{x} y at depth 1", [=] { return derives_c("", "x _|_{x} y", 1); }});
    f.push_back({"B5: symmetry of x _|_{z} y", [=] { return derives_c("x _|_{z} y", "y _|_{z} x", 2); }});
    f.push_back({"F5: y _|_{z} y; z,x _|_{y} u derives x _|_{z} u",
                 [=] { return derives_c("y _|_{z} y; z,x _|_{y} u", "x _|_{z} u", 2); }});
    f.push_back({"G5: x _|_{z} y; x,y _|_{z} u derives x _|_{z} y,u",
                 [=] { return derives_c("x _|_{z} y; x,y _|_{z} u", "x _|_{z} y,u", 3); }});
    f.push_back({"team countermodel for x _|_ y against x _|_ z", [] {
                     const auto t = find_counterexample_team(parse_atom_list("x _|_ y"), parse_atom("x _|_ z"), {2, 4});
                     return t && *t == Team(make_varset({"x", "y", "z"}), {{0, 0, 0}, {1, 0, 1}});
                 }});
    f.push_back({"no team refutes x _|_ y under x _|_ x", [] {
                     return !find_counterexample_team(parse_atom_list("x _|_ x"), parse_atom("x _|_ y"), {3, 6});
                 }});
    f.push_back({"synth Case 2 in Q^1 for x _|_ y against x _|_ z",
                 [=] { return synth_case("x _|_ y", "x _|_ z", SynthCase::disjoint_sides, 1); }});
    f.push_back({"synth Case 1 for x _|_ x", [=] { return synth_case("", "x _|_ x", SynthCase::shared_variable, 1); }});
    f.push_back({"synth Case 2 in Q^2 for x0 _|_ x1; x1 _|_ y; x0 _|_ y",
                 [=] { return synth_case("x0 _|_ x1; x1 _|_ y; x0 _|_ y", "x0,x1 _|_ y", SynthCase::disjoint_sides, 2); }});
    for (std::size_t n = 2; n <= 6; ++n)
        f.push_back({"federation gap instance n=" + std::to_string(n), [n] {
                         const auto g = build_federation_gap_instance(n);
                         return g.sigma.size() == 2 * n && air_satisfies_set(g.assignment, g.sigma) &&
                                !air_satisfies(g.assignment, g.goal);
                     }});
    f.push_back({"algebraic point: x _|_ x does not entail y _|_ z", [] {
                     const auto g = algebraic_point_fixture();
                     return air_satisfies_set(g.assignment, g.sigma) && !air_satisfies(g.assignment, g.goal);
                 }});
    f.push_back({"federation index of Q^4 is at least 3", [] {
                     return federation_index_lower_bound(ClosureModel::vector_space(4), 3).witnesses.back() ==
                            Vector({1, 1, 1, 0});
                 }});
    f.push_back({"Hyttinen chain over Q^3 with the sum combiner", [] {
                     const auto m = ClosureModel::vector_space(3);
                     const std::vector<Vector> d{Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)};
                     const auto r = hyttinen_chain(m, d, {});
                     return r.ok() && r.chain.back() == Vector({1, 1, 1});
                 }});
    f.push_back({"axiom suite on vspace:Q:4", [seed] { return axiom_suite(ClosureModel::vector_space(4), seed, 200).ok(); }});
    f.push_back({"axiom suite on lattice:Z:3", [seed] { return axiom_suite(ClosureModel::lattice(3), seed, 200).ok(); }});
    f.push_back({"per-element relation fails Exchange", [seed] {
                     const auto r = axiom_suite(ClosureModel::vector_space(3), seed, 500, per_element_relation());
                     return !r.find("Exchange")->ok();
                 }});
    return f;
}

int cmd_demo(const Globals& g, std::ostream& out) {
    std::size_t passed = 0;
    const auto fixtures = demo_fixtures(g.seed);
    json results = json::array();
    for (const auto& fx : fixtures) {
        bool ok = false;
        std::string error;
        try {
            ok = fx.check();
        } catch (const std::exception& e) {
            error = e.what();
        }
        passed += ok;
        if (g.json) {
            json j = {{"fixture", fx.name}, {"pass", ok}};
            if (!error.empty()) j["error"] = error;
            results.push_back(j);
        } else {
            out << (ok ? "PASS  " : "FAIL  ") << fx.name;
            if (!error.empty()) out << "  (" << error << ")";
            out << '\n';
        }
    }
    if (g.json)
        out << json{{"passed", passed}, {"total", fixtures.size()}, {"fixtures", results}}.dump(2) << '\n';
    else
        out << passed << "/" << fixtures.size() << " fixtures passed\n";
    return passed == fixtures.size() ? 0 : exit_internal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Independence atom solver and model checker", "indep"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--json", g.json, "Structured JSON output");
    app.add_option("--seed", g.seed, "Seed for sampled checks (INDEP_SEED overrides)");

    DeriveArgs derive;
    auto* c_derive = app.add_subcommand("derive", "Decide whether sigma derives the goal");
    add_sigma_options(c_derive, derive.sigma);
    c_derive->add_option("--goal", derive.goal, "Goal atom")->required();
    c_derive->add_option("--depth", derive.depth, "Round bound for the conditional engine")->check(CLI::PositiveNumber);
    c_derive->add_flag("--conditional", derive.conditional, "Use the conditional engine even for marginal input");
    c_derive->add_flag("--no-proof", derive.no_proof, "Print the verdict only");

    ClosureArgs closure;
    auto* c_closure = app.add_subcommand("closure", "Print every atom derivable from sigma");
    add_sigma_options(c_closure, closure.sigma);
    c_closure->add_option("--depth", closure.depth, "Round bound for the conditional engine")->check(CLI::PositiveNumber);
    c_closure->add_flag("--conditional", closure.conditional, "Use the conditional engine");

    CountermodelArgs cm;
    auto* c_cm = app.add_subcommand("countermodel", "Search for a team satisfying sigma and refuting the goal");
    add_sigma_options(c_cm, cm.sigma);
    c_cm->add_option("--goal", cm.goal, "Goal atom")->required();
    c_cm->add_option("--max-values", cm.bounds.max_values, "Largest value count")->check(CLI::PositiveNumber);
    c_cm->add_option("--max-rows", cm.bounds.max_rows, "Largest row count")->check(CLI::PositiveNumber);
    c_cm->add_option("--max-candidates", cm.bounds.max_candidates, "Candidate budget")->check(CLI::PositiveNumber);
    c_cm->add_option("--team", cm.team_file, "Evaluate this CSV team instead of searching");

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Build a vector-space counterexample");
    add_sigma_options(c_synth, synth.sigma);
    c_synth->add_option("--goal", synth.goal, "Goal atom")->required();

    AxiomsArgs axioms;
    auto* c_axioms = app.add_subcommand("axioms", "Sample the independence axioms on a closure model");
    c_axioms->add_option("--model", axioms.model, "vspace:Q:<d> or lattice:Z:<d>");
    c_axioms->add_option("--trials", axioms.trials, "Samples per axiom")->check(CLI::PositiveNumber);
    c_axioms->add_option("--relation", axioms.relation, "rank or per-element")
        ->check(CLI::IsMember({"rank", "per-element"}));
    c_axioms->add_flag("--laws", axioms.laws, "Also check the closure operator laws");

    FederationArgs fed;
    auto* c_fed = app.add_subcommand("federation", "Exhibit federated basis prefixes");
    c_fed->add_option("--model", fed.model, "vspace:Q:<d> or lattice:Z:<d>");
    c_fed->add_option("-n,--length", fed.n, "Sequence length (default: dimension)")->check(CLI::PositiveNumber);

    HyttinenArgs hy;
    auto* c_hy = app.add_subcommand("hyttinen", "Run and verify the chain construction");
    c_hy->add_option("--model", hy.model, "vspace:Q:<d> or lattice:Z:<d>");
    c_hy->add_option("--sequence", hy.sequence, "Independent elements, ';'-separated (default: basis)");
    c_hy->add_option("--base", hy.base, "Base set A0, ';'-separated");
    c_hy->add_option("--combiner", hy.combiner, "sum, first or second")->check(CLI::IsMember({"sum", "first", "second"}));

    auto* c_demo = app.add_subcommand("demo", "Replay the built-in fixtures");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (const char* env = std::getenv("INDEP_SEED")) {
        try {
            g.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: INDEP_SEED must be a non-negative integer\n";
            return exit_input;
        }
    }

    try {
        if (c_derive->parsed()) cmd_derive(derive, g, out);
        if (c_closure->parsed()) cmd_closure(closure, g, out);
        if (c_cm->parsed()) cmd_countermodel(cm, g, out);
        if (c_synth->parsed()) cmd_synth(synth, g, out);
        if (c_axioms->parsed()) cmd_axioms(axioms, g, out);
        if (c_fed->parsed()) cmd_federation(fed, g, out);
        if (c_hy->parsed()) cmd_hyttinen(hy, g, out);
        if (c_demo->parsed()) return cmd_demo(g, out);
    } catch (const ChainStepError& e) {
        err << "step error: " << e.what() << '\n';
        return exit_input;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return 0;
}

}  // namespace indep::cli
