// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "indep/calculus.hpp"
#include "indep/pregeom.hpp"
#include "indep/synth.hpp"
#include "indep/teams.hpp"

using namespace indep;

namespace {

constexpr std::size_t kCorpusMaxAtoms = 3;
constexpr double kCorpusSecondsLimit = 300.0;
constexpr std::size_t kSynthInstances = 200;
constexpr std::size_t kSynthMaxVars = 5;
constexpr std::size_t kRuleTrials = 10'000;
constexpr std::size_t kAxiomTrials = 1'000;
constexpr std::size_t kFederationDim = 8;
constexpr std::size_t kChainInstances = 100;
constexpr std::size_t kChainDim = 6;
constexpr std::size_t kProductTeams = 1'000;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome corpus_equivalence() {
    const auto t0 = Clock::now();
    const VarSet universe = make_varset({"x", "y", "z"});
    const auto atoms = testing::all_marginal_atoms(universe);
    TeamSearch search(universe, TeamBounds{4, 16});

    std::size_t sigmas = 0, queries = 0, derived = 0, disagreements = 0;
    std::string first;
    std::vector<Atom> chosen;
    auto visit = [&]() {
        ++sigmas;
        const AtomSet sigma(chosen, universe);
        const MarginalClosure closure(sigma);
        const auto teams = search.find_each(sigma, atoms);
        for (std::size_t g = 0; g < atoms.size(); ++g) {
            ++queries;
            const bool d = closure.contains(atoms[g]);
            derived += d;
            bool synth_derivable = false;
            try {
                (void)synthesize_counterexample(closure, atoms[g]);
            } catch (const GoalDerivable&) {
                synth_derivable = true;
            }
            if (d != !teams[g].has_value() || d != synth_derivable) {
                if (!disagreements++)
                    first = "sigma {" + format_atom_file(sigma) + "} goal " + format_atom(atoms[g]);
            }
        }
    };
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
        visit();
        if (chosen.size() == kCorpusMaxAtoms) return;
        for (std::size_t i = start; i < atoms.size(); ++i) {
            chosen.push_back(atoms[i]);
            choose(i + 1);
            chosen.pop_back();
        }
    };
    choose(0);

    const double secs = seconds_since(t0);
    std::ostringstream out;
    out << sigmas << " sigma x " << atoms.size() << " goals = " << queries << " queries (" << derived
        << " derived), " << disagreements << " disagreements, " << search.profile_count() << " team profiles, "
        << static_cast<int>(secs) << " s (limit " << kCorpusSecondsLimit << " s)";
    if (disagreements) out << "; first: " << first;
    return {disagreements == 0 && secs < kCorpusSecondsLimit, out.str()};
}

Outcome synthesis_validity() {
    std::mt19937_64 rng(kSeed);
    std::size_t built = 0, verified = 0, drawn = 0;
    std::uniform_int_distribution<std::size_t> nvars(2, kSynthMaxVars), natoms(0, 4);
    while (built < kSynthInstances) {
        ++drawn;
        const VarSet universe = testing::numbered_vars(nvars(rng));
        AtomSet sigma({}, universe);
        for (std::size_t i = natoms(rng); i > 0; --i) sigma.add(testing::random_marginal(universe, rng));
        const Atom goal = testing::random_marginal(universe, rng);
        if (derives_marginal(sigma, goal).status != Status::not_derivable) continue;
        ++built;
        try {
            const auto c = synthesize_counterexample(sigma, goal);
            verified += air_satisfies_set(c.assignment, sigma) && !air_satisfies(c.assignment, goal);
        } catch (const std::exception&) {
        }
    }
    return {verified == kSynthInstances, std::to_string(verified) + "/" + std::to_string(kSynthInstances) +
                                             " verified (" + std::to_string(drawn) + " draws)"};
}

Outcome rule_soundness() {
    const auto q3 = ClosureModel::vector_space(3);
    std::size_t violations = 0, held = 0, instances = 0, vacuous = 0;
    std::string witness;
    for (auto family : {RuleFamily::marginal, RuleFamily::conditional}) {
        for (const auto& report : {air_soundness_fuzz(family, q3, kRuleTrials, kSeed),
                                   team_soundness_fuzz(family, kRuleTrials, kSeed + 1)}) {
            for (const auto& r : report.rules) {
                instances += r.instances;
                held += r.premises_held;
                violations += r.violations;
                vacuous += r.premises_held == 0;
                if (r.witness && witness.empty()) witness = *r.witness;
            }
        }
    }
    std::string detail = std::to_string(instances) + " instances (" + std::to_string(kRuleTrials) +
                         " per rule per semantics), " + std::to_string(held) + " with true premises, " +
                         std::to_string(violations) + " violations, " + std::to_string(vacuous) +
                         " rules never had true premises";
    if (!witness.empty()) detail += "; witness: " + witness;
    return {violations == 0 && vacuous == 0, detail};
}

Outcome axiom_suites() {
    bool pass = true;
    std::string detail;
    for (const auto& model : {ClosureModel::vector_space(4), ClosureModel::lattice(3)}) {
        const auto report = axiom_suite(model, kSeed, kAxiomTrials);
        std::size_t failing = 0, vacuous = 0;
        for (const auto& r : report.results) {
            failing += !r.ok();
            vacuous += r.premises_held == 0;
        }
        pass = pass && failing == 0 && vacuous == 0;
        if (!detail.empty()) detail += "; ";
        detail += model.descriptor() + ": " + std::to_string(report.results.size()) + " axioms x " +
                  std::to_string(kAxiomTrials) + ", " + std::to_string(failing) + " failing, " +
                  std::to_string(vacuous) + " vacuous";
    }
    return {pass, detail};
}

Outcome sequences_and_federation() {
    const auto model = ClosureModel::vector_space(kFederationDim);
    std::size_t pairs = 0, bad_pairs = 0, witnesses = 0;
    for (std::size_t n = 1; n <= kFederationDim; ++n) {
        std::vector<Vector> seq;
        Vector d = Vector::zero(kFederationDim);
        for (std::size_t i = 0; i < n; ++i) {
            seq.push_back(Vector::unit(kFederationDim, i));
            d = d + seq.back();
        }
        // Each position goes to a, to b, or to neither.
        std::size_t codes = 1;
        for (std::size_t i = 0; i < n; ++i) codes *= 3;
        for (std::size_t code = 0; code < codes; ++code) {
            std::vector<Vector> a, b;
            for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) {
                if (c % 3 == 1) a.push_back(seq[i]);
                if (c % 3 == 2) b.push_back(seq[i]);
            }
            ++pairs;
            bad_pairs += !model.indep(a, b, {});
        }
        witnesses += check_federation_witness(model, seq, d, {});
    }
    return {bad_pairs == 0 && witnesses == kFederationDim,
            std::to_string(pairs - bad_pairs) + "/" + std::to_string(pairs) + " disjoint pairs independent, " +
                std::to_string(witnesses) + "/" + std::to_string(kFederationDim) + " sum witnesses federate"};
}

Outcome hyttinen_chains() {
    std::mt19937_64 rng(kSeed);
    const auto model = ClosureModel::vector_space(kChainDim);
    std::uniform_int_distribution<long> coef(-4, 4);
    std::uniform_int_distribution<unsigned long> den(1, 3);
    std::size_t ok = 0, checks = 0;
    for (std::size_t t = 0; t < kChainInstances; ++t) {
        std::vector<Vector> basis;
        do {
            basis.clear();
            for (std::size_t i = 0; i < kChainDim; ++i) {
                std::vector<Rational> c(kChainDim);
                for (auto& x : c) x = Rational(coef(rng), den(rng));
                basis.emplace_back(std::move(c));
            }
        } while (model.rank(basis) != kChainDim);
        const std::size_t m = 2 + t % (kChainDim - 1);
        const std::vector<Vector> d(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(m));
        try {
            const auto report = hyttinen_chain(model, d, {});
            checks += report.checks.size();
            ok += report.ok();
        } catch (const std::exception&) {
        }
    }
    return {ok == kChainInstances, std::to_string(ok) + "/" + std::to_string(kChainInstances) + " chains, " +
                                       std::to_string(checks) + " property checks"};
}

Outcome necessity_fixtures() {
    std::size_t ok = 0, total = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        ++total;
        try {
            const auto g = build_federation_gap_instance(n);
            bool shape = g.assignment.at(Variable("y")) == Vector::ones(n);
            for (std::size_t i = 0; i < n; ++i)
                shape = shape && g.assignment.at(Variable("x" + std::to_string(i))) == Vector::unit(n, i);
            ok += shape && air_satisfies_set(g.assignment, g.sigma) && !air_satisfies(g.assignment, g.goal) &&
                  derives_marginal(g.sigma, g.goal).status == Status::not_derivable;
        } catch (const std::exception&) {
        }
    }
    ++total;
    try {
        const auto g = algebraic_point_fixture();
        ok += air_satisfies_set(g.assignment, g.sigma) && !air_satisfies(g.assignment, g.goal) &&
              derives_marginal(g.sigma, g.goal).status == Status::not_derivable;
    } catch (const std::exception&) {
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                             " fixtures (gap instances n=2..6, algebraic point)"};
}

Outcome product_characterization() {
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<std::size_t> nvars(1, 5);
    std::size_t agree = 0, checks = 0;
    for (std::size_t t = 0; t < kProductTeams; ++t) {
        const VarSet dom = testing::numbered_vars(nvars(rng));
        const Team team = testing::random_team(dom, rng, 4, 20);
        for (int k = 0; k < 8; ++k) {
            const VarSet left = testing::random_subset(dom, rng);
            const VarSet right = testing::random_subset(set_difference(dom, left), rng, 0.5);
            const Atom a = Atom::marginal(left, right);
            ++checks;
            agree += satisfies_forall_exists(team, a) == satisfies_product(team, a);
        }
    }
    return {agree == checks, std::to_string(agree) + "/" + std::to_string(checks) + " atom checks agree over " +
                                 std::to_string(kProductTeams) + " teams"};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"C1 marginal derivability = no team countermodel = no synthesized counterexample", corpus_equivalence},
        {"C2 counterexample synthesis validity", synthesis_validity},
        {"C3 rule soundness fuzz (vector spaces and teams)", rule_soundness},
        {"C4 pre-independence axiom suites", axiom_suites},
        {"C5 independent sequences and federation witnesses", sequences_and_federation},
        {"C6 chain construction properties", hyttinen_chains},
        {"C7 necessity fixtures", necessity_fixtures},
        {"C8 team product characterization", product_characterization},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
