#include <random>

#include "indep/synth.hpp"
#include "sampling.hpp"

namespace indep {

AirAssignment::AirAssignment(ClosureModel model, std::map<Variable, Vector> values)
    : model_(std::move(model)), values_(std::move(values)) {
    for (const auto& [v, x] : values_) model_.check(x);
}

VarSet AirAssignment::domain() const {
    VarSet out;
    for (const auto& [v, x] : values_) out.push_back(v);
    return out;
}

const Vector& AirAssignment::at(const Variable& v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw UnboundVariable(v);
    return it->second;
}

std::vector<Vector> AirAssignment::image(const VarSet& vs) const {
    std::vector<Vector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(at(v));
    return out;
}

bool air_satisfies(const AirAssignment& s, const Atom& a, const Relation& relation) {
    return relation(s.model(), {s.image(a.left()), s.image(a.right()), s.image(a.condition())});
}

bool air_satisfies_set(const AirAssignment& s, const AtomSet& sigma, const Relation& relation) {
    for (const auto& a : sigma)
        if (!air_satisfies(s, a, relation)) return false;
    return true;
}

SoundnessReport air_soundness_fuzz(RuleFamily family, const ClosureModel& model, std::size_t trials,
                                   std::uint64_t seed, const Relation& relation) {
    std::mt19937_64 rng(seed);
    const VarSet universe = make_varset({"u", "v", "w", "x", "y"});
    SoundnessReport report;
    for (Rule rule : rules_of(family)) {
        RuleTally tally{rule, 0, 0, 0, std::nullopt};
        for (std::size_t t = 0; t < trials; ++t) {
            const auto pool = detail::sample_pool(model, rng);
            std::map<Variable, Vector> values;
            for (const auto& v : universe)
                values.emplace(v, pool[static_cast<std::size_t>(detail::uniform(rng, 0, static_cast<int>(pool.size()) - 1))]);
            const AirAssignment s(model, std::move(values));
            const auto inst = sample_rule_instance(rule, universe, rng);
            ++tally.instances;
            bool premises = true;
            for (const auto& p : inst.premises) premises = premises && air_satisfies(s, p, relation);
            if (!premises) continue;
            ++tally.premises_held;
            if (!air_satisfies(s, inst.conclusion, relation)) {
                ++tally.violations;
                if (!tally.witness) {
                    std::string w = format_instance(inst) + " under";
                    for (const auto& [v, x] : s.values()) w += " " + v.name() + "=" + format_vector(x);
                    tally.witness = w;
                }
            }
        }
        report.rules.push_back(std::move(tally));
    }
    return report;
}

std::string_view case_name(SynthCase c) noexcept { return c == SynthCase::shared_variable ? "Case1" : "Case2"; }

nlohmann::json counterexample_to_json(const Counterexample& c) {
    nlohmann::json assignment = nlohmann::json::object();
    for (const auto& [v, x] : c.assignment.values()) assignment[v.name()] = format_vector(x);
    auto names = [](const VarSet& vs) {
        std::vector<std::string> out;
        for (const auto& v : vs) out.push_back(v.name());
        return out;
    };
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& chk : c.verification)
        checks.push_back({{"atom", format_atom(chk.atom)},
                          {"role", chk.expected ? "sigma" : "goal"},
                          {"expected", chk.expected},
                          {"holds", chk.holds}});
    return {{"model", c.assignment.model().descriptor()},
            {"case", case_name(c.kind)},
            {"refuted", format_atom(c.refuted)},
            {"minimal_atom", format_atom(c.minimal)},
            {"algebraic", names(c.algebraic)},
            {"free", names(c.free)},
            {"assignment", assignment},
            {"verification", checks}};
}

Counterexample synthesize_counterexample(const AtomSet& sigma, const Atom& goal) {
    AtomSet extended = sigma;
    extended.declare(goal.vars());
    return synthesize_counterexample(MarginalClosure(extended), goal);
}

Counterexample synthesize_counterexample(const MarginalClosure& closure, const Atom& goal) {
    if (!goal.is_marginal()) throw std::invalid_argument("counterexamples are only built for marginal goals");
    if (!is_subset(goal.vars(), closure.universe())) return synthesize_counterexample(closure.sigma(), goal);
    if (closure.contains(goal)) throw GoalDerivable(goal, closure.proof_of(goal));

    const Atom minimal = minimal_nonderivable(closure, goal);
    VarSet algebraic, free;
    for (const auto& v : closure.universe())
        (closure.contains(Atom::marginal({v}, {v})) ? algebraic : free).push_back(v);

    const auto& left = minimal.left();
    const auto& right = minimal.right();
    const VarSet shared = set_intersection(left, right);
    const SynthCase kind = shared.empty() ? SynthCase::disjoint_sides : SynthCase::shared_variable;

    std::size_t k = 1;
    std::vector<Variable> w;
    if (kind == SynthCase::disjoint_sides) {
        w.assign(left.begin() + 1, left.end());
        w.insert(w.end(), right.begin(), right.end());
        k = w.size();
    }
    const auto model = ClosureModel::vector_space(k);
    std::map<Variable, Vector> values;
    for (const auto& v : closure.universe()) values.emplace(v, Vector::zero(k));
    if (kind == SynthCase::shared_variable) {
        values.at(shared.front()) = Vector::unit(k, 0);
    } else {
        Vector d = Vector::zero(k);
        for (std::size_t i = 0; i < k; ++i) {
            values.at(w[i]) = Vector::unit(k, i);
            d = d + Vector::unit(k, i);
        }
        values.at(left.front()) = d;
    }

    Counterexample out{AirAssignment(model, std::move(values)), goal, closure.sigma(), kind, minimal,
                       std::move(algebraic), std::move(free), {}};
    bool verified = true;
    for (const auto& a : closure.sigma()) {
        const bool h = air_satisfies(out.assignment, a);
        out.verification.push_back({a, true, h});
        verified = verified && h;
    }
    const bool g = air_satisfies(out.assignment, goal);
    out.verification.push_back({goal, false, g});
    if (!verified || g)
        throw std::logic_error("synthesized assignment for '" + format_atom(goal) + "' failed verification");
    return out;
}

namespace {

void verify_gap(const GapInstance& g) {
    if (!air_satisfies_set(g.assignment, g.sigma) || air_satisfies(g.assignment, g.goal))
        throw std::logic_error("gap instance assignment does not separate sigma from the goal");
    if (derives_marginal(g.sigma, g.goal).derived())
        throw std::logic_error("gap instance goal is derivable");
}

}  // namespace

GapInstance build_federation_gap_instance(std::size_t n) {
    if (n < 2) throw std::invalid_argument("federation gap instance needs n >= 2");
    std::vector<Variable> x;
    for (std::size_t i = 0; i < n; ++i) x.emplace_back("x" + std::to_string(i));
    const Variable y("y");

    AtomSet sigma;
    for (std::size_t i = 0; i < n; ++i) {
        sigma.add(Atom::marginal(make_varset(std::vector<Variable>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i))),
                                 {x[i]}));
        std::vector<Variable> rest;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) rest.push_back(x[j]);
        sigma.add(Atom::marginal(make_varset(std::move(rest)), {y}));
    }
    const Atom goal = Atom::marginal(make_varset(x), {y});

    std::map<Variable, Vector> values;
    for (std::size_t i = 0; i < n; ++i) values.emplace(x[i], Vector::unit(n, i));
    values.emplace(y, Vector::ones(n));
    GapInstance g{std::move(sigma), goal, AirAssignment(ClosureModel::vector_space(n), std::move(values))};
    verify_gap(g);
    return g;
}

GapInstance algebraic_point_fixture() {
    const Variable x("x"), y("y"), z("z");
    AtomSet sigma({Atom::marginal({x}, {x})});
    std::map<Variable, Vector> values{{x, Vector{0}}, {y, Vector{1}}, {z, Vector{2}}};
    GapInstance g{std::move(sigma), Atom::marginal({y}, {z}), AirAssignment(ClosureModel::vector_space(1), std::move(values))};
    verify_gap(g);
    return g;
}

}  // namespace indep
