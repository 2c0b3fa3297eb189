#include "indep/calculus.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace indep {

namespace {

using Mask = Universe::Mask;

// Iterates every subset of `full` (inclusive) in increasing numeric order.
template <class F>
void for_each_subset(Mask full, F&& f) {
    for (Mask m = 0;; ++m) {
        if ((m & ~full) != 0) continue;
        f(m);
        if (m == full) break;
    }
}

template <class F>
void for_each_bit(Mask m, F&& f) {
    while (m != 0) {
        const Mask low = m & (~m + 1);
        f(low);
        m &= m - 1;
    }
}

std::uint64_t pair_key(Mask a, Mask b) { return (std::uint64_t{a} << 32) | b; }

template <class Map, class K>
const auto* find_list(const Map& map, const K& k) {
    auto it = map.find(k);
    return it == map.end() ? nullptr : &it->second;
}

// Collects the ancestors of `target` and renumbers them in derivation order.
template <class Records, class ToAtom>
Proof extract_proof(const Records& records, std::uint64_t target, ToAtom&& to_atom) {
    std::vector<std::uint64_t> stack{target};
    std::unordered_map<std::uint64_t, bool> seen;
    std::vector<std::uint64_t> needed;
    while (!stack.empty()) {
        auto k = stack.back();
        stack.pop_back();
        if (seen[k]) continue;
        seen[k] = true;
        needed.push_back(k);
        const auto& rec = records.at(k);
        if (!rec.rule) continue;
        const auto arity = rule_arity(*rec.rule);
        if (arity >= 1) stack.push_back(rec.first);
        if (arity >= 2) stack.push_back(rec.second);
    }
    std::sort(needed.begin(), needed.end(),
              [&](auto a, auto b) { return records.at(a).order < records.at(b).order; });
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<ProofStep> steps;
    steps.reserve(needed.size());
    for (auto k : needed) {
        const auto& rec = records.at(k);
        ProofStep step{to_atom(k), rec.rule, {}};
        if (rec.rule) {
            const auto arity = rule_arity(*rec.rule);
            if (arity >= 1) step.premises.push_back(index.at(rec.first));
            if (arity >= 2) step.premises.push_back(index.at(rec.second));
        }
        index[k] = steps.size();
        steps.push_back(std::move(step));
    }
    return Proof(std::move(steps));
}

}  // namespace

std::string_view rule_name(Rule r) noexcept {
    switch (r) {
        case Rule::A3: return "A3";
        case Rule::B3: return "B3";
        case Rule::C3: return "C3";
        case Rule::D3: return "D3";
        case Rule::E3: return "E3";
        case Rule::A5: return "A5";
        case Rule::B5: return "B5";
        case Rule::C5: return "C5";
        case Rule::D5: return "D5";
        case Rule::E5: return "E5";
        case Rule::F5: return "F5";
        case Rule::G5: return "G5";
    }
    return "?";
}

std::optional<Rule> parse_rule(std::string_view name) noexcept {
    for (Rule r : marginal_rules)
        if (rule_name(r) == name) return r;
    for (Rule r : conditional_rules)
        if (rule_name(r) == name) return r;
    return std::nullopt;
}

std::size_t rule_arity(Rule r) noexcept {
    switch (r) {
        case Rule::A3:
        case Rule::A5: return 0;
        case Rule::D3:
        case Rule::E5:
        case Rule::F5:
        case Rule::G5: return 2;
        default: return 1;
    }
}

bool is_marginal_rule(Rule r) noexcept {
    return r == Rule::A3 || r == Rule::B3 || r == Rule::C3 || r == Rule::D3 || r == Rule::E3;
}

bool is_valid_instance(Rule rule, std::span<const Atom> p, const Atom& c) {
    if (p.size() != rule_arity(rule)) return false;
    const bool marginal = is_marginal_rule(rule);
    if (c.is_marginal() != marginal) return false;
    for (const auto& a : p)
        if (a.is_marginal() != marginal) return false;

    switch (rule) {
        case Rule::A3: return c.right().empty();
        case Rule::B3: return c == p[0].swapped();
        case Rule::C3: return c.left() == p[0].left() && is_subset(c.right(), p[0].right());
        case Rule::D3:
            return p[1].left() == set_union(p[0].left(), p[0].right()) &&
                   c == Atom::marginal(p[0].left(), set_union(p[0].right(), p[1].right()));
        case Rule::E3:
            return p[0].left().size() == 1 && p[0].left() == p[0].right() && c.left() == p[0].left();
        case Rule::A5: return c.condition() == c.left();
        case Rule::B5: return c == p[0].swapped();
        case Rule::C5:
            return c.condition() == p[0].condition() && is_subset(c.left(), p[0].left()) &&
                   is_subset(c.right(), p[0].right());
        case Rule::D5: {
            const auto& z = p[0].condition();
            return c == Atom::conditional(set_union(p[0].left(), z), set_union(p[0].right(), z), z);
        }
        case Rule::E5:
            return p[1].right() == p[0].right() &&
                   p[1].condition() == set_union(p[0].condition(), p[0].left()) &&
                   c == Atom::conditional(p[1].left(), p[0].right(), p[0].condition());
        case Rule::F5:
            return p[0].left() == p[0].right() && p[1].condition() == p[0].left() &&
                   c.condition() == p[0].condition() && c.right() == p[1].right() &&
                   set_union(c.left(), p[0].condition()) == p[1].left();
        case Rule::G5:
            return p[1].left() == set_union(p[0].left(), p[0].right()) &&
                   p[1].condition() == p[0].condition() &&
                   c == Atom::conditional(p[0].left(), set_union(p[0].right(), p[1].right()),
                                          p[0].condition());
    }
    return false;
}

std::string_view status_name(Status s) noexcept {
    switch (s) {
        case Status::derived: return "DERIVED";
        case Status::not_derivable: return "NOT DERIVABLE";
        case Status::unknown: return "UNKNOWN";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Marginal calculus

MarginalClosure::MarginalClosure(const AtomSet& sigma) : sigma_(sigma) {
    if (!sigma.all_marginal())
        throw std::invalid_argument("marginal calculus given a conditional atom");
    if (sigma.universe().size() > max_universe)
        throw std::length_error("marginal calculus supports at most " + std::to_string(max_universe) +
                                " variables");
    universe_ = Universe(sigma.universe());
    for (const auto& a : sigma)
        insert(key(universe_.mask(a.left()), universe_.mask(a.right())), std::nullopt, 0, 0);
    for_each_subset(universe_.full(), [&](Mask x) { insert(key(x, 0), Rule::A3, 0, 0); });
    saturate();
}

bool MarginalClosure::insert(Key k, std::optional<Rule> rule, Key first, Key second) {
    auto [it, fresh] = records_.try_emplace(k);
    if (!fresh) return false;
    it->second = Record{rule, first, second, static_cast<std::uint32_t>(records_.size() - 1)};
    worklist_.push_back(k);
    return true;
}

void MarginalClosure::saturate() {
    std::unordered_map<Mask, std::vector<Mask>> by_left;   // left -> rights
    std::unordered_map<Mask, std::vector<Key>> by_union;   // left|right -> atoms
    const Mask full = universe_.full();

    for (std::size_t head = 0; head < worklist_.size(); ++head) {
        const Key k = worklist_[head];
        const Mask l = left_of(k);
        const Mask r = right_of(k);
        by_left[l].push_back(r);
        by_union[l | r].push_back(k);

        insert(key(r, l), Rule::B3, k, 0);
        for_each_bit(r, [&](Mask b) { insert(key(l, r & ~b), Rule::C3, k, 0); });
        if (l == r && std::popcount(l) == 1)
            for_each_subset(full, [&](Mask y) { insert(key(l, y), Rule::E3, k, 0); });

        // k as the first premise x ⊥ y: pair with xy ⊥ z.
        if (const auto* rights = find_list(by_left, l | r))
            for (Mask z : *rights) insert(key(l, r | z), Rule::D3, k, key(l | r, z));
        // k as the second premise xy ⊥ z: pair with every x ⊥ y where x ∪ y = left.
        if (const auto* firsts = find_list(by_union, l))
            for (Key f : *firsts) insert(key(left_of(f), right_of(f) | r), Rule::D3, f, k);
    }
}

std::optional<MarginalClosure::Key> MarginalClosure::key_for(const Atom& a) const {
    if (!a.is_marginal()) return std::nullopt;
    if (!is_subset(a.vars(), universe_.vars())) return std::nullopt;
    return key(universe_.mask(a.left()), universe_.mask(a.right()));
}

bool MarginalClosure::contains(const Atom& a) const {
    auto k = key_for(a);
    return k && records_.contains(*k);
}

std::vector<Atom> MarginalClosure::atoms() const {
    std::vector<Atom> out;
    out.reserve(records_.size());
    for (const auto& [k, rec] : records_)
        out.push_back(Atom::marginal(universe_.vars_of(left_of(k)), universe_.vars_of(right_of(k))));
    std::sort(out.begin(), out.end());
    return out;
}

Proof MarginalClosure::proof_of(const Atom& a) const {
    auto k = key_for(a);
    if (!k || !records_.contains(*k))
        throw std::invalid_argument("atom '" + format_atom(a) + "' is not derivable");
    return extract_proof(records_, *k, [&](Key key) {
        return Atom::marginal(universe_.vars_of(left_of(key)), universe_.vars_of(right_of(key)));
    });
}

std::vector<Atom> saturate_marginal(const AtomSet& sigma) { return MarginalClosure(sigma).atoms(); }

Verdict derives_marginal(const AtomSet& sigma, const Atom& goal) {
    if (!goal.is_marginal()) throw std::invalid_argument("marginal calculus given a conditional goal");
    AtomSet extended = sigma;
    extended.declare(goal.vars());
    return derives_marginal(MarginalClosure(extended), goal);
}

Verdict derives_marginal(const MarginalClosure& closure, const Atom& goal) {
    if (!goal.is_marginal()) throw std::invalid_argument("marginal calculus given a conditional goal");
    if (!is_subset(goal.vars(), closure.universe())) return derives_marginal(closure.sigma(), goal);
    if (closure.contains(goal)) return Verdict{Status::derived, closure.proof_of(goal)};
    return Verdict{Status::not_derivable, std::nullopt};
}

Atom minimal_nonderivable(const AtomSet& sigma, const Atom& goal) {
    AtomSet extended = sigma;
    extended.declare(goal.vars());
    return minimal_nonderivable(MarginalClosure(extended), goal);
}

Atom minimal_nonderivable(const MarginalClosure& closure, const Atom& goal) {
    if (!goal.is_marginal()) throw std::invalid_argument("marginal calculus given a conditional goal");
    if (!is_subset(goal.vars(), closure.universe())) return minimal_nonderivable(closure.sigma(), goal);
    if (closure.contains(goal))
        throw std::invalid_argument("goal '" + format_atom(goal) + "' is derivable");

    VarSet left = goal.left();
    VarSet right = goal.right();
    for (const auto& v : goal.left()) {
        VarSet trial = set_difference(left, VarSet{v});
        if (!closure.contains(Atom::marginal(trial, right))) left = std::move(trial);
    }
    for (const auto& v : goal.right()) {
        VarSet trial = set_difference(right, VarSet{v});
        if (!closure.contains(Atom::marginal(left, trial))) right = std::move(trial);
    }
    return Atom::marginal(std::move(left), std::move(right));
}

// ---------------------------------------------------------------------------
// Conditional calculus

namespace {

struct ConditionalIndex {
    std::unordered_map<std::uint64_t, std::vector<Mask>> by_left_cond;        // (l,c) -> r
    std::unordered_map<std::uint64_t, std::vector<Mask>> by_right_cond;       // (r,c) -> l
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_union_cond;  // (l|r,c)
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_right_lcond; // (r,l|c)
    std::unordered_map<Mask, std::vector<std::uint64_t>> by_cond;             // c
    std::unordered_map<Mask, std::vector<Mask>> reflexive;                    // l (=r) -> c
};

}  // namespace

ConditionalClosure::ConditionalClosure(const AtomSet& sigma, int depth) : sigma_(sigma), depth_(depth) {
    if (depth < 1) throw std::invalid_argument("conditional depth must be positive");
    if (sigma.universe().size() > max_universe)
        throw std::length_error("conditional calculus supports at most " + std::to_string(max_universe) +
                                " variables");
    universe_ = Universe(sigma.universe());
    run();
}

void ConditionalClosure::run() {
    std::vector<Key> delta;
    auto add = [&](Key k, std::optional<Rule> rule, Key first, Key second, std::vector<Key>& out) {
        auto [it, fresh] = records_.try_emplace(k);
        if (!fresh) return;
        it->second = Record{rule, first, second, static_cast<std::uint32_t>(records_.size() - 1)};
        out.push_back(k);
    };

    for (const auto& a : sigma_) {
        const Atom lifted = a.lifted();
        add(key(universe_.mask(lifted.left()), universe_.mask(lifted.right()),
                universe_.mask(lifted.condition())),
            std::nullopt, 0, 0, delta);
    }
    const Mask full = universe_.full();
    for_each_subset(full, [&](Mask x) {
        for_each_subset(full, [&](Mask y) { add(key(x, y, x), Rule::A5, 0, 0, delta); });
    });

    ConditionalIndex idx;
    auto index = [&](Key k) {
        const Mask l = left_of(k), r = right_of(k), c = cond_of(k);
        idx.by_left_cond[pair_key(l, c)].push_back(r);
        idx.by_right_cond[pair_key(r, c)].push_back(l);
        idx.by_union_cond[pair_key(l | r, c)].push_back(k);
        idx.by_right_lcond[pair_key(r, l | c)].push_back(k);
        idx.by_cond[c].push_back(k);
        if (l == r) idx.reflexive[l].push_back(c);
    };
    for (Key k : delta) index(k);

    for (int round = 1; round <= depth_; ++round) {
        std::vector<Key> next;
        for (Key k : delta) {
            const Mask l = left_of(k), r = right_of(k), c = cond_of(k);
            add(key(r, l, c), Rule::B5, k, 0, next);
            for_each_bit(l, [&](Mask b) { add(key(l & ~b, r, c), Rule::C5, k, 0, next); });
            for_each_bit(r, [&](Mask b) { add(key(l, r & ~b, c), Rule::C5, k, 0, next); });
            add(key(l | c, r | c, c), Rule::D5, k, 0, next);

            // E5: x ⊥_z y and u ⊥_{zx} y give u ⊥_z y.
            if (const auto* us = find_list(idx.by_right_cond, pair_key(r, c | l)))
                for (Mask u : *us) add(key(u, r, c), Rule::E5, k, key(u, r, c | l), next);
            if (const auto* firsts = find_list(idx.by_right_lcond, pair_key(r, c)))
                for (Key f : *firsts) add(key(l, r, cond_of(f)), Rule::E5, f, k, next);

            // F5: y ⊥_z y and zx ⊥_y u give x ⊥_z u.
            if (l == r)
                if (const auto* seconds = find_list(idx.by_cond, l))
                    for (Key s : *seconds)
                        if ((c & ~left_of(s)) == 0)
                            add(key(left_of(s) & ~c, right_of(s), c), Rule::F5, k, s, next);
            if (const auto* zs = find_list(idx.reflexive, c))
                for (Mask z : *zs)
                    if ((z & ~l) == 0) add(key(l & ~z, r, z), Rule::F5, key(c, c, z), k, next);

            // G5: x ⊥_z y and xy ⊥_z u give x ⊥_z yu.
            if (const auto* us = find_list(idx.by_left_cond, pair_key(l | r, c)))
                for (Mask u : *us) add(key(l, r | u, c), Rule::G5, k, key(l | r, u, c), next);
            if (const auto* firsts = find_list(idx.by_union_cond, pair_key(l, c)))
                for (Key f : *firsts) add(key(left_of(f), right_of(f) | r, c), Rule::G5, f, k, next);
        }
        rounds_run_ = round;
        if (next.empty()) {
            saturated_ = true;
            break;
        }
        for (Key k : next) index(k);
        delta = std::move(next);
    }
}

std::optional<ConditionalClosure::Key> ConditionalClosure::key_for(const Atom& a) const {
    if (!is_subset(a.vars(), universe_.vars())) return std::nullopt;
    return key(universe_.mask(a.left()), universe_.mask(a.right()), universe_.mask(a.condition()));
}

Atom ConditionalClosure::atom_of(Key k) const {
    return Atom::conditional(universe_.vars_of(left_of(k)), universe_.vars_of(right_of(k)),
                             universe_.vars_of(cond_of(k)));
}

bool ConditionalClosure::contains(const Atom& a) const {
    auto k = key_for(a);
    return k && records_.contains(*k);
}

std::vector<Atom> ConditionalClosure::atoms() const {
    std::vector<Atom> out;
    out.reserve(records_.size());
    for (const auto& [k, rec] : records_) out.push_back(atom_of(k));
    std::sort(out.begin(), out.end());
    return out;
}

Proof ConditionalClosure::proof_of(const Atom& a) const {
    auto k = key_for(a);
    if (!k || !records_.contains(*k))
        throw std::invalid_argument("atom '" + format_atom(a) + "' was not derived");
    return extract_proof(records_, *k, [&](Key key) { return atom_of(key); });
}

std::vector<Atom> saturate_conditional(const AtomSet& sigma, int depth) {
    return ConditionalClosure(sigma, depth).atoms();
}

Verdict derives_conditional(const AtomSet& sigma, const Atom& goal, int depth) {
    AtomSet extended = sigma;
    extended.declare(goal.vars());
    ConditionalClosure closure(extended, depth);
    const Atom lifted = goal.lifted();
    if (closure.contains(lifted)) return Verdict{Status::derived, closure.proof_of(lifted)};
    return Verdict{Status::unknown, std::nullopt};
}

// ---------------------------------------------------------------------------

RuleInstance sample_rule_instance(Rule rule, const VarSet& universe, std::mt19937_64& rng) {
    Universe u(universe);
    const std::size_t n = u.size();
    auto subset = [&] {
        Mask m = 0;
        std::bernoulli_distribution pick(0.4);
        for (std::size_t i = 0; i < n; ++i)
            if (pick(rng)) m |= Mask{1} << i;
        return m;
    };
    auto V = [&](Mask m) { return u.vars_of(m); };
    auto M = [&](Mask l, Mask r) { return Atom::marginal(V(l), V(r)); };
    auto C = [&](Mask l, Mask r, Mask c) { return Atom::conditional(V(l), V(r), V(c)); };

    const Mask x = subset(), y = subset(), z = subset(), w = subset();
    switch (rule) {
        case Rule::A3: return {rule, {}, M(x, 0)};
        case Rule::B3: return {rule, {M(x, y)}, M(y, x)};
        case Rule::C3: return {rule, {M(x, y | z)}, M(x, y)};
        case Rule::D3: return {rule, {M(x, y), M(x | y, z)}, M(x, y | z)};
        case Rule::E3: {
            if (n == 0) return {Rule::A3, {}, M(0, 0)};
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            const Mask single = Mask{1} << pick(rng);
            return {rule, {M(single, single)}, M(single, y)};
        }
        case Rule::A5: return {rule, {}, C(x, y, x)};
        case Rule::B5: return {rule, {C(x, y, z)}, C(y, x, z)};
        case Rule::C5: return {rule, {C(x | w, y | subset(), z)}, C(x, y, z)};
        case Rule::D5: return {rule, {C(x, y, z)}, C(x | z, y | z, z)};
        case Rule::E5: return {rule, {C(x, y, z), C(w, y, z | x)}, C(w, y, z)};
        case Rule::F5: return {rule, {C(y, y, z), C(z | x, w, y)}, C(x, w, z)};
        case Rule::G5: return {rule, {C(x, y, z), C(x | y, w, z)}, C(x, y | w, z)};
    }
    throw std::logic_error("unknown rule");
}

std::span<const Rule> rules_of(RuleFamily family) noexcept {
    if (family == RuleFamily::marginal) return marginal_rules;
    return conditional_rules;
}

std::size_t SoundnessReport::violations() const noexcept {
    std::size_t total = 0;
    for (const auto& t : rules) total += t.violations;
    return total;
}

std::string format_instance(const RuleInstance& inst) {
    std::string out = std::string(rule_name(inst.rule)) + ": ";
    for (std::size_t i = 0; i < inst.premises.size(); ++i) {
        if (i != 0) out += " ; ";
        out += format_atom(inst.premises[i]);
    }
    out += inst.premises.empty() ? "=> " : " => ";
    out += format_atom(inst.conclusion);
    return out;
}

}  // namespace indep
