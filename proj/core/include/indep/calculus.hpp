#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "indep/atoms.hpp"
#include "indep/universe.hpp"

namespace indep {

/// Inference rules of the two calculi. Permutation and duplication rules
/// are absorbed by atom canonicalization and have no id.
enum class Rule { A3, B3, C3, D3, E3, A5, B5, C5, D5, E5, F5, G5 };

std::string_view rule_name(Rule r) noexcept;
std::optional<Rule> parse_rule(std::string_view name) noexcept;
std::size_t rule_arity(Rule r) noexcept;
bool is_marginal_rule(Rule r) noexcept;

inline constexpr Rule marginal_rules[] = {Rule::A3, Rule::B3, Rule::C3, Rule::D3, Rule::E3};
inline constexpr Rule conditional_rules[] = {Rule::A5, Rule::B5, Rule::C5, Rule::D5,
                                             Rule::E5, Rule::F5, Rule::G5};

/// True iff `conclusion` follows from `premises` (in order) by one
/// application of `rule`.
bool is_valid_instance(Rule rule, std::span<const Atom> premises, const Atom& conclusion);

struct ProofStep {
    Atom conclusion;
    std::optional<Rule> rule;  // empty for hypotheses
    std::vector<std::size_t> premises;

    bool is_hypothesis() const noexcept { return !rule.has_value(); }
};

/// A replayable deduction; the last step proves the goal.
class Proof {
public:
    Proof() = default;
    explicit Proof(std::vector<ProofStep> steps) : steps_(std::move(steps)) {}

    const std::vector<ProofStep>& steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }
    const Atom& conclusion() const { return steps_.back().conclusion; }

private:
    std::vector<ProofStep> steps_;
};

struct ProofCheck {
    bool ok = true;
    std::size_t failed_step = 0;
    std::string reason;
};

/// Replays every step: premises must precede their use, hypotheses must be
/// members of `sigma`, and every other step must be a valid rule instance.
ProofCheck validate_proof(const Proof& proof, const AtomSet& sigma);

/// `<index>. <atom> [<rule-id> <premise indices>]` or `... [hyp]`, one per line.
std::string format_proof(const Proof& proof);
Proof parse_proof(std::string_view text);
nlohmann::json proof_to_json(const Proof& proof);
Proof proof_from_json(const nlohmann::json& j);

enum class Status { derived, not_derivable, unknown };
std::string_view status_name(Status s) noexcept;

struct Verdict {
    Status status = Status::unknown;
    std::optional<Proof> proof;

    bool derived() const noexcept { return status == Status::derived; }
};

/// Saturation of a marginal Σ under rules a3–g3 over Σ's universe.
///
/// Forward chaining with a FIFO worklist; each atom records the first
/// derivation that produced it, so proofs are reproducible.
class MarginalClosure {
public:
    static constexpr std::size_t max_universe = 20;

    explicit MarginalClosure(const AtomSet& sigma);

    const AtomSet& sigma() const noexcept { return sigma_; }
    const VarSet& universe() const noexcept { return universe_.vars(); }
    std::size_t size() const noexcept { return records_.size(); }

    /// False for atoms mentioning variables outside the universe.
    bool contains(const Atom& a) const;

    /// Closure members in canonical atom order.
    std::vector<Atom> atoms() const;

    /// Throws std::invalid_argument when `a` is not in the closure.
    Proof proof_of(const Atom& a) const;

private:
    using Mask = Universe::Mask;
    using Key = std::uint64_t;

    struct Record {
        std::optional<Rule> rule;
        Key first = 0;
        Key second = 0;
        std::uint32_t order = 0;
    };

    static Key key(Mask l, Mask r) { return (Key{l} << 32) | r; }
    static Mask left_of(Key k) { return static_cast<Mask>(k >> 32); }
    static Mask right_of(Key k) { return static_cast<Mask>(k & 0xffffffffU); }

    bool insert(Key k, std::optional<Rule> rule, Key first, Key second);
    void saturate();
    std::optional<Key> key_for(const Atom& a) const;

    AtomSet sigma_;
    Universe universe_;
    std::unordered_map<Key, Record> records_;
    std::vector<Key> worklist_;
};

std::vector<Atom> saturate_marginal(const AtomSet& sigma);

/// Σ ⊢ goal in the marginal calculus; universe is Σ's universe plus the
/// goal's variables. Emits Derived with a proof or NotDerivable.
Verdict derives_marginal(const AtomSet& sigma, const Atom& goal);
Verdict derives_marginal(const MarginalClosure& closure, const Atom& goal);

/// Shrinks a non-derivable goal to a minimal non-derivable sub-atom by
/// scanning left then right variables in canonical order.
Atom minimal_nonderivable(const AtomSet& sigma, const Atom& goal);
Atom minimal_nonderivable(const MarginalClosure& closure, const Atom& goal);

/// Depth-bounded forward chaining under rules a5–h5.
///
/// Round 0 holds Σ (marginal atoms lifted) and every a5 instance over the
/// universe; each later round applies b5–g5 to all premise combinations.
class ConditionalClosure {
public:
    static constexpr std::size_t max_universe = 16;

    ConditionalClosure(const AtomSet& sigma, int depth);

    int depth() const noexcept { return depth_; }
    int rounds_run() const noexcept { return rounds_run_; }
    /// True when a round produced nothing new, i.e. the result is the full closure.
    bool saturated() const noexcept { return saturated_; }
    const VarSet& universe() const noexcept { return universe_.vars(); }
    std::size_t size() const noexcept { return records_.size(); }

    bool contains(const Atom& a) const;
    std::vector<Atom> atoms() const;
    Proof proof_of(const Atom& a) const;

private:
    using Mask = Universe::Mask;
    using Key = std::uint64_t;

    struct Record {
        std::optional<Rule> rule;
        Key first = 0;
        Key second = 0;
        std::uint32_t order = 0;
    };

    static Key key(Mask l, Mask r, Mask c) { return (Key{l} << 40) | (Key{r} << 20) | Key{c}; }
    static Mask left_of(Key k) { return static_cast<Mask>((k >> 40) & 0xfffffU); }
    static Mask right_of(Key k) { return static_cast<Mask>((k >> 20) & 0xfffffU); }
    static Mask cond_of(Key k) { return static_cast<Mask>(k & 0xfffffU); }

    std::optional<Key> key_for(const Atom& a) const;
    Atom atom_of(Key k) const;
    void run();

    AtomSet sigma_;
    Universe universe_;
    int depth_;
    int rounds_run_ = 0;
    bool saturated_ = false;
    std::unordered_map<Key, Record> records_;
};

std::vector<Atom> saturate_conditional(const AtomSet& sigma, int depth);

/// Derived with a proof if the goal appears within `depth` rounds, else Unknown.
Verdict derives_conditional(const AtomSet& sigma, const Atom& goal, int depth);

/// One concrete application of a rule, used by the soundness harnesses.
struct RuleInstance {
    Rule rule;
    std::vector<Atom> premises;
    Atom conclusion;
};

/// Draws a random instance of `rule` whose sides are subsets of `universe`.
RuleInstance sample_rule_instance(Rule rule, const VarSet& universe, std::mt19937_64& rng);

enum class RuleFamily { marginal, conditional };

std::span<const Rule> rules_of(RuleFamily family) noexcept;

struct RuleTally {
    Rule rule;
    std::size_t instances = 0;
    std::size_t premises_held = 0;
    std::size_t violations = 0;
    std::optional<std::string> witness;
};

/// Outcome of a soundness fuzz: per rule, how many sampled instances had
/// all premises true and how many of those had a false conclusion.
struct SoundnessReport {
    std::vector<RuleTally> rules;

    std::size_t violations() const noexcept;
    bool ok() const noexcept { return violations() == 0; }
};

std::string format_instance(const RuleInstance& inst);

}  // namespace indep
