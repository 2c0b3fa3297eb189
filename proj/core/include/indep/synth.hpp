#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "indep/atoms.hpp"
#include "indep/calculus.hpp"
#include "indep/pregeom.hpp"

namespace indep {

class UnboundVariable : public std::out_of_range {
public:
    explicit UnboundVariable(const Variable& v)
        : std::out_of_range("variable '" + v.name() + "' is not bound by the assignment"), var_(v) {}

    const Variable& variable() const noexcept { return var_; }

private:
    Variable var_;
};

/// Variables mapped into the ground set of a closure model.
class AirAssignment {
public:
    AirAssignment(ClosureModel model, std::map<Variable, Vector> values);

    const ClosureModel& model() const noexcept { return model_; }
    const std::map<Variable, Vector>& values() const noexcept { return values_; }
    VarSet domain() const;

    /// Throws UnboundVariable.
    const Vector& at(const Variable& v) const;
    std::vector<Vector> image(const VarSet& vs) const;

private:
    ClosureModel model_;
    std::map<Variable, Vector> values_;
};

/// s(left) ⊥_{s(condition)} s(right) under `relation` (the rank relation by default).
bool air_satisfies(const AirAssignment& s, const Atom& a, const Relation& relation = rank_relation());
bool air_satisfies_set(const AirAssignment& s, const AtomSet& sigma, const Relation& relation = rank_relation());

/// Random assignments over a small universe versus random rule instances.
SoundnessReport air_soundness_fuzz(RuleFamily family, const ClosureModel& model, std::size_t trials,
                                   std::uint64_t seed, const Relation& relation = rank_relation());

enum class SynthCase { shared_variable, disjoint_sides };

/// "Case1" or "Case2".
std::string_view case_name(SynthCase c) noexcept;

struct AtomCheck {
    Atom atom;
    bool expected;
    bool holds;
};

struct Counterexample {
    AirAssignment assignment;
    Atom refuted;
    AtomSet satisfied;
    SynthCase kind;
    Atom minimal;
    /// Variables v with Σ ⊢ v ⊥ v, and the rest of the universe.
    VarSet algebraic;
    VarSet free;
    std::vector<AtomCheck> verification;
};

nlohmann::json counterexample_to_json(const Counterexample& c);

class GoalDerivable : public std::runtime_error {
public:
    GoalDerivable(const Atom& goal, Proof proof)
        : std::runtime_error("goal '" + format_atom(goal) + "' is derivable; no counterexample exists"),
          proof_(std::move(proof)) {}

    const Proof& proof() const noexcept { return proof_; }

private:
    Proof proof_;
};

/// Assignment into ℚᵏ satisfying Σ and refuting `goal`. Throws GoalDerivable
/// when Σ ⊢ goal, and std::logic_error if the built assignment fails its own
/// verification.
Counterexample synthesize_counterexample(const AtomSet& sigma, const Atom& goal);
Counterexample synthesize_counterexample(const MarginalClosure& closure, const Atom& goal);

struct GapInstance {
    AtomSet sigma;
    Atom goal;
    AirAssignment assignment;
};

/// Σ = {x_0..x_{i-1} ⊥ x_i} ∪ {x_0..x̂_i..x_{n-1} ⊥ y}, goal x_0..x_{n-1} ⊥ y,
/// s(x_i) = e_i and s(y) = (1,..,1) in ℚⁿ. Verified before returning.
GapInstance build_federation_gap_instance(std::size_t n);

/// x ⊥ x against y ⊥ z with s(x) = 0, s(y) = 1, s(z) = 2 in ℚ¹.
GapInstance algebraic_point_fixture();

}  // namespace indep
