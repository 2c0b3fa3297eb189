#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace indep {

/// Exact rational, always in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Accepts integers and `p/q` with optional sign; rejects zero denominators.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

class Vector {
public:
    Vector() = default;
    explicit Vector(std::vector<Rational> coords);
    Vector(std::initializer_list<long> coords);

    static Vector zero(std::size_t dim);
    /// Standard basis vector e_i.
    static Vector unit(std::size_t dim, std::size_t i);
    static Vector ones(std::size_t dim);

    std::size_t dim() const noexcept { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<Rational>& coords() const noexcept { return coords_; }
    bool is_zero() const;
    bool is_integral() const;

    friend Vector operator+(const Vector& a, const Vector& b);
    friend Vector operator-(const Vector& a, const Vector& b);
    friend Vector operator*(const Rational& c, const Vector& v);
    friend bool operator==(const Vector& a, const Vector& b) { return a.coords_ == b.coords_; }

private:
    std::vector<Rational> coords_;
};

/// `[1/2, -3, 0]`.
Vector parse_vector(std::string_view text);
std::string format_vector(const Vector& v);
std::string format_elements(std::span<const Vector> s);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ModelKind { vector_space, lattice };

/// A finitely presented pregeometry: ℚ^d with linear span, or ℤ^d with
/// pure-subgroup closure.
class ClosureModel {
public:
    static ClosureModel vector_space(std::size_t dim);
    static ClosureModel lattice(std::size_t dim);

    ModelKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    /// `vspace:Q:<d>` or `lattice:Z:<d>`.
    std::string descriptor() const;

    /// Throws DimensionError on a length mismatch, std::invalid_argument on a
    /// non-integral element of a lattice.
    void check(const Vector& v) const;
    void check(std::span<const Vector> s) const;

    /// Dimension of the rational span; pure closure shares this rank function.
    std::size_t rank(std::span<const Vector> s) const;
    /// Lattice kind: false for non-integral `v`.
    bool in_closure(const Vector& v, std::span<const Vector> s) const;

    /// rank(A∪C∪B) − rank(C∪B) = rank(A∪C) − rank(C).
    bool indep(std::span<const Vector> a, std::span<const Vector> b, std::span<const Vector> base) const;

    friend bool operator==(const ClosureModel&, const ClosureModel&) = default;

private:
    ClosureModel(ModelKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    ModelKind kind_;
    std::size_t dim_;
};

ClosureModel parse_model(std::string_view text);

/// A ⊥_base B.
struct IndependenceQuery {
    std::vector<Vector> a;
    std::vector<Vector> b;
    std::vector<Vector> base;
};

bool indep(const ClosureModel& model, const IndependenceQuery& q);

/// A ternary relation on element sets of a model. Harnesses take one so
/// they can be pointed at deliberately broken relations.
using Relation = std::function<bool(const ClosureModel&, const IndependenceQuery&)>;

/// The rank relation, identical to indep().
Relation rank_relation();

/// Checks each element of A on its own against B. Not a pre-independence
/// relation: it breaks Symmetry and Exchange.
Relation per_element_relation();

struct AxiomResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t premises_held = 0;
    std::size_t failures = 0;
    std::optional<std::string> witness;

    bool ok() const noexcept { return failures == 0; }
};

struct AxiomReport {
    std::string model;
    std::vector<AxiomResult> results;

    bool ok() const noexcept;
    const AxiomResult* find(std::string_view name) const noexcept;
};

std::string format_report(const AxiomReport& report);

/// Samples queries from small low-rank element pools and checks the
/// pre-independence axioms, the iff form of Transitivity, Exchange and invariance
/// under random automorphisms (invertible rational or unimodular integer maps).
AxiomReport axiom_suite(const ClosureModel& model, std::uint64_t seed, std::size_t trials,
                        const Relation& relation = rank_relation());

/// Extensivity, monotonicity, idempotence and exchange of the closure
/// operator, plus submodularity of rank, on sampled finite sets.
AxiomReport pregeometry_laws(const ClosureModel& model, std::uint64_t seed, std::size_t trials);

/// (a_i | i < j) ⊥_base a_j for every j. Throws on repeated elements.
bool is_independent_sequence(const ClosureModel& model, std::span<const Vector> seq, std::span<const Vector> base);

/// tuple ⊥_base tuple.
bool is_algebraic(const ClosureModel& model, std::span<const Vector> tuple, std::span<const Vector> base);

/// d is dependent on the whole sequence over base and independent from
/// every one-element-deleted subsequence. Throws std::invalid_argument if the
/// sequence is not independent over base.
bool check_federation_witness(const ClosureModel& model, std::span<const Vector> seq, const Vector& d,
                              std::span<const Vector> base);

struct FederationBound {
    std::vector<Vector> sequence;
    /// witnesses[m-1] federates the prefix of length m.
    std::vector<Vector> witnesses;
};

/// Basis prefix of length n with witnesses d_m = a_0 + ... + a_{m-1}.
FederationBound federation_index_lower_bound(const ClosureModel& model, std::size_t n);

using Combiner = std::function<Vector(const Vector&, const Vector&)>;

Combiner sum_combiner();

class ChainStepError : public std::runtime_error {
public:
    ChainStepError(std::size_t step, std::string property, const std::string& what)
        : std::runtime_error(what), step_(step), property_(std::move(property)) {}

    std::size_t step() const noexcept { return step_; }
    const std::string& property() const noexcept { return property_; }

private:
    std::size_t step_;
    std::string property_;
};

struct ChainCheck {
    std::size_t index;
    std::string property;  // "i", "ii", "iii", "iv"
    bool holds;
};

struct ChainReport {
    std::vector<Vector> chain;
    std::vector<ChainCheck> checks;
    /// d*_{m-1} ∈ cl(A₀ ∪ D₀) and outside cl(A₀ ∪ D) for every D ⊊ D₀.
    bool federated = false;

    bool ok() const noexcept;
};

/// d*_0 = d_0, d*_{i+1} = combiner(d*_i, d_{i+1}), closures taken over A₀.
/// Throws std::invalid_argument if D₀ is not independent over A₀ and
/// ChainStepError when a combiner output misses its required region.
ChainReport hyttinen_chain(const ClosureModel& model, std::span<const Vector> d, std::span<const Vector> base,
                           const Combiner& combiner = sum_combiner());

}  // namespace indep
