#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace indep {

/// A first-order variable, identified by its name.
///
/// Names follow `[A-Za-z_][A-Za-z0-9_]*`; construction rejects anything else.
class Variable {
public:
    explicit Variable(std::string name);

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Variable&, const Variable&) = default;
    friend std::strong_ordering operator<=>(const Variable& a, const Variable& b) {
        return a.name_ <=> b.name_;
    }

    static bool is_valid_name(std::string_view name) noexcept;

private:
    std::string name_;
};

/// Sorted, duplicate-free set of variables.
using VarSet = std::vector<Variable>;

VarSet make_varset(std::vector<Variable> vars);
VarSet make_varset(std::initializer_list<std::string_view> names);
VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& sub, const VarSet& super);
bool contains(const VarSet& set, const Variable& v);

enum class AtomKind { marginal, conditional };

/// An independence atom `left ⊥ right` or `left ⊥_{condition} right`.
///
/// All three sides are stored as canonical sets, so permutations and
/// repetitions of the written sequences never produce distinct atoms.
class Atom {
public:
    static Atom marginal(VarSet left, VarSet right);
    static Atom conditional(VarSet left, VarSet right, VarSet condition);

    const VarSet& left() const noexcept { return left_; }
    const VarSet& right() const noexcept { return right_; }
    const VarSet& condition() const noexcept { return condition_; }
    AtomKind kind() const noexcept { return kind_; }
    bool is_marginal() const noexcept { return kind_ == AtomKind::marginal; }

    /// Every variable occurring anywhere in the atom.
    VarSet vars() const;

    /// The same atom with left and right exchanged.
    Atom swapped() const;

    /// Marginal atoms become conditional atoms with an empty condition;
    /// conditional atoms are returned unchanged.
    Atom lifted() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

private:
    Atom(VarSet left, VarSet right, VarSet condition, AtomKind kind);

    VarSet left_;
    VarSet right_;
    VarSet condition_;
    AtomKind kind_;
};

/// Builds an atom from raw sequences. An empty condition gives a marginal atom.
Atom canonicalize(std::span<const Variable> left, std::span<const Variable> right,
                  std::span<const Variable> condition = {});

/// Σ together with the variable universe it is interpreted over.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(std::vector<Atom> atoms, VarSet extra_vars = {});

    void add(const Atom& a);
    void declare(const Variable& v);
    void declare(const VarSet& vs);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const VarSet& universe() const noexcept { return universe_; }
    bool empty() const noexcept { return atoms_.empty(); }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool contains(const Atom& a) const;
    bool all_marginal() const;

    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

private:
    std::vector<Atom> atoms_;
    VarSet universe_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position, std::size_t line = 0);

    /// Zero-based character offset within the offending line.
    std::size_t position() const noexcept { return position_; }
    /// One-based line number for file input; zero for single-atom input.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t position_;
    std::size_t line_;
};

Atom parse_atom(std::string_view text);
std::string format_atom(const Atom& a);
std::string format_varlist(const VarSet& vs);

/// Parses a ';'-separated inline list of atoms. Blank entries are skipped.
AtomSet parse_atom_list(std::string_view text);

/// Parses the line-oriented atom file format: one atom per line, '#'
/// comments, and an optional leading `vars: a,b,...` declaration.
AtomSet parse_atom_file(std::string_view text);

std::string format_atom_file(const AtomSet& sigma);

}  // namespace indep
