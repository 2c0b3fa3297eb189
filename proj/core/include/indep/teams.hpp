#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "indep/atoms.hpp"
#include "indep/calculus.hpp"

namespace indep {

/// A team: a set of total assignments from `dom` into small integers.
///
/// Rows are kept sorted and duplicate-free; column i holds the value of
/// dom()[i].
class Team {
public:
    using Row = std::vector<int>;

    Team() = default;
    Team(VarSet dom, std::vector<Row> rows);

    const VarSet& dom() const noexcept { return dom_; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    std::size_t column(const Variable& v) const;
    int value(std::size_t row, const Variable& v) const { return rows_[row][column(v)]; }

    friend bool operator==(const Team&, const Team&) = default;

private:
    VarSet dom_;
    std::vector<Row> rows_;
};

/// ∀ s, s' ∃ s'': s'' agrees with s on the left side and with s' on the right.
bool satisfies_forall_exists(const Team& team, const Atom& a);

/// Projection test: the team projected on left ∪ right equals the product
/// of its left and right projections.
bool satisfies_product(const Team& team, const Atom& a);

/// Marginal atom satisfaction. Uses the product test for disjoint sides and
/// the direct ∀∃ definition otherwise.
bool satisfies_marginal(const Team& team, const Atom& a);

/// Conditional atom satisfaction: the marginal check inside every group of
/// rows that agree on the condition. Marginal atoms are read as having an
/// empty condition.
bool satisfies_conditional(const Team& team, const Atom& a);

bool satisfies(const Team& team, const Atom& a);
bool satisfies_set(const Team& team, const AtomSet& sigma);

struct TeamBounds {
    int max_values = 4;
    int max_rows = 16;
    /// Cap on the number of candidate teams examined.
    std::size_t max_candidates = 1'000'000;
};

/// Deterministic countermodel search over a fixed variable domain.
///
/// Candidates are canonical teams ordered by value count, then row count,
/// then lexicographic row codes. Canonical means rows strictly increase and
/// every column introduces its values in increasing order, which loses no
/// team up to per-variable relabelling. The search returns the first
/// candidate that satisfies Σ and refutes the goal. For all-marginal queries
/// over small domains the candidates are summarised once into a table of
/// distinct projection-count profiles, so repeated queries cost a table scan.
class TeamSearch {
public:
    explicit TeamSearch(VarSet domain, TeamBounds bounds = {});

    const VarSet& domain() const noexcept { return domain_; }
    const TeamBounds& bounds() const noexcept { return bounds_; }

    std::optional<Team> find(const AtomSet& sigma, const Atom& goal);

    /// find() for several goals against one Σ, sharing a single pass.
    std::vector<std::optional<Team>> find_each(const AtomSet& sigma, std::span<const Atom> goals);

    /// Candidates examined by the last full enumeration, and whether that
    /// enumeration covered the whole bounded space.
    std::size_t candidates() const noexcept { return candidates_; }
    bool exhaustive() const noexcept { return exhaustive_; }
    std::size_t profile_count() const noexcept { return profiles_.size(); }

private:
    struct Profile {
        std::vector<std::uint32_t> distinct;
        std::vector<std::uint64_t> codes;
        /// Bit l * 2^n + r is set iff the marginal atom with side masks l, r holds.
        std::vector<std::uint64_t> holds;
    };

    static constexpr std::size_t max_profile_domain = 4;

    void build_profiles();
    std::optional<Team> scan(const AtomSet& sigma, const Atom& goal);
    bool use_profiles(const AtomSet& sigma) const;
    std::size_t atom_bit(const Atom& a) const;
    Team verified(Team team, const AtomSet& sigma, const Atom& goal) const;
    Team decode(const std::vector<std::uint64_t>& codes) const;

    VarSet domain_;
    TeamBounds bounds_;
    bool profiles_built_ = false;
    std::vector<Profile> profiles_;
    std::size_t candidates_ = 0;
    bool exhaustive_ = false;
};

/// Searches for a team satisfying Σ and refuting `goal` over the domain
/// sigma.universe() ∪ vars(goal). The returned team is re-verified.
std::optional<Team> find_counterexample_team(const AtomSet& sigma, const Atom& goal, TeamBounds bounds = {});

/// Soundness fuzz of the rule schemas against random teams.
SoundnessReport team_soundness_fuzz(RuleFamily family, std::size_t trials, std::uint64_t seed);

/// CSV with a header of variable names and one integer row per assignment.
Team read_team_csv(std::istream& in);
Team parse_team_csv(std::string_view text);
void write_team_csv(std::ostream& out, const Team& team);
std::string format_team_csv(const Team& team);

}  // namespace indep
