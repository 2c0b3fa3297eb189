#include <algorithm>
#include <map>
#include <stdexcept>

#include "indep/teams.hpp"

namespace indep {

namespace {

using Code = std::uint64_t;

int bits_for(int values) {
    int bits = 1;
    while ((1 << bits) < values) ++bits;
    return bits;
}

// Rows are packed with column 0 in the most significant digit, so numeric
// order of codes is lexicographic order of rows.
struct Packing {
    std::size_t n = 0;
    int bits = 1;

    int shift(std::size_t col) const { return static_cast<int>((n - 1 - col)) * bits; }
    Code digit_mask(std::size_t col) const { return ((Code{1} << bits) - 1) << shift(col); }
    int digit(Code c, std::size_t col) const { return static_cast<int>((c >> shift(col)) & ((Code{1} << bits) - 1)); }
};

struct EncodedAtom {
    Code left = 0, right = 0, cond = 0;
    bool marginal = true;
};

std::uint32_t distinct(std::span<const Code> rows, Code mask, std::vector<Code>& scratch) {
    scratch.clear();
    for (Code r : rows) scratch.push_back(r & mask);
    std::sort(scratch.begin(), scratch.end());
    return static_cast<std::uint32_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
}

// Over a set of rows, L ⊥ R holds iff every pair of left and right
// projections occurs jointly, i.e. the distinct counts multiply.
bool product_holds(std::span<const Code> rows, Code l, Code r, std::vector<Code>& scratch) {
    const auto dl = distinct(rows, l, scratch);
    const auto dr = distinct(rows, r, scratch);
    return distinct(rows, l | r, scratch) == dl * dr;
}

bool holds(std::span<const Code> rows, const EncodedAtom& a, std::vector<Code>& scratch,
           std::vector<Code>& grouped) {
    if (a.marginal || a.cond == 0) return product_holds(rows, a.left, a.right, scratch);
    grouped.assign(rows.begin(), rows.end());
    std::stable_sort(grouped.begin(), grouped.end(),
                     [&](Code x, Code y) { return (x & a.cond) < (y & a.cond); });
    std::size_t start = 0;
    while (start < grouped.size()) {
        std::size_t end = start + 1;
        while (end < grouped.size() && (grouped[end] & a.cond) == (grouped[start] & a.cond)) ++end;
        std::vector<Code> group(grouped.begin() + static_cast<std::ptrdiff_t>(start),
                                grouped.begin() + static_cast<std::ptrdiff_t>(end));
        if (!product_holds(group, a.left, a.right, scratch)) return false;
        start = end;
    }
    return true;
}

/// Depth-first walk over canonical teams in search order.
class Enumerator {
public:
    Enumerator(Packing pack, TeamBounds bounds) : pack_(pack), bounds_(bounds) {}

    /// Calls `leaf(rows)` per candidate until it returns true or the budget
    /// runs out. Returns true iff `leaf` stopped the walk.
    template <class Leaf>
    bool run(Leaf&& leaf) {
        count_ = 0;
        exhausted_ = false;
        for (int v = 1; v <= bounds_.max_values; ++v) {
            const auto limit = row_limit(v);
            for (std::size_t r = 1; r <= limit; ++r) {
                rows_.assign(r, 0);
                colmax_.assign(r + 1, std::vector<int>(pack_.n, -1));
                level_ = v;
                switch (walk(0, leaf)) {
                    case Walk::stop: return true;
                    case Walk::budget: return false;
                    case Walk::done: break;
                }
            }
        }
        exhausted_ = true;
        return false;
    }

    std::size_t count() const noexcept { return count_; }
    bool exhausted() const noexcept { return exhausted_; }

private:
    enum class Walk { done, stop, budget };

    std::size_t row_limit(int v) const {
        std::size_t space = 1;
        for (std::size_t i = 0; i < pack_.n && space <= static_cast<std::size_t>(bounds_.max_rows); ++i)
            space *= static_cast<std::size_t>(v);
        return std::min(space, static_cast<std::size_t>(bounds_.max_rows));
    }

    int cap(std::size_t depth, std::size_t col) const { return std::min(level_ - 1, colmax_[depth][col] + 1); }

    // Next code after `cur` whose digits respect the caps at `depth`.
    std::optional<Code> successor(std::size_t depth, Code cur) const {
        for (std::size_t col = pack_.n; col-- > 0;) {
            const int d = pack_.digit(cur, col);
            if (d < cap(depth, col)) {
                Code next = (cur & ~pack_.digit_mask(col)) | (Code(d + 1) << pack_.shift(col));
                for (std::size_t c = col + 1; c < pack_.n; ++c) next &= ~pack_.digit_mask(c);
                return next;
            }
        }
        return std::nullopt;
    }

    template <class Leaf>
    Walk walk(std::size_t depth, Leaf& leaf) {
        if (depth == rows_.size()) {
            const auto& top = colmax_[depth];
            if (std::find(top.begin(), top.end(), level_ - 1) == top.end() && !(level_ == 1)) return Walk::done;
            if (count_ >= bounds_.max_candidates) return Walk::budget;
            ++count_;
            return leaf(std::span<const Code>(rows_)) ? Walk::stop : Walk::done;
        }
        std::optional<Code> code = Code{0};
        if (depth > 0) code = successor(depth, rows_[depth - 1]);
        for (; code; code = successor(depth, *code)) {
            rows_[depth] = *code;
            auto& next = colmax_[depth + 1];
            for (std::size_t c = 0; c < pack_.n; ++c) next[c] = std::max(colmax_[depth][c], pack_.digit(*code, c));
            if (auto w = walk(depth + 1, leaf); w != Walk::done) return w;
        }
        return Walk::done;
    }

    Packing pack_;
    TeamBounds bounds_;
    int level_ = 1;
    std::vector<Code> rows_;
    std::vector<std::vector<int>> colmax_;
    std::size_t count_ = 0;
    bool exhausted_ = false;
};

Packing packing_for(std::size_t n, int max_values) {
    Packing p{n, bits_for(max_values)};
    if (n * static_cast<std::size_t>(p.bits) > 64)
        throw std::length_error("team search domain of " + std::to_string(n) + " variables with " +
                                std::to_string(max_values) + " values exceeds 64-bit row codes");
    return p;
}

Code column_mask(const Packing& pack, const VarSet& domain, const VarSet& vs) {
    Code m = 0;
    for (const auto& v : vs) {
        auto it = std::lower_bound(domain.begin(), domain.end(), v);
        if (it == domain.end() || *it != v)
            throw std::invalid_argument("variable '" + v.name() + "' is outside the search domain");
        m |= pack.digit_mask(static_cast<std::size_t>(it - domain.begin()));
    }
    return m;
}

std::size_t subset_index(const VarSet& domain, const VarSet& vs) {
    std::size_t idx = 0;
    for (const auto& v : vs) {
        auto it = std::lower_bound(domain.begin(), domain.end(), v);
        if (it == domain.end() || *it != v)
            throw std::invalid_argument("variable '" + v.name() + "' is outside the search domain");
        idx |= std::size_t{1} << (it - domain.begin());
    }
    return idx;
}

}  // namespace

TeamSearch::TeamSearch(VarSet domain, TeamBounds bounds) : domain_(make_varset(std::move(domain))), bounds_(bounds) {
    if (bounds_.max_values < 1 || bounds_.max_rows < 1) throw std::invalid_argument("team bounds must be positive");
    (void)packing_for(domain_.size(), bounds_.max_values);
}

Team TeamSearch::decode(const std::vector<std::uint64_t>& codes) const {
    const auto pack = packing_for(domain_.size(), bounds_.max_values);
    std::vector<Team::Row> rows;
    for (Code c : codes) {
        Team::Row row(domain_.size());
        for (std::size_t col = 0; col < row.size(); ++col) row[col] = pack.digit(c, col);
        rows.push_back(std::move(row));
    }
    return Team(domain_, std::move(rows));
}

void TeamSearch::build_profiles() {
    const auto pack = packing_for(domain_.size(), bounds_.max_values);
    const std::size_t subsets = std::size_t{1} << domain_.size();
    std::vector<Code> masks(subsets, 0);
    for (std::size_t s = 0; s < subsets; ++s)
        for (std::size_t c = 0; c < domain_.size(); ++c)
            if (s & (std::size_t{1} << c)) masks[s] |= pack.digit_mask(c);

    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    std::vector<Code> scratch;
    std::vector<std::uint32_t> counts(subsets);
    Enumerator walk(pack, bounds_);
    walk.run([&](std::span<const Code> rows) {
        for (std::size_t s = 0; s < subsets; ++s) counts[s] = distinct(rows, masks[s], scratch);
        if (seen.emplace(counts, profiles_.size()).second) {
            std::vector<std::uint64_t> holds((subsets * subsets + 63) / 64, 0);
            for (std::size_t l = 0; l < subsets; ++l)
                for (std::size_t r = 0; r < subsets; ++r)
                    if (counts[l | r] == counts[l] * counts[r]) {
                        const auto b = l * subsets + r;
                        holds[b / 64] |= std::uint64_t{1} << (b % 64);
                    }
            profiles_.push_back({counts, std::vector<Code>(rows.begin(), rows.end()), std::move(holds)});
        }
        return false;
    });
    candidates_ = walk.count();
    exhaustive_ = walk.exhausted();
    profiles_built_ = true;
}

std::optional<Team> TeamSearch::scan(const AtomSet& sigma, const Atom& goal) {
    const auto pack = packing_for(domain_.size(), bounds_.max_values);
    auto encode = [&](const Atom& a) {
        return EncodedAtom{column_mask(pack, domain_, a.left()), column_mask(pack, domain_, a.right()),
                           column_mask(pack, domain_, a.condition()), a.is_marginal()};
    };
    const EncodedAtom g = encode(goal);
    std::vector<EncodedAtom> hyps;
    for (const auto& a : sigma) hyps.push_back(encode(a));

    std::vector<Code> scratch, grouped, found;
    Enumerator walk(pack, bounds_);
    const bool stopped = walk.run([&](std::span<const Code> rows) {
        if (holds(rows, g, scratch, grouped)) return false;
        for (const auto& h : hyps)
            if (!holds(rows, h, scratch, grouped)) return false;
        found.assign(rows.begin(), rows.end());
        return true;
    });
    candidates_ = walk.count();
    exhaustive_ = walk.exhausted();
    if (!stopped) return std::nullopt;
    return decode(found);
}

bool TeamSearch::use_profiles(const AtomSet& sigma) const {
    return sigma.all_marginal() && domain_.size() <= max_profile_domain;
}

std::size_t TeamSearch::atom_bit(const Atom& a) const {
    return (subset_index(domain_, a.left()) << domain_.size()) | subset_index(domain_, a.right());
}

Team TeamSearch::verified(Team team, const AtomSet& sigma, const Atom& goal) const {
    if (!satisfies_set(team, sigma) || satisfies(team, goal))
        throw std::logic_error("team search produced a candidate that fails re-verification");
    return team;
}

std::optional<Team> TeamSearch::find(const AtomSet& sigma, const Atom& goal) {
    const Atom goals[] = {goal};
    return std::move(find_each(sigma, goals).front());
}

std::vector<std::optional<Team>> TeamSearch::find_each(const AtomSet& sigma, std::span<const Atom> goals) {
    std::vector<std::optional<Team>> out(goals.size());
    const bool profiled =
        use_profiles(sigma) && std::all_of(goals.begin(), goals.end(), [](const Atom& g) { return g.is_marginal(); });
    if (!profiled) {
        for (std::size_t i = 0; i < goals.size(); ++i)
            if (auto t = scan(sigma, goals[i])) out[i] = verified(std::move(*t), sigma, goals[i]);
        return out;
    }
    if (!profiles_built_) build_profiles();
    auto bit = [](const Profile& p, std::size_t b) { return (p.holds[b / 64] >> (b % 64)) & 1U; };
    std::vector<std::size_t> hyps, pending;
    for (const auto& a : sigma) hyps.push_back(atom_bit(a));
    std::vector<std::size_t> goal_bits;
    for (std::size_t i = 0; i < goals.size(); ++i) {
        goal_bits.push_back(atom_bit(goals[i]));
        pending.push_back(i);
    }
    for (const auto& p : profiles_) {
        if (pending.empty()) break;
        if (!std::all_of(hyps.begin(), hyps.end(), [&](std::size_t h) { return bit(p, h); })) continue;
        std::erase_if(pending, [&](std::size_t i) {
            if (bit(p, goal_bits[i])) return false;
            out[i] = verified(decode(p.codes), sigma, goals[i]);
            return true;
        });
    }
    return out;
}

}  // namespace indep
