#include "indep/teams.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace indep {

namespace {

using Row = Team::Row;

std::vector<std::size_t> columns_of(const Team& team, const VarSet& vs) {
    std::vector<std::size_t> cols;
    cols.reserve(vs.size());
    for (const auto& v : vs) cols.push_back(team.column(v));
    return cols;
}

Row project(const Row& row, const std::vector<std::size_t>& cols) {
    Row out;
    out.reserve(cols.size());
    for (auto c : cols) out.push_back(row[c]);
    return out;
}

void require_domain(const Team& team, const Atom& a) {
    for (const auto& v : a.vars())
        if (!contains(team.dom(), v))
            throw std::invalid_argument("variable '" + v.name() + "' of atom '" + format_atom(a) +
                                        "' is outside the team domain");
}

// ∀∃ check restricted to the given rows.
bool forall_exists(const std::vector<const Row*>& rows, const std::vector<std::size_t>& lc,
                   const std::vector<std::size_t>& rc) {
    for (const Row* s : rows) {
        for (const Row* t : rows) {
            const bool found = std::any_of(rows.begin(), rows.end(), [&](const Row* u) {
                for (auto c : lc)
                    if ((*u)[c] != (*s)[c]) return false;
                for (auto c : rc)
                    if ((*u)[c] != (*t)[c]) return false;
                return true;
            });
            if (!found) return false;
        }
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

}  // namespace

Team::Team(VarSet dom, std::vector<Row> rows) {
    // Accept any column order and permute into canonical variable order.
    std::vector<std::size_t> order(dom.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dom[a] < dom[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (dom[order[i]] == dom[order[i - 1]])
            throw std::invalid_argument("duplicate variable '" + dom[order[i]].name() + "' in team domain");
    for (std::size_t i = 0; i < order.size(); ++i) dom_.push_back(dom[order[i]]);
    rows_.reserve(rows.size());
    for (auto& r : rows) {
        if (r.size() != dom.size())
            throw std::invalid_argument("team row has " + std::to_string(r.size()) + " values, expected " +
                                        std::to_string(dom.size()));
        Row permuted(r.size());
        for (std::size_t i = 0; i < order.size(); ++i) permuted[i] = r[order[i]];
        rows_.push_back(std::move(permuted));
    }
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

std::size_t Team::column(const Variable& v) const {
    auto it = std::lower_bound(dom_.begin(), dom_.end(), v);
    if (it == dom_.end() || *it != v) throw std::out_of_range("variable '" + v.name() + "' not in team domain");
    return static_cast<std::size_t>(it - dom_.begin());
}

bool satisfies_forall_exists(const Team& team, const Atom& a) {
    require_domain(team, a);
    std::vector<const Row*> rows;
    for (const auto& r : team.rows()) rows.push_back(&r);
    return forall_exists(rows, columns_of(team, a.left()), columns_of(team, a.right()));
}

bool satisfies_product(const Team& team, const Atom& a) {
    require_domain(team, a);
    const auto lc = columns_of(team, a.left());
    const auto rc = columns_of(team, a.right());
    std::set<Row> lefts, rights;
    std::set<std::pair<Row, Row>> joint;
    for (const auto& r : team.rows()) {
        auto l = project(r, lc);
        auto rr = project(r, rc);
        lefts.insert(l);
        rights.insert(rr);
        joint.emplace(std::move(l), std::move(rr));
    }
    return joint.size() == lefts.size() * rights.size();
}

bool satisfies_marginal(const Team& team, const Atom& a) {
    if (!a.is_marginal()) throw std::invalid_argument("satisfies_marginal given a conditional atom");
    if (set_intersection(a.left(), a.right()).empty()) return satisfies_product(team, a);
    return satisfies_forall_exists(team, a);
}

bool satisfies_conditional(const Team& team, const Atom& a) {
    require_domain(team, a);
    const auto lc = columns_of(team, a.left());
    const auto rc = columns_of(team, a.right());
    const auto zc = columns_of(team, a.condition());
    std::map<Row, std::vector<const Row*>> groups;
    for (const auto& r : team.rows()) groups[project(r, zc)].push_back(&r);
    return std::all_of(groups.begin(), groups.end(),
                       [&](const auto& g) { return forall_exists(g.second, lc, rc); });
}

bool satisfies(const Team& team, const Atom& a) {
    return a.is_marginal() ? satisfies_marginal(team, a) : satisfies_conditional(team, a);
}

bool satisfies_set(const Team& team, const AtomSet& sigma) {
    return std::all_of(sigma.begin(), sigma.end(), [&](const Atom& a) { return satisfies(team, a); });
}

std::optional<Team> find_counterexample_team(const AtomSet& sigma, const Atom& goal, TeamBounds bounds) {
    TeamSearch search(set_union(sigma.universe(), goal.vars()), bounds);
    return search.find(sigma, goal);
}

SoundnessReport team_soundness_fuzz(RuleFamily family, std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const VarSet universe = make_varset({"u", "v", "w", "x", "y"});
    SoundnessReport report;
    for (Rule rule : rules_of(family)) {
        RuleTally tally{rule, 0, 0, 0, std::nullopt};
        for (std::size_t t = 0; t < trials; ++t) {
            // Small teams over few values keep premises true often enough to matter.
            std::uniform_int_distribution<int> nrows(1, 6), nvals(1, 3);
            const int values = nvals(rng);
            std::uniform_int_distribution<int> val(0, values - 1);
            std::vector<Row> rows(static_cast<std::size_t>(nrows(rng)), Row(universe.size()));
            for (auto& r : rows)
                for (auto& x : r) x = val(rng);
            const Team team(universe, std::move(rows));

            const auto inst = sample_rule_instance(rule, universe, rng);
            ++tally.instances;
            const bool premises = std::all_of(inst.premises.begin(), inst.premises.end(),
                                              [&](const Atom& p) { return satisfies(team, p); });
            if (!premises) continue;
            ++tally.premises_held;
            if (!satisfies(team, inst.conclusion)) {
                ++tally.violations;
                if (!tally.witness) tally.witness = format_instance(inst) + " on team\n" + format_team_csv(team);
            }
        }
        report.rules.push_back(std::move(tally));
    }
    return report;
}

Team read_team_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<Variable> columns;
    bool have_header = false;
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto fields = split_csv(text);
        if (!have_header) {
            for (auto f : fields) {
                if (!Variable::is_valid_name(f))
                    throw ParseError("line " + std::to_string(line_no) + ": invalid variable name '" +
                                         std::string(f) + "'",
                                     0, line_no);
                columns.emplace_back(std::string(f));
            }
            have_header = true;
            continue;
        }
        if (fields.size() != columns.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns.size()) +
                                 " values, got " + std::to_string(fields.size()),
                             0, line_no);
        Row row;
        for (auto f : fields) {
            try {
                std::size_t used = 0;
                const std::string s(f);
                int v = std::stoi(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": invalid integer '" + std::string(f) + "'",
                                 0, line_no);
            }
        }
        rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("team CSV has no header row", 0, line_no);
    return Team(std::move(columns), std::move(rows));
}

Team parse_team_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_team_csv(in);
}

void write_team_csv(std::ostream& out, const Team& team) {
    for (std::size_t i = 0; i < team.dom().size(); ++i) out << (i ? "," : "") << team.dom()[i].name();
    out << '\n';
    for (const auto& r : team.rows()) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
}

std::string format_team_csv(const Team& team) {
    std::ostringstream out;
    write_team_csv(out, team);
    return out.str();
}

}  // namespace indep
