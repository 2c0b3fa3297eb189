#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "indep/calculus.hpp"
#include "indep/teams.hpp"

using namespace indep;
namespace gen = indep::testing;

namespace {

Atom A(const char* text) { return parse_atom(text); }

Team xyz(std::vector<Team::Row> rows) { return Team(make_varset({"x", "y", "z"}), std::move(rows)); }

}  // namespace

TEST(Team, CanonicalRowsAndColumns) {
    const Team t(std::vector<Variable>{Variable("y"), Variable("x")}, {{1, 0}, {0, 2}, {1, 0}});
    EXPECT_EQ(t.dom(), make_varset({"x", "y"}));
    EXPECT_EQ(t.size(), 2U);
    EXPECT_EQ(t.rows()[0], (Team::Row{0, 1}));
    EXPECT_EQ(t.value(1, Variable("y")), 0);
    EXPECT_THROW((void)t.column(Variable("q")), std::out_of_range);
}

TEST(Team, RejectsMalformed) {
    EXPECT_THROW(Team(std::vector<Variable>{Variable("x"), Variable("x")}, {}), std::invalid_argument);
    EXPECT_THROW(Team(make_varset({"x", "y"}), {{0}}), std::invalid_argument);
}

TEST(SatisfiesMarginal, ConstantLeftSide) {
    const Team t(make_varset({"x", "y"}), {{0, 0}, {0, 1}});
    EXPECT_TRUE(satisfies_marginal(t, A("x _|_ y")));
}

TEST(SatisfiesMarginal, SingletonSatisfiesEverything) {
    const Team t = xyz({{3, 1, 4}});
    for (const auto& a : gen::all_marginal_atoms(t.dom())) EXPECT_TRUE(satisfies_marginal(t, a));
}

TEST(SatisfiesMarginal, CorrelatedColumns) {
    EXPECT_FALSE(satisfies_marginal(xyz({{0, 0, 0}, {1, 0, 1}}), A("x _|_ z")));
}

TEST(SatisfiesMarginal, Errors) {
    const Team t = xyz({{0, 0, 0}});
    EXPECT_THROW((void)satisfies_marginal(t, A("x _|_ q")), std::invalid_argument);
    EXPECT_THROW((void)satisfies_marginal(t, A("x _|_{z} y")), std::invalid_argument);
}

TEST(SatisfiesConditional, Examples) {
    EXPECT_TRUE(satisfies_conditional(xyz({{0, 0, 0}, {1, 1, 1}}), A("x _|_{z} y")));
    EXPECT_FALSE(satisfies_conditional(xyz({{0, 0, 0}, {1, 1, 0}}), A("x _|_{z} y")));
}

TEST(SatisfiesConditional, ReflexiveConditionAlwaysHolds) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t) {
        const Team team = gen::random_team(make_varset({"x", "y", "z"}), rng, 3, 8);
        ASSERT_TRUE(satisfies_conditional(team, A("x _|_{x} y")));
        ASSERT_TRUE(satisfies(team, A("x,z _|_{x,z} y")));
    }
}

TEST(SatisfiesSet, Examples) {
    const Team t = xyz({{0, 0, 0}, {1, 0, 1}});
    EXPECT_TRUE(satisfies_set(t, AtomSet()));
    EXPECT_TRUE(satisfies_set(xyz({{0, 1, 0}}), AtomSet({A("x _|_ y"), A("x _|_{z} y")})));
    EXPECT_FALSE(satisfies_set(t, AtomSet({A("x _|_ z")})));
}

TEST(CounterexampleTeam, FirstCanonicalTeam) {
    const auto t = find_counterexample_team(AtomSet({A("x _|_ y")}), A("x _|_ z"), TeamBounds{2, 4});
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(*t, xyz({{0, 0, 0}, {1, 0, 1}}));
}

TEST(CounterexampleTeam, ValidGoals) {
    EXPECT_FALSE(find_counterexample_team(AtomSet(), A("x _|_ ()")).has_value());
    EXPECT_FALSE(find_counterexample_team(AtomSet({A("x _|_ x")}), A("x _|_ y"), TeamBounds{3, 6}).has_value());
}

TEST(CounterexampleTeam, ConditionalGoal) {
    const AtomSet sigma({A("x _|_{z} y")});
    const auto t = find_counterexample_team(sigma, A("x _|_{w} y"), TeamBounds{2, 4});
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(satisfies_set(*t, sigma));
    EXPECT_FALSE(satisfies(*t, A("x _|_{w} y")));
}

TEST(TeamSearch, BatchAgreesWithSingleQueries) {
    const VarSet dom = make_varset({"x", "y", "z"});
    const auto goals = gen::all_marginal_atoms(dom);
    const AtomSet sigma({A("x _|_ y"), A("y _|_ z")});
    TeamSearch batch(dom, TeamBounds{2, 8});
    const auto many = batch.find_each(sigma, goals);
    EXPECT_TRUE(batch.exhaustive());
    EXPECT_GT(batch.profile_count(), 0U);
    for (std::size_t i = 0; i < goals.size(); ++i) {
        TeamSearch single(dom, TeamBounds{2, 8});
        const AtomSet conditional_sigma({A("x _|_{()} y"), A("y _|_{()} z")});
        const auto scanned = single.find(conditional_sigma, goals[i]);
        ASSERT_EQ(many[i].has_value(), scanned.has_value()) << format_atom(goals[i]);
        if (many[i]) ASSERT_EQ(*many[i], *scanned) << format_atom(goals[i]);
    }
}

TEST(TeamSearch, BudgetLimitsEnumeration) {
    TeamSearch search(make_varset({"x", "y"}), TeamBounds{4, 16, 50});
    EXPECT_FALSE(search.find(AtomSet({A("x _|_ x")}), A("x _|_ y")).has_value());
    EXPECT_LE(search.candidates(), 50U);
    EXPECT_FALSE(search.exhaustive());
}

TEST(TeamSearch, Errors) {
    EXPECT_THROW(TeamSearch(make_varset({"x"}), TeamBounds{0, 4}), std::invalid_argument);
    TeamSearch search(make_varset({"x", "y"}), TeamBounds{2, 4});
    EXPECT_THROW((void)search.find(AtomSet(), A("x _|_ q")), std::invalid_argument);
}

TEST(TeamCsv, RoundTrip) {
    const Team t = xyz({{0, 0, 0}, {1, 0, 1}, {-2, 7, 3}});
    EXPECT_EQ(format_team_csv(xyz({{0, 0, 0}, {1, 0, 1}})), "x,y,z\n0,0,0\n1,0,1\n");
    EXPECT_EQ(parse_team_csv(format_team_csv(t)), t);
    std::istringstream in("# team\nz, x\n1, 2\n\n");
    EXPECT_EQ(read_team_csv(in), Team(make_varset({"x", "z"}), {{2, 1}}));
}

TEST(TeamCsv, ErrorsNameTheLine) {
    auto line_of = [](const char* text) -> std::size_t {
        try {
            (void)parse_team_csv(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("x,y\n0,0\n1\n"), 3U);
    EXPECT_EQ(line_of("x,y\n0,a\n"), 2U);
    EXPECT_EQ(line_of("x,9y\n"), 1U);
    EXPECT_THROW((void)parse_team_csv("# nothing\n"), ParseError);
}

TEST(TeamProperties, ProductCharacterization) {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 500; ++t) {
        const VarSet dom = gen::numbered_vars(1 + t % 5);
        const Team team = gen::random_team(dom, rng, 3, 12);
        for (int k = 0; k < 6; ++k) {
            const VarSet left = gen::random_subset(dom, rng);
            const Atom a = Atom::marginal(left, gen::random_subset(set_difference(dom, left), rng, 0.5));
            ASSERT_EQ(satisfies_forall_exists(team, a), satisfies_product(team, a))
                << format_atom(a) << "\n" << format_team_csv(team);
        }
    }
}

TEST(TeamProperties, EmptyAndSingletonTeamsSatisfyEverything) {
    std::mt19937_64 rng(43);
    const VarSet dom = gen::numbered_vars(4);
    const Team empty(dom, {});
    for (int t = 0; t < 300; ++t) {
        const Atom m = gen::random_marginal(dom, rng), c = gen::random_conditional(dom, rng);
        const Team single = gen::random_team(dom, rng, 3, 1);
        ASSERT_TRUE(satisfies(empty, m) && satisfies(empty, c));
        ASSERT_TRUE(satisfies(single, m) && satisfies(single, c));
    }
}

TEST(TeamProperties, SelfIndependenceMeansConstant) {
    std::mt19937_64 rng(44);
    const VarSet dom = gen::numbered_vars(3);
    for (int t = 0; t < 500; ++t) {
        const Team team = gen::random_team(dom, rng, 3, 4);
        for (const auto& v : dom) {
            bool constant = true;
            for (std::size_t r = 0; r < team.size(); ++r) constant = constant && team.value(r, v) == team.value(0, v);
            ASSERT_EQ(satisfies(team, Atom::marginal({v}, {v})), constant);
        }
    }
}

TEST(TeamProperties, RuleSoundness) {
    for (auto family : {RuleFamily::marginal, RuleFamily::conditional}) {
        const auto report = team_soundness_fuzz(family, 2000, 45);
        for (const auto& r : report.rules) {
            EXPECT_EQ(r.violations, 0U) << rule_name(r.rule) << ": " << r.witness.value_or("");
            EXPECT_GT(r.premises_held, 0U) << rule_name(r.rule);
        }
    }
}

TEST(TeamProperties, FoundTeamsAreCountermodels) {
    std::mt19937_64 rng(46);
    const VarSet dom = gen::numbered_vars(3);
    int found = 0;
    for (int t = 0; t < 60; ++t) {
        AtomSet sigma({}, dom);
        sigma.add(gen::random_conditional(dom, rng));
        const Atom goal = gen::random_conditional(dom, rng);
        const auto team = find_counterexample_team(sigma, goal, TeamBounds{2, 6});
        if (!team) continue;
        ++found;
        ASSERT_TRUE(satisfies_set(*team, sigma));
        ASSERT_FALSE(satisfies(*team, goal));
    }
    EXPECT_GT(found, 10);
}

TEST(TeamProperties, MarginalSearchMatchesDerivability) {
    std::mt19937_64 rng(47);
    const VarSet dom = gen::numbered_vars(3);
    TeamSearch search(dom, TeamBounds{4, 16});
    for (int t = 0; t < 200; ++t) {
        AtomSet sigma({}, dom);
        for (int i = 0; i < 2; ++i) sigma.add(gen::random_marginal(dom, rng));
        const Atom goal = gen::random_marginal(dom, rng);
        ASSERT_EQ(derives_marginal(sigma, goal).derived(), !search.find(sigma, goal).has_value())
            << format_atom_file(sigma) << format_atom(goal);
    }
}
