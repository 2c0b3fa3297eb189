#include <random>

#include <gtest/gtest.h>

#include "indep/pregeom.hpp"

using namespace indep;

namespace {

using Set = std::vector<Vector>;

Vector e(std::size_t dim, std::size_t i) { return Vector::unit(dim, i); }

Vector random_vector(std::size_t dim, std::mt19937_64& rng, long lo = -2, long hi = 2) {
    std::uniform_int_distribution<long> coef(lo, hi);
    std::vector<Rational> c(dim);
    for (auto& x : c) x = coef(rng);
    return Vector(std::move(c));
}

Set random_set(std::size_t dim, std::mt19937_64& rng, std::size_t max_size) {
    Set out(std::uniform_int_distribution<std::size_t>(0, max_size)(rng));
    for (auto& v : out) v = random_vector(dim, rng);
    return out;
}

Set join(Set a, const Set& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST(Rational, ParseAndFormat) {
    EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(parse_rational("+1/2"), Rational(1, 2));
    EXPECT_EQ(format_rational(parse_rational("-6/4")), "-3/2");
    EXPECT_EQ(format_rational(Rational(1, 3) + Rational(1, 6)), "1/2");
    EXPECT_EQ(format_rational(Rational(5)), "5");
    EXPECT_THROW((void)parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW((void)parse_rational("x"), std::invalid_argument);
    EXPECT_THROW((void)parse_rational("1/"), std::invalid_argument);
}

TEST(Rational, AlwaysReduced) {
    const Rational q = parse_rational("10/-4");
    EXPECT_EQ(q.get_num(), -5);
    EXPECT_EQ(q.get_den(), 2);
}

TEST(VectorLiteral, ParseAndFormat) {
    const Vector v = parse_vector("[1/2, -3, 0]");
    EXPECT_EQ(v.dim(), 3U);
    EXPECT_EQ(v[0], Rational(1, 2));
    EXPECT_EQ(format_vector(v), "[1/2, -3, 0]");
    EXPECT_EQ(parse_vector(" [ ] ").dim(), 0U);
    EXPECT_THROW((void)parse_vector("1, 2"), std::invalid_argument);
    EXPECT_THROW((void)parse_vector("[1, a]"), std::invalid_argument);
}

TEST(VectorOps, Arithmetic) {
    EXPECT_EQ(e(2, 0) + e(2, 1), Vector::ones(2));
    EXPECT_EQ(Vector::ones(2) - e(2, 1), e(2, 0));
    EXPECT_EQ((Rational(1, 2) * Vector{2, 4}), (Vector{1, 2}));
    EXPECT_TRUE(Vector::zero(3).is_zero());
    EXPECT_FALSE(parse_vector("[1/2]").is_integral());
    EXPECT_THROW((void)(e(2, 0) + e(3, 0)), DimensionError);
    EXPECT_THROW((void)Vector::unit(2, 2), DimensionError);
}

TEST(Model, Descriptors) {
    EXPECT_EQ(parse_model("vspace:Q:4"), ClosureModel::vector_space(4));
    EXPECT_EQ(parse_model("lattice:Z:2"), ClosureModel::lattice(2));
    EXPECT_EQ(ClosureModel::lattice(3).descriptor(), "lattice:Z:3");
    EXPECT_THROW((void)parse_model("vspace:R:2"), std::invalid_argument);
    EXPECT_THROW((void)parse_model("vspace:Q:x"), std::invalid_argument);
}

TEST(Model, ElementChecks) {
    EXPECT_THROW(ClosureModel::vector_space(2).check(e(3, 0)), DimensionError);
    EXPECT_THROW(ClosureModel::lattice(1).check(parse_vector("[1/2]")), std::invalid_argument);
    EXPECT_NO_THROW(ClosureModel::vector_space(1).check(parse_vector("[1/2]")));
}

TEST(Rank, Examples) {
    const auto q3 = ClosureModel::vector_space(3), q2 = ClosureModel::vector_space(2);
    EXPECT_EQ(q3.rank(Set{e(3, 0), e(3, 1)}), 2U);
    EXPECT_EQ(q2.rank(Set{e(2, 0), e(2, 0) + e(2, 1), e(2, 1)}), 2U);
    EXPECT_EQ(q2.rank(Set{}), 0U);
    EXPECT_THROW((void)q2.rank(Set{e(3, 0)}), DimensionError);
}

TEST(InClosure, Examples) {
    EXPECT_TRUE(ClosureModel::lattice(1).in_closure(Vector{1}, Set{Vector{2}}));
    EXPECT_FALSE(ClosureModel::vector_space(2).in_closure(Vector{1, 1}, Set{Vector{1, 0}}));
    for (const auto& m : {ClosureModel::vector_space(2), ClosureModel::lattice(2)})
        EXPECT_TRUE(m.in_closure(Vector::zero(2), Set{}));
    EXPECT_FALSE(ClosureModel::lattice(1).in_closure(parse_vector("[1/2]"), Set{Vector{1}}));
}

TEST(Indep, Examples) {
    const auto q2 = ClosureModel::vector_space(2);
    EXPECT_TRUE(q2.indep(Set{e(2, 0)}, Set{e(2, 1)}, Set{}));
    EXPECT_FALSE(indep::indep(q2, IndependenceQuery{{e(2, 0) + e(2, 1)}, {e(2, 0), e(2, 1)}, {}}));
    EXPECT_TRUE(q2.indep(Set{}, Set{e(2, 0), Vector{3, 1}}, Set{e(2, 1)}));
}

TEST(Indep, WholeTupleMatchesSubtuples) {
    std::mt19937_64 rng(51);
    const auto q3 = ClosureModel::vector_space(3);
    for (int t = 0; t < 500; ++t) {
        const Set a = random_set(3, rng, 3), b = random_set(3, rng, 2), c = random_set(3, rng, 1);
        bool all = true;
        for (std::size_t mask = 0; mask < (std::size_t{1} << a.size()); ++mask) {
            Set sub;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (mask & (std::size_t{1} << i)) sub.push_back(a[i]);
            all = all && q3.indep(sub, b, c);
        }
        ASSERT_EQ(q3.indep(a, b, c), all);
    }
}

TEST(AxiomSuite, VectorSpaceAndLatticePass) {
    for (const auto& m : {ClosureModel::vector_space(3), ClosureModel::lattice(2)}) {
        const auto report = axiom_suite(m, 52, 500);
        EXPECT_TRUE(report.ok()) << format_report(report);
        EXPECT_EQ(report.model, m.descriptor());
        EXPECT_NE(report.find("Exchange"), nullptr);
        EXPECT_NE(report.find("Invariance"), nullptr);
        for (const auto& r : report.results) EXPECT_GT(r.premises_held, 0U) << r.name;
    }
}

TEST(AxiomSuite, CorruptedRelationIsCaught) {
    const auto report = axiom_suite(ClosureModel::vector_space(3), 53, 500, per_element_relation());
    EXPECT_FALSE(report.ok());
    const auto* exchange = report.find("Exchange");
    ASSERT_NE(exchange, nullptr);
    EXPECT_FALSE(exchange->ok());
    EXPECT_TRUE(exchange->witness.has_value());
    EXPECT_FALSE(report.find("Symmetry")->ok());
}

TEST(AxiomSuite, Deterministic) {
    const auto m = ClosureModel::lattice(3);
    EXPECT_EQ(format_report(axiom_suite(m, 54, 100)), format_report(axiom_suite(m, 54, 100)));
}

TEST(PregeometryLaws, BothKindsPass) {
    for (const auto& m : {ClosureModel::vector_space(3), ClosureModel::lattice(3)}) {
        const auto report = pregeometry_laws(m, 55, 400);
        EXPECT_TRUE(report.ok()) << format_report(report);
        EXPECT_EQ(report.results.size(), 5U);
    }
}

TEST(IndependentSequence, Examples) {
    const auto q3 = ClosureModel::vector_space(3), q2 = ClosureModel::vector_space(2);
    EXPECT_TRUE(is_independent_sequence(q3, Set{e(3, 0), e(3, 1), e(3, 2)}, Set{}));
    EXPECT_TRUE(is_independent_sequence(q2, Set{e(2, 0), e(2, 0) + e(2, 1)}, Set{}));
    EXPECT_FALSE(is_independent_sequence(q3, Set{e(3, 0), e(3, 1), e(3, 0) + e(3, 1)}, Set{}));
    EXPECT_THROW((void)is_independent_sequence(q2, Set{e(2, 0), e(2, 0)}, Set{}), std::invalid_argument);
}

TEST(Algebraic, Examples) {
    const auto q2 = ClosureModel::vector_space(2);
    EXPECT_TRUE(is_algebraic(q2, Set{Vector::zero(2)}, Set{}));
    EXPECT_FALSE(is_algebraic(q2, Set{e(2, 0)}, Set{}));
    EXPECT_TRUE(is_algebraic(q2, Set{e(2, 0)}, Set{e(2, 0) + e(2, 1), e(2, 1)}));
}

TEST(FederationWitness, Examples) {
    const auto q2 = ClosureModel::vector_space(2);
    const Set seq{e(2, 0), e(2, 1)};
    EXPECT_TRUE(check_federation_witness(q2, seq, e(2, 0) + e(2, 1), Set{}));
    EXPECT_FALSE(check_federation_witness(q2, seq, e(2, 0), Set{}));
    EXPECT_TRUE(check_federation_witness(q2, Set{e(2, 0)}, e(2, 0), Set{}));
    EXPECT_THROW((void)check_federation_witness(q2, Set{e(2, 0), Vector{2, 0}}, e(2, 1), Set{}),
                 std::invalid_argument);
}

TEST(FederationBound, Examples) {
    const auto b = federation_index_lower_bound(ClosureModel::vector_space(4), 3);
    EXPECT_EQ(b.sequence, (Set{e(4, 0), e(4, 1), e(4, 2)}));
    EXPECT_EQ(b.witnesses, (Set{e(4, 0), e(4, 0) + e(4, 1), e(4, 0) + e(4, 1) + e(4, 2)}));

    const auto z = federation_index_lower_bound(ClosureModel::lattice(2), 2);
    EXPECT_EQ(z.sequence, (Set{Vector{1, 0}, Vector{0, 1}}));
    EXPECT_EQ(z.witnesses.back(), (Vector{1, 1}));

    const auto one = federation_index_lower_bound(ClosureModel::vector_space(1), 1);
    EXPECT_EQ(one.witnesses, (Set{Vector{1}}));

    EXPECT_THROW((void)federation_index_lower_bound(ClosureModel::vector_space(2), 3), DimensionError);
}

TEST(Chain, SumCombiner) {
    const auto q2 = ClosureModel::vector_space(2);
    const auto r = hyttinen_chain(q2, Set{e(2, 0), e(2, 1)}, Set{});
    EXPECT_EQ(r.chain, (Set{e(2, 0), e(2, 0) + e(2, 1)}));
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.federated);

    const auto q3 = ClosureModel::vector_space(3);
    const auto r3 = hyttinen_chain(q3, Set{e(3, 0), e(3, 1), e(3, 2)}, Set{});
    EXPECT_EQ(r3.chain.back(), Vector::ones(3));
    EXPECT_TRUE(r3.ok());
    for (const char* p : {"i", "ii", "iii", "iv"})
        EXPECT_TRUE(std::any_of(r3.checks.begin(), r3.checks.end(), [&](const ChainCheck& c) { return c.property == p; }))
            << p;
}

TEST(Chain, ProjectionCombinerFails) {
    const auto q2 = ClosureModel::vector_space(2);
    const Combiner first = [](const Vector& u, const Vector&) { return u; };
    try {
        (void)hyttinen_chain(q2, Set{e(2, 0), e(2, 1)}, Set{}, first);
        FAIL() << "expected ChainStepError";
    } catch (const ChainStepError& err) {
        EXPECT_EQ(err.step(), 1U);
        EXPECT_NE(std::string(err.what()).find("lies in cl(A0 ∪ {d*_i})"), std::string::npos);
    }
}

TEST(Chain, DependentSequenceRejected) {
    EXPECT_THROW((void)hyttinen_chain(ClosureModel::vector_space(2), Set{e(2, 0), Vector{2, 0}}, Set{}),
                 std::invalid_argument);
}

TEST(PregeomProperties, DisjointSubtuplesOfIndependentSequences) {
    std::mt19937_64 rng(56);
    const auto q5 = ClosureModel::vector_space(5);
    int sequences = 0;
    for (int t = 0; t < 200 && sequences < 60; ++t) {
        const Set seq = random_set(5, rng, 4), base = random_set(5, rng, 1);
        bool distinct = true;
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) distinct = distinct && !(seq[i] == seq[j]);
        if (!distinct || !is_independent_sequence(q5, seq, base)) continue;
        ++sequences;
        std::size_t codes = 1;
        for (std::size_t i = 0; i < seq.size(); ++i) codes *= 3;
        for (std::size_t code = 0; code < codes; ++code) {
            Set a, b, rest;
            for (std::size_t i = 0, c = code; i < seq.size(); ++i, c /= 3)
                (c % 3 == 1 ? a : c % 3 == 2 ? b : rest).push_back(seq[i]);
            ASSERT_TRUE(q5.indep(a, b, base));
            ASSERT_TRUE(q5.indep(a, join(b, rest), base));
        }
    }
    EXPECT_GE(sequences, 30);
}

TEST(PregeomProperties, SumWitnessFederatesEveryPrefix) {
    for (std::size_t dim = 1; dim <= 6; ++dim) {
        const auto m = ClosureModel::vector_space(dim);
        const auto b = federation_index_lower_bound(m, dim);
        for (std::size_t n = 1; n <= dim; ++n) {
            const Set prefix(b.sequence.begin(), b.sequence.begin() + static_cast<std::ptrdiff_t>(n));
            ASSERT_TRUE(check_federation_witness(m, prefix, b.witnesses[n - 1], Set{}));
        }
    }
}

TEST(PregeomProperties, ChainsOverRandomBases) {
    std::mt19937_64 rng(57);
    for (std::size_t m = 1; m <= 6; ++m) {
        const auto model = ClosureModel::vector_space(m + 1);
        Set d(m);
        Set base;
        do {
            for (auto& v : d) v = random_vector(m + 1, rng, -3, 3);
            base = {random_vector(m + 1, rng)};
        } while (model.rank(join(d, base)) != m + 1);
        ASSERT_TRUE(is_independent_sequence(model, d, base));
        const auto r = hyttinen_chain(model, d, base);
        EXPECT_TRUE(r.ok()) << "m=" << m;
        EXPECT_EQ(r.chain.size(), m);
    }
}

TEST(PregeomProperties, RankSubmodularAndInvariant) {
    std::mt19937_64 rng(58);
    const auto q3 = ClosureModel::vector_space(3);
    for (int t = 0; t < 300; ++t) {
        const Set a = random_set(3, rng, 3), b = random_set(3, rng, 3);
        Set common;
        for (const auto& x : a)
            if (std::find(b.begin(), b.end(), x) != b.end()) common.push_back(x);
        ASSERT_LE(q3.rank(join(a, b)) + q3.rank(common), q3.rank(a) + q3.rank(b));

        std::vector<Vector> rows;
        do {
            rows = {random_vector(3, rng), random_vector(3, rng), random_vector(3, rng)};
        } while (q3.rank(rows) != 3);
        auto apply = [&](const Set& s) {
            Set out;
            for (const auto& v : s) {
                std::vector<Rational> c(3);
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 3; ++j) c[i] += rows[i][j] * v[j];
                out.emplace_back(std::move(c));
            }
            return out;
        };
        ASSERT_EQ(q3.rank(apply(a)), q3.rank(a));
        const Set c = random_set(3, rng, 1);
        ASSERT_EQ(q3.indep(apply(a), apply(b), apply(c)), q3.indep(a, b, c));
    }
}
