#include <random>
#include <sstream>

#include "indep/pregeom.hpp"
#include "sampling.hpp"

namespace indep {

namespace {

using detail::random_subset_of;
using detail::sample_pool;
using detail::sample_subset;
using detail::uniform;
using Set = std::vector<Vector>;

struct Outcome {
    bool premise = true;
    bool holds = true;
    std::string witness;
};

Set join(const Set& a, const Set& b) {
    Set out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::string sets(std::initializer_list<std::pair<const char*, const Set*>> named) {
    std::string out;
    for (const auto& [name, s] : named) {
        if (!out.empty()) out += ", ";
        out += std::string(name) + "=" + format_elements(*s);
    }
    return out;
}

// Combination of elements of `s` with small coefficients; lands in cl(s).
Vector combination(const ClosureModel& model, const Set& s, std::mt19937_64& rng) {
    Vector v = Vector::zero(model.dim());
    for (const auto& x : s) v = v + Rational(uniform(rng, -2, 2)) * x;
    return v;
}

template <class Trial>
AxiomResult run_axiom(std::string name, std::size_t trials, std::mt19937_64& rng, const ClosureModel& model,
                      Trial&& trial) {
    AxiomResult r{std::move(name), 0, 0, 0, std::nullopt};
    for (std::size_t t = 0; t < trials; ++t) {
        const Set pool = sample_pool(model, rng);
        const Outcome o = trial(pool);
        ++r.trials;
        if (!o.premise) continue;
        ++r.premises_held;
        if (!o.holds) {
            ++r.failures;
            if (!r.witness) r.witness = o.witness;
        }
    }
    return r;
}

}  // namespace

bool AxiomReport::ok() const noexcept {
    for (const auto& r : results)
        if (!r.ok()) return false;
    return true;
}

const AxiomResult* AxiomReport::find(std::string_view name) const noexcept {
    for (const auto& r : results)
        if (r.name == name) return &r;
    return nullptr;
}

std::string format_report(const AxiomReport& report) {
    std::ostringstream out;
    out << "model " << report.model << '\n';
    for (const auto& r : report.results) {
        out << (r.ok() ? "PASS " : "FAIL ") << r.name << "  trials=" << r.trials
            << " premises=" << r.premises_held << " failures=" << r.failures << '\n';
        if (r.witness) out << "  witness: " << *r.witness << '\n';
    }
    return out.str();
}

AxiomReport axiom_suite(const ClosureModel& model, std::uint64_t seed, std::size_t trials, const Relation& relation) {
    std::mt19937_64 rng(seed);
    auto R = [&](const Set& a, const Set& b, const Set& base) { return relation(model, {a, b, base}); };
    auto pick = [&](const Set& pool, int max = 3) { return sample_subset(pool, rng, max); };
    AxiomReport report{model.descriptor(), {}};
    auto add = [&](std::string name, auto&& trial) {
        report.results.push_back(run_axiom(std::move(name), trials, rng, model, trial));
    };

    add("Invariance", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool);
        const auto m = detail::random_automorphism(model, rng);
        const Set fa = detail::apply(m, a), fb = detail::apply(m, b), fc = detail::apply(m, c);
        return Outcome{true, R(a, b, c) == R(fa, fb, fc),
                       sets({{"A", &a}, {"B", &b}, {"C", &c}, {"fA", &fa}, {"fB", &fb}, {"fC", &fc}})};
    });
    add("Existence", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool);
        return Outcome{true, R(a, b, a), sets({{"A", &a}, {"B", &b}})};
    });
    add("Monotonicity", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool), d = random_subset_of(a, rng);
        return Outcome{R(a, b, c), R(d, b, c), sets({{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}})};
    });
    add("Base Monotonicity", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool, 4), c = random_subset_of(b, rng), d = random_subset_of(c, rng);
        return Outcome{R(a, b, d), R(a, b, c), sets({{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}})};
    });
    add("Symmetry", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool);
        return Outcome{R(a, b, c), R(b, a, c), sets({{"A", &a}, {"B", &b}, {"C", &c}})};
    });
    add("Transitivity", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool, 4), c = random_subset_of(b, rng), d = random_subset_of(c, rng);
        return Outcome{R(b, a, c) && R(c, a, d), R(b, a, d), sets({{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}})};
    });
    add("Transitivity (iff form)", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool), d = pick(pool);
        const bool lhs = R(a, b, c) && R(a, d, join(c, b));
        return Outcome{true, lhs == R(a, join(b, d), c), sets({{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}})};
    });
    add("Normality", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool);
        return Outcome{R(a, b, c), R(join(a, c), b, c), sets({{"A", &a}, {"B", &b}, {"C", &c}})};
    });
    add("Finite Character", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool);
        bool all = true;
        for (std::size_t mask = 0; all && mask < (std::size_t{1} << a.size()); ++mask) {
            Set sub;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (mask & (std::size_t{1} << i)) sub.push_back(a[i]);
            all = R(sub, b, c);
        }
        return Outcome{all, R(a, b, c), sets({{"A", &a}, {"B", &b}, {"C", &c}})};
    });
    add("Anti-Reflexivity", [&](const Set& pool) {
        const Set b = pick(pool), c = pick(pool);
        Set a = pick(pool);
        if (uniform(rng, 0, 1)) {
            a.clear();
            for (int i = uniform(rng, 0, 2); i > 0; --i) a.push_back(combination(model, b, rng));
        }
        return Outcome{R(a, a, b), R(a, c, b), sets({{"A", &a}, {"B", &b}, {"C", &c}})};
    });
    add("Exchange", [&](const Set& pool) {
        const Set a = pick(pool), b = pick(pool), c = pick(pool), d = pick(pool);
        return Outcome{R(a, b, d) && R(join(a, b), c, d), R(a, join(b, c), d),
                       sets({{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}})};
    });
    return report;
}

AxiomReport pregeometry_laws(const ClosureModel& model, std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(seed);
    auto pick = [&](const Set& pool, int max = 3) { return sample_subset(pool, rng, max); };
    auto element = [&](const Set& pool) { return pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))]; };
    AxiomReport report{model.descriptor(), {}};
    auto add = [&](std::string name, auto&& trial) {
        report.results.push_back(run_axiom(std::move(name), trials, rng, model, trial));
    };

    add("Extensivity", [&](const Set& pool) {
        const Set s = pick(pool);
        bool ok = true;
        for (const auto& v : s) ok = ok && model.in_closure(v, s);
        return Outcome{true, ok, sets({{"S", &s}})};
    });
    add("Closure Monotonicity", [&](const Set& pool) {
        const Set s = pick(pool), t = join(s, pick(pool));
        const Vector v = element(pool);
        const Set vs{v};
        return Outcome{model.in_closure(v, s), model.in_closure(v, t), sets({{"S", &s}, {"T", &t}, {"v", &vs}})};
    });
    add("Idempotence", [&](const Set& pool) {
        const Set s = pick(pool);
        Set closed = s;
        for (const auto& p : pool)
            if (model.in_closure(p, s)) closed.push_back(p);
        const Vector v = element(pool);
        const Set vs{v};
        return Outcome{model.in_closure(v, closed), model.in_closure(v, s), sets({{"S", &s}, {"v", &vs}})};
    });
    add("Closure Exchange", [&](const Set& pool) {
        const Set s = pick(pool);
        const Vector v = element(pool), w = element(pool);
        const Set sw = join(s, {w}), sv = join(s, {v}), pair{v, w};
        return Outcome{model.in_closure(v, sw) && !model.in_closure(v, s), model.in_closure(w, sv),
                       sets({{"S", &s}, {"v,w", &pair}})};
    });
    add("Submodularity", [&](const Set& pool) {
        Set s, t, both, either;
        for (const auto& p : pool) {
            const bool in_s = uniform(rng, 0, 1), in_t = uniform(rng, 0, 1);
            if (in_s) s.push_back(p);
            if (in_t) t.push_back(p);
            if (in_s && in_t) both.push_back(p);
            if (in_s || in_t) either.push_back(p);
        }
        return Outcome{true, model.rank(either) + model.rank(both) <= model.rank(s) + model.rank(t),
                       sets({{"S", &s}, {"T", &t}})};
    });
    return report;
}

}  // namespace indep
