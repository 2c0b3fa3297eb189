#include "indep/pregeom.hpp"

namespace indep {

namespace {

std::vector<Vector> with(std::span<const Vector> base, std::initializer_list<Vector> extra) {
    std::vector<Vector> out(base.begin(), base.end());
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

}  // namespace

bool is_independent_sequence(const ClosureModel& model, std::span<const Vector> seq, std::span<const Vector> base) {
    model.check(seq);
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] == seq[j])
                throw std::invalid_argument("sequence repeats element " + format_vector(seq[i]) + " at positions " +
                                            std::to_string(i) + " and " + std::to_string(j));
    for (std::size_t j = 0; j < seq.size(); ++j)
        if (!model.indep(seq.subspan(0, j), seq.subspan(j, 1), base)) return false;
    return true;
}

bool is_algebraic(const ClosureModel& model, std::span<const Vector> tuple, std::span<const Vector> base) {
    return model.indep(tuple, tuple, base);
}

bool check_federation_witness(const ClosureModel& model, std::span<const Vector> seq, const Vector& d,
                              std::span<const Vector> base) {
    if (!is_independent_sequence(model, seq, base))
        throw std::invalid_argument("sequence " + format_elements(seq) + " is not independent over " +
                                    format_elements(base));
    const Vector dd[] = {d};
    if (model.indep(dd, seq, base)) return false;
    for (std::size_t j = 0; j < seq.size(); ++j) {
        std::vector<Vector> rest(seq.begin(), seq.end());
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
        if (!model.indep(dd, rest, base)) return false;
    }
    return true;
}

FederationBound federation_index_lower_bound(const ClosureModel& model, std::size_t n) {
    if (n == 0) throw std::invalid_argument("federation length must be positive");
    if (n > model.dim())
        throw DimensionError("federation length " + std::to_string(n) + " exceeds dimension of " + model.descriptor());
    FederationBound out;
    for (std::size_t i = 0; i < n; ++i) out.sequence.push_back(Vector::unit(model.dim(), i));
    Vector d = Vector::zero(model.dim());
    for (std::size_t m = 1; m <= n; ++m) {
        d = d + out.sequence[m - 1];
        if (!check_federation_witness(model, std::span(out.sequence).first(m), d, {}))
            throw std::logic_error("basis sum failed to federate prefix of length " + std::to_string(m));
        out.witnesses.push_back(d);
    }
    return out;
}

Combiner sum_combiner() {
    return [](const Vector& u, const Vector& v) { return u + v; };
}

bool ChainReport::ok() const noexcept {
    if (!federated) return false;
    for (const auto& c : checks)
        if (!c.holds) return false;
    return true;
}

ChainReport hyttinen_chain(const ClosureModel& model, std::span<const Vector> d, std::span<const Vector> base,
                           const Combiner& combiner) {
    if (d.empty()) throw std::invalid_argument("chain needs a nonempty sequence");
    if (!is_independent_sequence(model, d, base))
        throw std::invalid_argument("sequence " + format_elements(d) + " is not independent over " +
                                    format_elements(base));
    auto in_cl = [&](const Vector& v, std::initializer_list<Vector> s) { return model.in_closure(v, with(base, s)); };

    ChainReport report;
    report.chain.push_back(d[0]);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        const Vector& u = report.chain.back();
        const Vector& v = d[i + 1];
        Vector w = combiner(u, v);
        model.check(w);
        const auto step = i + 1;
        const auto name = "step " + std::to_string(step) + ": combiner output " + format_vector(w);
        if (!in_cl(w, {u, v})) throw ChainStepError(step, "ii", name + " lies outside cl(A0 ∪ {d*_i, d_i+1})");
        if (in_cl(w, {u})) throw ChainStepError(step, "ii", name + " lies in cl(A0 ∪ {d*_i})");
        if (in_cl(w, {v})) throw ChainStepError(step, "ii", name + " lies in cl(A0 ∪ {d_i+1})");
        report.chain.push_back(std::move(w));
    }

    const auto& c = report.chain;
    const std::size_t m = d.size();
    for (std::size_t i = 0; i + 1 < m; ++i)
        report.checks.push_back({i, "i", !in_cl(c[i], {d[i + 1]}) && !in_cl(d[i + 1], {c[i]})});
    for (std::size_t i = 1; i < m; ++i) {
        report.checks.push_back({i, "ii", in_cl(c[i], {c[i - 1], d[i]}) && !in_cl(c[i], {c[i - 1]}) && !in_cl(c[i], {d[i]})});
        report.checks.push_back({i, "iii", in_cl(c[i - 1], {c[i], d[i]}) && !in_cl(c[i - 1], {c[i]}) && !in_cl(c[i - 1], {d[i]})});
        report.checks.push_back({i, "iv", in_cl(d[i], {c[i - 1], c[i]}) && !in_cl(d[i], {c[i - 1]}) && !in_cl(d[i], {c[i]})});
    }

    // Closures of proper subsets are unions over the maximal ones by monotonicity.
    std::vector<Vector> all(base.begin(), base.end());
    all.insert(all.end(), d.begin(), d.end());
    report.federated = model.in_closure(c.back(), all);
    for (std::size_t j = 0; report.federated && j < m; ++j) {
        std::vector<Vector> sub(base.begin(), base.end());
        for (std::size_t k = 0; k < m; ++k)
            if (k != j) sub.push_back(d[k]);
        report.federated = !model.in_closure(c.back(), sub);
    }
    return report;
}

}  // namespace indep
