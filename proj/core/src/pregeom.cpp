#include <charconv>

#include "indep/pregeom.hpp"

namespace indep {

namespace {

std::vector<Vector> join(std::span<const Vector> a, std::span<const Vector> b) {
    std::vector<Vector> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<Vector> join(std::span<const Vector> a, std::span<const Vector> b, std::span<const Vector> c) {
    auto out = join(a, b);
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

std::size_t echelon_rank(std::vector<std::vector<Rational>> m) {
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const Rational f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

ClosureModel ClosureModel::vector_space(std::size_t dim) { return ClosureModel(ModelKind::vector_space, dim); }

ClosureModel ClosureModel::lattice(std::size_t dim) { return ClosureModel(ModelKind::lattice, dim); }

std::string ClosureModel::descriptor() const {
    return (kind_ == ModelKind::vector_space ? "vspace:Q:" : "lattice:Z:") + std::to_string(dim_);
}

void ClosureModel::check(const Vector& v) const {
    if (v.dim() != dim_)
        throw DimensionError("element " + format_vector(v) + " has dimension " + std::to_string(v.dim()) +
                             ", model " + descriptor() + " expects " + std::to_string(dim_));
    if (kind_ == ModelKind::lattice && !v.is_integral())
        throw std::invalid_argument("element " + format_vector(v) + " is not in the lattice " + descriptor());
}

void ClosureModel::check(std::span<const Vector> s) const {
    for (const auto& v : s) check(v);
}

std::size_t ClosureModel::rank(std::span<const Vector> s) const {
    check(s);
    std::vector<std::vector<Rational>> rows;
    rows.reserve(s.size());
    for (const auto& v : s) rows.push_back(v.coords());
    return echelon_rank(std::move(rows));
}

bool ClosureModel::in_closure(const Vector& v, std::span<const Vector> s) const {
    if (v.dim() != dim_)
        throw DimensionError("element " + format_vector(v) + " has dimension " + std::to_string(v.dim()) +
                             ", model " + descriptor() + " expects " + std::to_string(dim_));
    if (kind_ == ModelKind::lattice && !v.is_integral()) return false;
    check(s);
    const Vector one[] = {v};
    return rank(join(s, one)) == rank(s);
}

bool ClosureModel::indep(std::span<const Vector> a, std::span<const Vector> b, std::span<const Vector> base) const {
    const auto rb = rank(base);
    const auto rab = rank(join(a, base));
    const auto rbb = rank(join(base, b));
    const auto rall = rank(join(a, base, b));
    return rall - rbb == rab - rb;
}

ClosureModel parse_model(std::string_view text) {
    auto fail = [&] {
        return std::invalid_argument("model must be 'vspace:Q:<dim>' or 'lattice:Z:<dim>', got '" +
                                     std::string(text) + "'");
    };
    ModelKind kind;
    std::string_view rest;
    if (text.starts_with("vspace:Q:")) {
        kind = ModelKind::vector_space;
        rest = text.substr(9);
    } else if (text.starts_with("lattice:Z:")) {
        kind = ModelKind::lattice;
        rest = text.substr(10);
    } else {
        throw fail();
    }
    std::size_t dim = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), dim);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) throw fail();
    return kind == ModelKind::vector_space ? ClosureModel::vector_space(dim) : ClosureModel::lattice(dim);
}

bool indep(const ClosureModel& model, const IndependenceQuery& q) { return model.indep(q.a, q.b, q.base); }

Relation rank_relation() {
    return [](const ClosureModel& m, const IndependenceQuery& q) { return m.indep(q.a, q.b, q.base); };
}

Relation per_element_relation() {
    return [](const ClosureModel& m, const IndependenceQuery& q) {
        for (const auto& a : q.a) {
            const Vector one[] = {a};
            if (!m.indep(one, q.b, q.base)) return false;
        }
        return true;
    };
}

}  // namespace indep
