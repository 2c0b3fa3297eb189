#pragma once

#include <random>
#include <vector>

#include "indep/pregeom.hpp"

namespace indep::detail {

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// A small element pool living in a random subspace of rank 1..dim, so that
/// sampled sets are dependent often enough to exercise premises.
inline std::vector<Vector> sample_pool(const ClosureModel& model, std::mt19937_64& rng, std::size_t size = 8) {
    const std::size_t dim = model.dim();
    std::vector<Vector> pool{Vector::zero(dim)};
    if (dim == 0) return pool;
    const auto r = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(dim)));
    std::vector<Vector> gens;
    for (std::size_t g = 0; g < r; ++g) {
        std::vector<Rational> c(dim);
        for (auto& x : c) x = uniform(rng, -2, 2);
        gens.emplace_back(std::move(c));
    }
    pool.insert(pool.end(), gens.begin(), gens.end());
    while (pool.size() < size) {
        Vector v = Vector::zero(dim);
        for (const auto& g : gens) v = v + Rational(uniform(rng, -1, 1)) * g;
        if (model.kind() == ModelKind::vector_space && uniform(rng, 0, 3) == 0) v = Rational(1, 2) * v;
        pool.push_back(std::move(v));
    }
    return pool;
}

inline std::vector<Vector> sample_subset(const std::vector<Vector>& pool, std::mt19937_64& rng, int max_size = 3) {
    std::vector<Vector> out;
    const int n = uniform(rng, 0, max_size);
    for (int i = 0; i < n; ++i) out.push_back(pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))]);
    return out;
}

inline std::vector<Vector> random_subset_of(const std::vector<Vector>& s, std::mt19937_64& rng) {
    std::vector<Vector> out;
    for (const auto& v : s)
        if (uniform(rng, 0, 1)) out.push_back(v);
    return out;
}

using Matrix = std::vector<std::vector<Rational>>;

/// Random invertible rational matrix, or a random unimodular integer matrix
/// for lattices.
inline Matrix random_automorphism(const ClosureModel& model, std::mt19937_64& rng) {
    const std::size_t d = model.dim();
    Matrix m(d, std::vector<Rational>(d, Rational(0)));
    if (model.kind() == ModelKind::vector_space) {
        while (true) {
            std::vector<Vector> rows;
            for (auto& row : m) {
                for (auto& x : row) x = Rational(uniform(rng, -3, 3), static_cast<unsigned long>(uniform(rng, 1, 2)));
                rows.emplace_back(row);
            }
            if (model.rank(rows) == d) return m;
        }
    }
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
    if (d < 2) {
        if (d == 1 && uniform(rng, 0, 1)) m[0][0] = -1;
        return m;
    }
    const int ops = 3 * static_cast<int>(d);
    for (int k = 0; k < ops; ++k) {
        const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d) - 1));
        auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(d) - 2));
        if (j >= i) ++j;
        switch (uniform(rng, 0, 2)) {
            case 0: {
                const Rational f = uniform(rng, -2, 2);
                for (std::size_t c = 0; c < d; ++c) m[i][c] += f * m[j][c];
                break;
            }
            case 1: std::swap(m[i], m[j]); break;
            default:
                for (auto& x : m[i]) x = -x;
        }
    }
    return m;
}

inline Vector apply(const Matrix& m, const Vector& v) {
    std::vector<Rational> out(m.size(), Rational(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.dim(); ++j) out[i] += m[i][j] * v[j];
    return Vector(std::move(out));
}

inline std::vector<Vector> apply(const Matrix& m, const std::vector<Vector>& s) {
    std::vector<Vector> out;
    for (const auto& v : s) out.push_back(apply(m, v));
    return out;
}

}  // namespace indep::detail
