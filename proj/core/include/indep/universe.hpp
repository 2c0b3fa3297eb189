#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "indep/atoms.hpp"

namespace indep {

/// Bitmask encoding of subsets of a fixed, ordered variable universe.
/// Bit i stands for the i-th variable in canonical (name) order.
class Universe {
public:
    using Mask = std::uint32_t;
    static constexpr std::size_t max_size = 32;

    Universe() = default;
    explicit Universe(VarSet vars) : vars_(std::move(vars)) {
        if (vars_.size() > max_size)
            throw std::length_error("universe of " + std::to_string(vars_.size()) + " variables exceeds " +
                                    std::to_string(max_size));
    }

    const VarSet& vars() const noexcept { return vars_; }
    std::size_t size() const noexcept { return vars_.size(); }
    Mask full() const noexcept {
        return vars_.size() == 32 ? ~Mask{0} : static_cast<Mask>((Mask{1} << vars_.size()) - 1);
    }

    std::size_t index_of(const Variable& v) const {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
        if (it == vars_.end() || *it != v)
            throw std::out_of_range("variable '" + v.name() + "' is outside the universe");
        return static_cast<std::size_t>(it - vars_.begin());
    }

    Mask mask(const VarSet& vs) const {
        Mask m = 0;
        for (const auto& v : vs) m |= Mask{1} << index_of(v);
        return m;
    }

    VarSet vars_of(Mask m) const {
        VarSet out;
        out.reserve(static_cast<std::size_t>(std::popcount(m)));
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if ((m >> i) & 1U) out.push_back(vars_[i]);
        return out;
    }

private:
    VarSet vars_;
};

}  // namespace indep
