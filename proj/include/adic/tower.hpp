#ifndef ADIC_TOWER_HPP
#define ADIC_TOWER_HPP

#include "adic/complex.hpp"

namespace adic {

enum class Direction { Inverse, Direct };

/* Finite stand-in for an inverse or direct system: levels 1..J with
 * transitions between consecutive levels. For an inverse system
 * transitions[i] : level i+2 -> level i+1 (indices 0-based into `levels`);
 * for a direct system transitions[i] : level i+1 -> level i+2. */

template <class K>
struct ModuleTower {
    Direction direction = Direction::Inverse;
    std::vector<FpModule<K>> levels;
    std::vector<ModuleMap<K>> transitions;

    std::size_t count() const { return levels.size(); }
    void validate() const
    {
        if (levels.size() >= 1 && transitions.size() + 1 != levels.size())
            throw std::invalid_argument("tower: transition count mismatch");
    }
};

template <class K>
struct ComplexTower {
    Direction direction = Direction::Inverse;
    std::vector<Complex<K>> levels;
    std::vector<ComplexMap<K>> transitions;

    std::size_t count() const { return levels.size(); }
};

/* composite transition between two levels (1-based, from -> to, with
 * from >= to in an inverse system and from <= to in a direct one) */
template <class K>
ModuleMap<K> tower_composite(const ModuleTower<K>& t, std::size_t from,
                             std::size_t to)
{
    if (t.direction == Direction::Inverse) {
        if (from < to)
            throw std::invalid_argument("inverse composite goes downward");
        ModuleMap<K> acc = identity_map(t.levels[from - 1]);
        for (std::size_t j = from; j > to; --j)
            acc = compose(t.transitions[j - 2], acc);
        return acc;
    }
    if (to < from)
        throw std::invalid_argument("direct composite goes upward");
    ModuleMap<K> acc = identity_map(t.levels[from - 1]);
    for (std::size_t j = from; j < to; ++j)
        acc = compose(t.transitions[j - 1], acc);
    return acc;
}

/* Pro-zero certificate: for levels i where some j <= J kills the composite
 * transition, the minimal such j. `beyond_cap` lists levels whose search
 * ran out of levels; the system counts as certified when every level either
 * has a pair or sits beyond the reach allowed by the recorded offsets. */
struct ProZeroCertificate {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs; // (i, j(i))
    std::vector<std::uint32_t> beyond_cap;
    bool certified = false;

    std::uint32_t max_offset() const
    {
        std::uint32_t off = 0;
        for (auto& [i, j] : pairs)
            off = std::max(off, j - i);
        return off;
    }
};

template <class K>
ProZeroCertificate pro_zero_check(const ModuleTower<K>& t)
{
    if (t.direction != Direction::Inverse)
        throw std::invalid_argument("pro_zero_check expects an inverse system");
    ProZeroCertificate cert;
    const std::size_t J = t.count();
    bool all_found = true;
    for (std::uint32_t i = 1; i + 1 <= J; ++i) {
        bool found = false;
        for (std::uint32_t j = i; j <= J; ++j) {
            auto comp = tower_composite(t, j, i);
            if (map_is_zero(comp)) {
                cert.pairs.push_back({i, j});
                found = true;
                break;
            }
        }
        if (!found) {
            cert.beyond_cap.push_back(i);
            all_found = false;
        }
    }
    if (cert.pairs.empty()) {
        // degenerate: single level; pro-zero iff it is zero
        if (J == 1 && module_is_zero(t.levels[0])) {
            cert.pairs.push_back({1, 1});
            cert.certified = true;
        }
        return cert;
    }
    if (all_found) {
        cert.certified = true;
        return cert;
    }
    // trailing levels whose minimal kill index would exceed the cap do not
    // refute pro-zero; only gaps below J - max_offset do
    std::uint32_t off = cert.max_offset();
    cert.certified = true;
    for (auto i : cert.beyond_cap)
        if (i + off <= J)
            cert.certified = false;
    return cert;
}

/* re-verification used by report plumbing: every recorded pair must still
 * give a zero composite */
template <class K>
bool pro_zero_reverify(const ModuleTower<K>& t, const ProZeroCertificate& c)
{
    for (auto& [i, j] : c.pairs)
        if (!map_is_zero(tower_composite(t, j, i)))
            return false;
    return true;
}

/* direct-system version: the colimit vanishes iff every level is eventually
 * killed by a composite transition */
template <class K>
ProZeroCertificate colim_zero_check(const ModuleTower<K>& t)
{
    if (t.direction != Direction::Direct)
        throw std::invalid_argument("colim_zero_check expects a direct system");
    ProZeroCertificate cert;
    const std::size_t J = t.count();
    bool all_found = true;
    for (std::uint32_t i = 1; i <= J; ++i) {
        bool found = false;
        for (std::uint32_t j = i; j <= J; ++j) {
            if (map_is_zero(tower_composite(t, i, j))) {
                cert.pairs.push_back({i, j});
                found = true;
                break;
            }
        }
        if (!found) {
            cert.beyond_cap.push_back(i);
            all_found = false;
        }
    }
    if (all_found && !cert.pairs.empty()) {
        cert.certified = true;
        return cert;
    }
    if (cert.pairs.empty())
        return cert;
    std::uint32_t off = cert.max_offset();
    cert.certified = true;
    for (auto i : cert.beyond_cap)
        if (i + off <= J)
            cert.certified = false;
    return cert;
}

/* cohomology tower of a tower of complexes (degree k): modules plus the
 * induced transition maps */
template <class K>
ModuleTower<K> cohomology_tower(const ComplexTower<K>& t, int k)
{
    ModuleTower<K> out;
    out.direction = t.direction;
    std::vector<Matrix<K>> gens(t.count());
    for (std::size_t i = 0; i < t.count(); ++i)
        out.levels.push_back(cohomology(t.levels[i], k, &gens[i]));
    for (std::size_t i = 0; i + 1 < t.count(); ++i) {
        const auto& f = t.transitions[i];
        std::size_t s, d;
        if (t.direction == Direction::Inverse) {
            s = i + 1; // transition source level index
            d = i;
        } else {
            s = i;
            d = i + 1;
        }
        out.transitions.push_back(induced_map(f, k, &out.levels[s], &gens[s],
                                              &out.levels[d], &gens[d]));
    }
    return out;
}

} // namespace adic

#endif
