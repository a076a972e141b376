#ifndef ADIC_KOSZUL_HPP
#define ADIC_KOSZUL_HPP

#include "adic/tower.hpp"

namespace adic {

/* Koszul complex of a^i for a single element: A --a^i--> A in degrees
 * -1, 0. The power is passed separately so the degree -1 generator keeps
 * internal degree i*deg(a) even when a^i reduces to zero in a quotient. */
template <class K>
Complex<K> koszul_single(const RElt<K>& a, std::uint32_t i = 1)
{
    const Ring<K>& r = a.ring;
    std::optional<std::vector<std::int64_t>> dminus, dzero;
    if (r->graded()) {
        std::int64_t da = 0;
        if (!poly_homogeneous(a.p, r->weights, &da))
            throw GradingError("koszul element is not homogeneous");
        dminus = std::vector<std::int64_t>{(std::int64_t)i * da};
        dzero = std::vector<std::int64_t>{0};
    }
    auto src = free_module(r, 1, dminus);
    auto tgt = free_module(r, 1, dzero);
    return two_term_complex(src, tgt, Matrix<K>{{rpow(a, i)}}, -1);
}

template <class K>
Complex<K> koszul_complex(const ElementSequence<K>& seq, std::uint32_t i = 1)
{
    Complex<K> acc = koszul_single(seq.elems[0], i);
    for (std::size_t t = 1; t < seq.size(); ++t)
        acc = tensor(acc, koszul_single(seq.elems[t], i), false);
    return acc;
}

/* transition K(A; a^j) -> K(A; a^i): identity in degree 0, multiplication
 * by a^{j-i} in degree -1, tensored over the sequence */
template <class K>
ComplexMap<K> koszul_transition_single(const RElt<K>& a, std::uint32_t j,
                                       std::uint32_t i)
{
    if (j < i)
        throw std::invalid_argument("koszul transition needs j >= i");
    auto src = koszul_single(a, j);
    auto tgt = koszul_single(a, i);
    std::map<int, Matrix<K>> maps;
    maps.emplace(-1, Matrix<K>{{rpow(a, j - i)}});
    maps.emplace(0, identity_matrix(a.ring, 1));
    return make_complex_map(src, tgt, std::move(maps), false);
}

template <class K>
ComplexMap<K> koszul_transition(const ElementSequence<K>& seq, std::uint32_t j,
                                std::uint32_t i)
{
    ComplexMap<K> acc = koszul_transition_single(seq.elems[0], j, i);
    for (std::size_t t = 1; t < seq.size(); ++t)
        acc = tensor_map(acc, koszul_transition_single(seq.elems[t], j, i),
                         false);
    return acc;
}

template <class K>
struct KoszulTower {
    ElementSequence<K> seq;
    ComplexTower<K> tower; // inverse system, level index = power i = 1..J
};

template <class K>
KoszulTower<K> koszul_tower(const ElementSequence<K>& seq, std::uint32_t J)
{
    if (J < 1)
        throw std::invalid_argument("koszul_tower needs J >= 1");
    KoszulTower<K> t{seq, {}};
    t.tower.direction = Direction::Inverse;
    for (std::uint32_t i = 1; i <= J; ++i)
        t.tower.levels.push_back(koszul_complex(seq, i));
    for (std::uint32_t i = 1; i < J; ++i)
        t.tower.transitions.push_back(koszul_transition(seq, i + 1, i));
    return t;
}

/* unit of the Koszul DG algebra: A -> K(A; a^i), the identity in degree 0 */
template <class K>
ComplexMap<K> koszul_unit(const ElementSequence<K>& seq, std::uint32_t i = 1)
{
    auto kz = koszul_complex(seq, i);
    auto u = unit_complex(seq.ring);
    std::map<int, Matrix<K>> maps;
    maps.emplace(0, identity_matrix(seq.ring, 1));
    return make_complex_map(u, kz, std::move(maps), false);
}

/* Dual Koszul system: level i is literally Hom(K(A; a^i), A), a complex of
 * finite rank free modules in degrees 0..n; the levels form a direct system
 * via the duals of the tower transitions, with augmentations e to A. */
template <class K>
struct DualKoszulSystem {
    ElementSequence<K> seq;
    ComplexTower<K> system;                  // direct, levels 1..J
    std::vector<ComplexMap<K>> augmentations; // level -> unit complex
};

template <class K>
Complex<K> dual_koszul_level(const ElementSequence<K>& seq, std::uint32_t i)
{
    return hom_from_free(koszul_complex(seq, i), unit_complex(seq.ring),
                         false);
}

template <class K>
DualKoszulSystem<K> dual_koszul_system(const ElementSequence<K>& seq,
                                       std::uint32_t J)
{
    if (J < 1)
        throw std::invalid_argument("dual_koszul_system needs J >= 1");
    DualKoszulSystem<K> d{seq, {}, {}};
    d.system.direction = Direction::Direct;
    auto u = unit_complex(seq.ring);
    for (std::uint32_t i = 1; i <= J; ++i)
        d.system.levels.push_back(dual_koszul_level(seq, i));
    for (std::uint32_t i = 1; i < J; ++i)
        d.system.transitions.push_back(
            hom_precompose(koszul_transition(seq, i + 1, i), u, false));
    for (std::uint32_t i = 1; i <= J; ++i) {
        // e^vee: restriction along the unit A -> K(A; a^i)
        auto e = koszul_unit(seq, i);
        d.augmentations.push_back(hom_precompose(e, u, false));
    }
    return d;
}

/* ---- weak proregularity ---- */

struct WprCertificate {
    std::map<int, ProZeroCertificate> per_degree; // cohomological degree k < 0
    bool certified = false;
    std::string note;
};

template <class K>
WprCertificate wpr_check(const ElementSequence<K>& seq, std::uint32_t J)
{
    if (J < 2)
        throw std::invalid_argument("wpr_check needs J >= 2");
    auto kt = koszul_tower(seq, J);
    WprCertificate out;
    out.certified = true;
    const int n = (int)seq.size();
    for (int k = -n; k < 0; ++k) {
        auto ht = cohomology_tower(kt.tower, k);
        auto cert = pro_zero_check(ht);
        if (!pro_zero_reverify(ht, cert))
            throw std::logic_error("wpr certificate failed re-verification");
        if (!cert.certified)
            out.certified = false;
        out.per_degree.emplace(k, std::move(cert));
    }
    out.note = out.certified
                   ? "pro-zero certificates found at every negative degree"
                   : "undetermined at cap (raise J; noetherian rings always "
                     "certify at some finite level)";
    return out;
}

} // namespace adic

#endif
