#ifndef ADIC_TELESCOPE_HPP
#define ADIC_TELESCOPE_HPP

#include "adic/koszul.hpp"

namespace adic {

/* Telescope complex of a single element, truncated at level j: free of
 * rank j+1 in degrees 0 and 1 with basis delta_0..delta_j, differential
 * delta_0 -> delta_0 and delta_i -> delta_{i-1} - a delta_i. */
template <class K>
Complex<K> telescope_single(const RElt<K>& a, std::uint32_t j)
{
    const Ring<K>& r = a.ring;
    std::optional<std::vector<std::int64_t>> d0, d1;
    if (r->graded()) {
        std::int64_t da = 0;
        if (!poly_homogeneous(a.p, r->weights, &da))
            throw GradingError("telescope element is not homogeneous");
        std::vector<std::int64_t> deg0, deg1;
        for (std::uint32_t i = 0; i <= j; ++i) {
            deg0.push_back(i == 0 ? 0 : -(std::int64_t)(i - 1) * da);
            deg1.push_back(-(std::int64_t)i * da);
        }
        d0 = deg0;
        d1 = deg1;
    }
    auto c0 = free_module(r, j + 1, d0);
    auto c1 = free_module(r, j + 1, d1);
    Matrix<K> d(j + 1, Column<K>(j + 1, relt_zero(r)));
    d[0][0] = relt_const(r, 1);
    for (std::uint32_t i = 1; i <= j; ++i) {
        d[i][i - 1] = relt_const(r, 1);
        d[i][i] = rneg(a);
    }
    return two_term_complex(c0, c1, d, 0);
}

template <class K>
Complex<K> telescope(const ElementSequence<K>& seq, std::uint32_t j)
{
    Complex<K> acc = telescope_single(seq.elems[0], j);
    for (std::size_t t = 1; t < seq.size(); ++t)
        acc = tensor(acc, telescope_single(seq.elems[t], j), false);
    return acc;
}

/* basis-preserving inclusion Tel_j -> Tel_{j'} */
template <class K>
ComplexMap<K> tel_inclusion_single(const RElt<K>& a, std::uint32_t j,
                                   std::uint32_t jp)
{
    if (j > jp)
        throw std::invalid_argument("telescope inclusion needs j <= j'");
    auto src = telescope_single(a, j);
    auto tgt = telescope_single(a, jp);
    const Ring<K>& r = a.ring;
    Matrix<K> m(j + 1, Column<K>(jp + 1, relt_zero(r)));
    for (std::uint32_t i = 0; i <= j; ++i)
        m[i][i] = relt_const(r, 1);
    std::map<int, Matrix<K>> maps;
    maps.emplace(0, m);
    maps.emplace(1, m);
    return make_complex_map(src, tgt, std::move(maps), false);
}

template <class K>
ComplexMap<K> tel_inclusion(const ElementSequence<K>& seq, std::uint32_t j,
                            std::uint32_t jp)
{
    ComplexMap<K> acc = tel_inclusion_single(seq.elems[0], j, jp);
    for (std::size_t t = 1; t < seq.size(); ++t)
        acc = tensor_map(acc, tel_inclusion_single(seq.elems[t], j, jp), false);
    return acc;
}

/* w for a single element: Tel_j(A; a) -> Hom(K(A; a^j), A); in degree 0
 * delta_0 -> 1 and delta_i -> 0, in degree 1 delta_i -> a^{j-i}. */
template <class K>
ComplexMap<K> w_map_single(const RElt<K>& a, std::uint32_t j)
{
    const Ring<K>& r = a.ring;
    auto src = telescope_single(a, j);
    auto tgt = dual_koszul_level(ElementSequence<K>(r, {a}), j);
    Matrix<K> m0(j + 1, Column<K>(1, relt_zero(r)));
    m0[0][0] = relt_const(r, 1);
    Matrix<K> m1(j + 1, Column<K>(1, relt_zero(r)));
    for (std::uint32_t i = 0; i <= j; ++i)
        m1[i][0] = rpow(a, j - i);
    std::map<int, Matrix<K>> maps;
    maps.emplace(0, m0);
    maps.emplace(1, m1);
    return make_complex_map(src, tgt, std::move(maps), true);
}

/* fold of the canonical collapses: tensor of the single duals into the
 * literal Hom of the tensor */
template <class K>
ComplexMap<K> fold_dual_collapse(const std::vector<Complex<K>>& xs)
{
    if (xs.empty())
        throw std::invalid_argument("fold_dual_collapse needs a factor");
    Complex<K> accX = xs[0];
    auto u = unit_complex(xs[0].ring);
    ComplexMap<K> acc = identity_complex_map(hom_from_free(accX, u, false));
    for (std::size_t t = 1; t < xs.size(); ++t) {
        auto step = hom_tensor_collapse(accX, xs[t], false);
        // step source: hom(accX) (x) hom(X_t); current acc lands in hom(accX)
        auto idt = identity_complex_map(hom_from_free(xs[t], u, false));
        auto widened = tensor_map(acc, idt, false);
        acc = compose(step, widened);
        accX = tensor(accX, xs[t], false);
    }
    return acc;
}

/* w: Tel_j(A; a) -> K^vee(A; a^j) for the full sequence */
template <class K>
ComplexMap<K> w_map(const ElementSequence<K>& seq, std::uint32_t j)
{
    ComplexMap<K> acc = w_map_single(seq.elems[0], j);
    if (seq.size() == 1)
        return acc;
    for (std::size_t t = 1; t < seq.size(); ++t)
        acc = tensor_map(acc, w_map_single(seq.elems[t], j), false);
    std::vector<Complex<K>> factors;
    for (std::size_t t = 0; t < seq.size(); ++t)
        factors.push_back(koszul_single(seq.elems[t], j));
    auto collapse = fold_dual_collapse(factors);
    auto out = compose(collapse, acc);
    // retarget onto the canonical dual level (bit-identical by construction)
    out.target = dual_koszul_level(seq, j);
    verify_complex_map(out);
    return out;
}

/* u = e^vee o w : Tel_j -> A */
template <class K>
ComplexMap<K> u_map(const ElementSequence<K>& seq, std::uint32_t j)
{
    auto w = w_map(seq, j);
    auto u = unit_complex(seq.ring);
    auto e = hom_precompose(koszul_unit(seq, j), u, false);
    auto out = compose(e, w);
    out.target = u;
    verify_complex_map(out);
    return out;
}

/* dual telescope */
template <class K>
Complex<K> dual_telescope(const ElementSequence<K>& seq, std::uint32_t j)
{
    return hom_from_free(telescope(seq, j), unit_complex(seq.ring), false);
}

/* modified powers p(a, 0) = 1, p(a, 1) = -1, p(a, i) = -a^{i-1} */
template <class K>
RElt<K> modified_power(const RElt<K>& a, std::uint32_t i)
{
    if (i == 0)
        return relt_const(a.ring, 1);
    if (i == 1)
        return relt_const(a.ring, -1);
    return rneg(rpow(a, i - 1));
}

template <class K>
FpModule<K> level_quotient(const ElementSequence<K>& seq, std::uint32_t j)
{
    return cyclic_module(seq.ring, sequence_power_gens(seq, j));
}

/* A/(a^j) (x) X for a bounded complex X of finitely presented modules:
 * same generators, relations enlarged by the power columns. (This is the
 * plain completion-level functor, underived by definition; the tensor
 * guard for derived products does not apply.) */
template <class K>
FpModule<K> level_quotient_module(const ElementSequence<K>& seq,
                                  std::uint32_t j, const FpModule<K>& m)
{
    FpModule<K> out = m;
    auto pows = sequence_power_gens(seq, j);
    for (std::size_t i = 0; i < m.gens; ++i)
        for (auto& p : pows) {
            Column<K> c(m.gens, relt_zero(m.ring));
            c[i] = p;
            out.relations.push_back(c);
        }
    return out;
}

template <class K>
Complex<K> level_quotient_complex(const ElementSequence<K>& seq,
                                  std::uint32_t j, const Complex<K>& x)
{
    Complex<K> out;
    out.ring = x.ring;
    for (auto& [k, m] : x.comp)
        out.comp.emplace(k, level_quotient_module(seq, j, m));
    out.diff = x.diff;
    return out;
}

/* tel_{a,j} : Tel_j^vee -> A/(a^j), the unique chain map matching the
 * canonical isomorphism on H^0; on the dual degree-0 basis it evaluates to
 * the product of modified powers. */
template <class K>
ComplexMap<K> tel_level_map(const ElementSequence<K>& seq, std::uint32_t j)
{
    const Ring<K>& r = seq.ring;
    auto src = dual_telescope(seq, j);
    auto tgt = one_term_complex(level_quotient(seq, j), 0);
    const std::size_t n = seq.size();
    const std::size_t width = j + 1;
    std::size_t total = 1;
    for (std::size_t t = 0; t < n; ++t)
        total *= width;
    Matrix<K> m(total, Column<K>(1, relt_zero(r)));
    for (std::size_t flat = 0; flat < total; ++flat) {
        // row-major multi-index over [0, j]^n
        std::size_t rest = flat;
        RElt<K> val = relt_const(r, 1);
        for (std::size_t t = n; t-- > 0;) {
            std::uint32_t it = (std::uint32_t)(rest % width);
            rest /= width;
            val = rmul(val, modified_power(seq.elems[t], it));
        }
        m[flat][0] = val;
    }
    std::map<int, Matrix<K>> maps;
    maps.emplace(0, m);
    return make_complex_map(src, tgt, std::move(maps), true);
}

/* tel on a module or bounded complex: Hom(Tel_j, X) -> A/(a^j) (x) X */
template <class K>
ComplexMap<K> tel_on_complex(const ElementSequence<K>& seq, std::uint32_t j,
                             const Complex<K>& x, bool verify = true)
{
    const Ring<K>& r = seq.ring;
    auto tel = telescope(seq, j);
    auto src = hom_from_free(tel, x, false);
    auto tgt = level_quotient_complex(seq, j, x);
    auto tl = tel_level_map(seq, j); // degree-0 matrix on dual basis
    const Matrix<K>& t0 = tl.maps.at(0);

    auto Lsrc = hom_layout(tel, x);
    std::map<int, Matrix<K>> maps;
    for (auto& [k, bl] : Lsrc.blocks) {
        if (!src.has(k) || !tgt.has(k))
            continue;
        Matrix<K> m(src.component(k).gens,
                    Column<K>(tgt.component(k).gens, relt_zero(r)));
        for (auto& b : bl) {
            if (b.i != 0)
                continue; // only the Tel-degree-0 block maps down
            for (std::size_t pi = 0; pi < b.pg; ++pi)
                for (std::size_t q2 = 0; q2 < b.ng; ++q2)
                    m[b.offset + pi * b.ng + q2][q2] = t0[pi][0];
        }
        maps.emplace(k, m);
    }
    return make_complex_map(src, tgt, std::move(maps), verify);
}

/* finitely supported function N^n -> M, evaluated through the modified
 * power formula at every level j = 1..J; agrees with tel_on_complex on the
 * degree-0 component */
template <class K>
struct TelEvalEntry {
    std::vector<std::uint32_t> index;
    Column<K> value; // element of M in generator coordinates
};

template <class K>
std::vector<Column<K>> tel_eval(const ElementSequence<K>& seq,
                                const FpModule<K>& m,
                                const std::vector<TelEvalEntry<K>>& f,
                                std::uint32_t J)
{
    const Ring<K>& r = seq.ring;
    std::vector<Column<K>> out;
    for (auto& e : f)
        if (e.index.size() != seq.size())
            throw std::invalid_argument("tel_eval: index arity mismatch");
    for (std::uint32_t j = 1; j <= J; ++j) {
        Column<K> acc(m.gens, relt_zero(r));
        for (auto& e : f) {
            RElt<K> c = relt_const(r, 1);
            for (std::size_t t = 0; t < seq.size(); ++t)
                c = rmul(c, modified_power(seq.elems[t], e.index[t]));
            for (std::size_t i = 0; i < m.gens; ++i)
                acc[i] = radd(acc[i], rmul(c, e.value[i]));
        }
        // reduce into A/(a^j) (x) M coordinates: normal form against the
        // level relations
        FpModule<K> lvl = module_tensor(level_quotient(seq, j), m);
        auto gb = relations_gb(lvl);
        out.push_back(modgb_normal_form(*gb, acc));
    }
    return out;
}

/* completion tower: levels A/(a^j) (x) X with canonical surjective
 * transitions and the tau maps X -> level j */
template <class K>
struct CompletionTower {
    ElementSequence<K> seq;
    ComplexTower<K> tower;           // inverse, level j = 1..J
    std::vector<ComplexMap<K>> tau;  // X -> level j
};

template <class K>
ComplexMap<K> level_quotient_transition(const ElementSequence<K>& seq,
                                        std::uint32_t from, std::uint32_t to)
{
    // A/(a^from) -> A/(a^to) for from >= to
    auto src = one_term_complex(level_quotient(seq, from), 0);
    auto tgt = one_term_complex(level_quotient(seq, to), 0);
    std::map<int, Matrix<K>> maps;
    maps.emplace(0, identity_matrix(seq.ring, 1));
    return make_complex_map(src, tgt, std::move(maps), false);
}

template <class K>
CompletionTower<K> completion_tower(const ElementSequence<K>& seq,
                                    const Complex<K>& x, std::uint32_t J)
{
    CompletionTower<K> ct{seq, {}, {}};
    ct.tower.direction = Direction::Inverse;
    auto id_maps = [&](const Complex<K>& from) {
        std::map<int, Matrix<K>> maps;
        for (auto& [k, m] : from.comp)
            maps.emplace(k, identity_matrix(seq.ring, m.gens));
        return maps;
    };
    for (std::uint32_t j = 1; j <= J; ++j) {
        auto lvl = level_quotient_complex(seq, j, x);
        ct.tower.levels.push_back(lvl);
        ct.tau.push_back(make_complex_map(x, lvl, id_maps(x), false));
    }
    for (std::uint32_t j = 1; j < J; ++j)
        ct.tower.transitions.push_back(make_complex_map(
            ct.tower.levels[j], ct.tower.levels[j - 1],
            id_maps(ct.tower.levels[j]), false));
    return ct;
}

} // namespace adic

#endif
