#ifndef ADIC_GROEBNER_HPP
#define ADIC_GROEBNER_HPP

#include <cstddef>
#include <deque>
#include <stdexcept>
#include <vector>

#include "adic/poly.hpp"

namespace adic {

/* Vectors in a free module P^g over the base polynomial ring, with the
 * position-over-term order: lower component index wins, ties broken by the
 * ring's term order. Terms are kept sorted strictly descending. */

template <class K>
struct FreeVec {
    struct Term {
        std::uint32_t comp;
        Monomial m;
        typename K::Elem c;
    };
    std::vector<Term> t;

    bool is_zero() const { return t.empty(); }
    const Term& lead() const { return t.front(); }
};

inline int modterm_cmp(std::uint32_t ca, const Monomial& ma, std::uint32_t cb,
                       const Monomial& mb, TermOrderKind ord)
{
    if (ca != cb)
        return ca < cb ? 1 : -1;
    return mon_cmp(ma, mb, ord);
}

template <class K>
FreeVec<K> vec_add(const K& k, const FreeVec<K>& a, const FreeVec<K>& b,
                   TermOrderKind ord)
{
    FreeVec<K> r;
    r.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        int c = modterm_cmp(a.t[i].comp, a.t[i].m, b.t[j].comp, b.t[j].m, ord);
        if (c > 0)
            r.t.push_back(a.t[i++]);
        else if (c < 0)
            r.t.push_back(b.t[j++]);
        else {
            auto s = k.add(a.t[i].c, b.t[j].c);
            if (!k.is_zero(s))
                r.t.push_back({a.t[i].comp, a.t[i].m, s});
            ++i;
            ++j;
        }
    }
    for (; i < a.t.size(); ++i)
        r.t.push_back(a.t[i]);
    for (; j < b.t.size(); ++j)
        r.t.push_back(b.t[j]);
    return r;
}

template <class K>
FreeVec<K> vec_scale_term(const K& k, const FreeVec<K>& a, const Monomial& m,
                          const typename K::Elem& c)
{
    FreeVec<K> r;
    if (k.is_zero(c))
        return r;
    r.t.reserve(a.t.size());
    for (auto& tm : a.t)
        r.t.push_back({tm.comp, mon_mul(tm.m, m), k.mul(tm.c, c)});
    return r;
}

template <class K>
FreeVec<K> vec_neg(const K& k, const FreeVec<K>& a)
{
    FreeVec<K> r = a;
    for (auto& tm : r.t)
        tm.c = k.neg(tm.c);
    return r;
}

template <class K>
FreeVec<K> vec_mul_poly(const K& k, const FreeVec<K>& a, const Poly<K>& p,
                        TermOrderKind ord)
{
    FreeVec<K> r;
    for (auto& tm : p.t)
        r = vec_add(k, r, vec_scale_term(k, a, tm.m, tm.c), ord);
    return r;
}

template <class K>
bool vec_eq(const K& k, const FreeVec<K>& a, const FreeVec<K>& b)
{
    if (a.t.size() != b.t.size())
        return false;
    for (std::size_t i = 0; i < a.t.size(); ++i)
        if (a.t[i].comp != b.t[i].comp || !(a.t[i].m == b.t[i].m) ||
            !k.eq(a.t[i].c, b.t[i].c))
            return false;
    return true;
}

/* Division with quotient tracking. Fully reduces every term (normal form),
 * always picking the first applicable reducer, so the result is canonical
 * for a fixed basis order. */
template <class K>
struct DivisionResult {
    FreeVec<K> rem;
    std::vector<Poly<K>> quot; // one per basis element
};

template <class K>
DivisionResult<K> vec_reduce(const K& k, const FreeVec<K>& f,
                             const std::vector<FreeVec<K>>& basis,
                             TermOrderKind ord)
{
    DivisionResult<K> res;
    res.quot.assign(basis.size(), Poly<K>{});
    FreeVec<K> cur = f;
    FreeVec<K> rem;
    while (!cur.is_zero()) {
        const auto& lt = cur.lead();
        bool reduced = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].is_zero())
                continue;
            const auto& bl = basis[i].lead();
            if (bl.comp != lt.comp || !mon_divides(bl.m, lt.m))
                continue;
            Monomial q = mon_div(lt.m, bl.m);
            auto c = k.div(lt.c, bl.c);
            cur = vec_add(k, cur, vec_scale_term(k, basis[i], q, k.neg(c)),
                          ord);
            res.quot[i] = poly_add(k, res.quot[i], poly_term(k, q, c), ord);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.t.push_back(lt);
            cur.t.erase(cur.t.begin());
        }
    }
    res.rem = rem;
    return res;
}

/* Buchberger with representation tracking.  Besides the reduced Groebner
 * basis of the column span, returns for each basis element its expression
 * in the input columns, and a generating set for the syzygy module of the
 * inputs (S-pair reductions to zero plus the input re-expression columns).
 * No pair-skipping criteria: every reduction to zero must surface as a
 * syzygy generator. */

template <class K>
struct GroebnerResult {
    std::vector<FreeVec<K>> gb;             // reduced, monic, sorted
    std::vector<std::vector<Poly<K>>> reps; // gb[i] = sum reps[i][j]*input[j]
    std::vector<std::vector<Poly<K>>> syz;  // columns of Syz(inputs)
};

namespace detail {

template <class K>
struct TrackedVec {
    FreeVec<K> v;
    std::vector<Poly<K>> rep; // invariant: v == sum rep[j] * input[j]
};

template <class K>
void tracked_axpy(const K& k, TrackedVec<K>& a, const TrackedVec<K>& b,
                  const Monomial& m, const typename K::Elem& c,
                  TermOrderKind ord)
{
    a.v = vec_add(k, a.v, vec_scale_term(k, b.v, m, c), ord);
    Poly<K> f = poly_term(k, m, c);
    for (std::size_t j = 0; j < a.rep.size(); ++j)
        a.rep[j] = poly_add(k, a.rep[j], poly_mul(k, f, b.rep[j], ord), ord);
}

template <class K>
void tracked_make_monic(const K& k, TrackedVec<K>& a)
{
    if (a.v.is_zero())
        return;
    auto c = k.inv(a.v.lead().c);
    for (auto& tm : a.v.t)
        tm.c = k.mul(tm.c, c);
    for (auto& p : a.rep)
        p = poly_scale(k, p, c);
}

template <class K>
void tracked_reduce(const K& k, TrackedVec<K>& f,
                    const std::vector<TrackedVec<K>>& basis, TermOrderKind ord)
{
    FreeVec<K> rem;
    while (!f.v.is_zero()) {
        const auto& lt = f.v.lead();
        bool hit = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].v.is_zero())
                continue;
            const auto& bl = basis[i].v.lead();
            if (bl.comp != lt.comp || !mon_divides(bl.m, lt.m))
                continue;
            Monomial q = mon_div(lt.m, bl.m);
            auto c = k.neg(k.div(lt.c, bl.c));
            tracked_axpy(k, f, basis[i], q, c, ord);
            hit = true;
            break;
        }
        if (!hit) {
            rem.t.push_back(lt);
            f.v.t.erase(f.v.t.begin());
        }
    }
    f.v = rem;
}

} // namespace detail

template <class K>
GroebnerResult<K> module_groebner(const K& k,
                                  const std::vector<FreeVec<K>>& inputs,
                                  std::size_t nvars, TermOrderKind ord)
{
    using TV = detail::TrackedVec<K>;
    const std::size_t s = inputs.size();

    GroebnerResult<K> out;
    auto unit_rep = [&](std::size_t i) {
        std::vector<Poly<K>> r(s);
        r[i] = poly_term(k, Monomial(nvars), k.one());
        return r;
    };
    auto record_syzygy = [&](const std::vector<Poly<K>>& rep) {
        for (auto& p : rep)
            if (!p.is_zero()) {
                out.syz.push_back(rep);
                return;
            }
    };

    std::vector<TV> G;
    for (std::size_t i = 0; i < s; ++i) {
        if (inputs[i].is_zero()) {
            record_syzygy(unit_rep(i));
            continue;
        }
        TV f{inputs[i], unit_rep(i)};
        detail::tracked_reduce(k, f, G, ord);
        if (f.v.is_zero()) {
            record_syzygy(f.rep);
            continue;
        }
        detail::tracked_make_monic(k, f);
        G.push_back(f);
    }

    struct Pair {
        std::size_t a, b;
    };
    std::deque<Pair> pairs;
    auto push_pairs_for = [&](std::size_t idx) {
        for (std::size_t i = 0; i < idx; ++i)
            if (!G[i].v.is_zero() &&
                G[i].v.lead().comp == G[idx].v.lead().comp)
                pairs.push_back({i, idx});
    };
    for (std::size_t i = 0; i < G.size(); ++i)
        push_pairs_for(i);

    while (!pairs.empty()) {
        auto [ia, ib] = pairs.front();
        pairs.pop_front();
        const auto& la = G[ia].v.lead();
        const auto& lb = G[ib].v.lead();
        Monomial l = mon_lcm(la.m, lb.m);
        TV sp;
        sp.rep.assign(s, Poly<K>{});
        detail::tracked_axpy(k, sp, G[ia], mon_div(l, la.m), k.one(), ord);
        detail::tracked_axpy(k, sp, G[ib], mon_div(l, lb.m), k.neg(k.one()),
                             ord);
        detail::tracked_reduce(k, sp, G, ord);
        if (sp.v.is_zero()) {
            record_syzygy(sp.rep);
        } else {
            detail::tracked_make_monic(k, sp);
            G.push_back(sp);
            push_pairs_for(G.size() - 1);
        }
    }

    // minimalize: ascending lead order, keep only leads not divisible by a
    // previously kept one (divisibility implies <= in the order, so one pass)
    std::vector<std::size_t> idx(G.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        int c = modterm_cmp(G[x].v.lead().comp, G[x].v.lead().m,
                            G[y].v.lead().comp, G[y].v.lead().m, ord);
        if (c != 0)
            return c < 0;
        return x < y;
    });
    std::vector<TV> M;
    for (auto i : idx) {
        const auto& li = G[i].v.lead();
        bool divisible = false;
        for (auto& m : M) {
            const auto& lm = m.v.lead();
            if (lm.comp == li.comp && mon_divides(lm.m, li.m)) {
                divisible = true;
                break;
            }
        }
        if (!divisible)
            M.push_back(G[i]);
    }

    // tail-reduce for the reduced basis (leads are pairwise non-divisible,
    // so only tails change)
    for (std::size_t i = 0; i < M.size(); ++i) {
        std::vector<TV> others;
        others.reserve(M.size() - 1);
        for (std::size_t j = 0; j < M.size(); ++j)
            if (j != i)
                others.push_back(M[j]);
        detail::tracked_reduce(k, M[i], others, ord);
        detail::tracked_make_monic(k, M[i]);
    }

    std::sort(M.begin(), M.end(), [&](const TV& x, const TV& y) {
        return modterm_cmp(x.v.lead().comp, x.v.lead().m, y.v.lead().comp,
                           y.v.lead().m, ord) > 0;
    });

    for (auto& g : M) {
        out.gb.push_back(g.v);
        out.reps.push_back(g.rep);
    }

    // input re-expression syzygies: e_i - coords of input i in the final GB
    for (std::size_t i = 0; i < s; ++i) {
        if (inputs[i].is_zero())
            continue;
        auto d = vec_reduce(k, inputs[i], out.gb, ord);
        if (!d.rem.is_zero())
            throw std::logic_error("groebner: input does not reduce to zero");
        std::vector<Poly<K>> sy(s);
        sy[i] = poly_term(k, Monomial(nvars), k.one());
        for (std::size_t g = 0; g < out.gb.size(); ++g) {
            if (d.quot[g].is_zero())
                continue;
            for (std::size_t j = 0; j < s; ++j)
                sy[j] = poly_sub(
                    k, sy[j], poly_mul(k, d.quot[g], out.reps[g][j], ord),
                    ord);
        }
        record_syzygy(sy);
    }

    return out;
}

} // namespace adic

#endif
