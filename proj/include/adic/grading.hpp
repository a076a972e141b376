#ifndef ADIC_GRADING_HPP
#define ADIC_GRADING_HPP

#include <functional>

#include "adic/complex.hpp"

namespace adic {

/* The graded regime: with positive weights each internal degree of a
 * finitely presented graded module is a finite dimensional vector space
 * with monomial coordinates, so limits and colimits reduce to stabilizing
 * exact linear algebra. Nothing here calls the Groebner engine. */

template <class K>
std::vector<Monomial> monomials_of_degree(const Ring<K>& r, std::int64_t d)
{
    std::vector<Monomial> out;
    if (d < 0)
        return out;
    const auto& w = r->weights;
    const std::size_t n = r->nvars();
    Monomial cur(n);
    std::function<void(std::size_t, std::int64_t)> rec =
        [&](std::size_t i, std::int64_t rem) {
            if (i == n) {
                if (rem == 0)
                    out.push_back(cur);
                return;
            }
            std::uint32_t wi = w.empty() ? 1 : w[i];
            for (std::uint32_t e = 0; (std::int64_t)e * wi <= rem; ++e) {
                cur.e[i] = e;
                rec(i + 1, rem - (std::int64_t)e * wi);
            }
            cur.e[i] = 0;
        };
    rec(0, d);
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
        return mon_cmp(a, b, r->ord) > 0;
    });
    return out;
}

/* dense vectors over the field */
template <class K>
using DVec = std::vector<typename K::Elem>;
template <class K>
using DMat = std::vector<DVec<K>>; // list of column vectors

/* reduced echelon store with optional coefficient tracking */
template <class K>
struct Echelon {
    const K* k = nullptr;
    std::size_t width = 0;
    std::vector<DVec<K>> rows;      // reduced echelon rows
    std::vector<std::size_t> pivots; // pivot position of each row

    Echelon() = default;
    Echelon(const K& field, std::size_t w) : k(&field), width(w) {}

    DVec<K> reduce(DVec<K> v) const
    {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto c = v[pivots[i]];
            if (k->is_zero(c))
                continue;
            for (std::size_t j = 0; j < width; ++j)
                v[j] = k->sub(v[j], k->mul(c, rows[i][j]));
        }
        return v;
    }

    // returns true if v was independent (and inserted)
    bool insert(DVec<K> v)
    {
        v = reduce(std::move(v));
        std::size_t p = width;
        for (std::size_t j = 0; j < width; ++j)
            if (!k->is_zero(v[j])) {
                p = j;
                break;
            }
        if (p == width)
            return false;
        auto inv = k->inv(v[p]);
        for (auto& x : v)
            x = k->mul(x, inv);
        // back-eliminate into existing rows
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto c = rows[i][p];
            if (k->is_zero(c))
                continue;
            for (std::size_t j = 0; j < width; ++j)
                rows[i][j] = k->sub(rows[i][j], k->mul(c, v[j]));
        }
        // keep rows sorted by pivot
        std::size_t at = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (pivots[i] > p) {
                at = i;
                break;
            }
        rows.insert(rows.begin() + at, std::move(v));
        pivots.insert(pivots.begin() + at, p);
        return true;
    }

    std::size_t rank() const { return rows.size(); }
    bool is_pivot(std::size_t j) const
    {
        for (auto p : pivots)
            if (p == j)
                return true;
        return false;
    }
};

/* echelon with coordinate tracking: solves v = sum c_i * basis_i */
template <class K>
struct SolvingEchelon {
    const K* k = nullptr;
    std::size_t width = 0;
    std::vector<DVec<K>> rows;
    std::vector<DVec<K>> coeffs; // row i of solution bookkeeping
    std::vector<std::size_t> pivots;
    std::size_t nbasis = 0;

    SolvingEchelon() = default;
    SolvingEchelon(const K& field, std::size_t w, std::size_t n)
        : k(&field), width(w), nbasis(n)
    {
    }

    void add_basis(const DVec<K>& v, std::size_t index)
    {
        DVec<K> c(nbasis, k->zero());
        c[index] = k->one();
        DVec<K> r = v;
        // forward reduce
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto f = r[pivots[i]];
            if (k->is_zero(f))
                continue;
            for (std::size_t j = 0; j < width; ++j)
                r[j] = k->sub(r[j], k->mul(f, rows[i][j]));
            for (std::size_t j = 0; j < nbasis; ++j)
                c[j] = k->sub(c[j], k->mul(f, coeffs[i][j]));
        }
        std::size_t p = width;
        for (std::size_t j = 0; j < width; ++j)
            if (!k->is_zero(r[j])) {
                p = j;
                break;
            }
        if (p == width)
            throw std::logic_error("solving echelon: dependent basis vector");
        auto inv = k->inv(r[p]);
        for (auto& x : r)
            x = k->mul(x, inv);
        for (auto& x : c)
            x = k->mul(x, inv);
        rows.push_back(std::move(r));
        coeffs.push_back(std::move(c));
        pivots.push_back(p);
    }

    // solve v = sum c_i basis_i; returns nullopt if not in span
    std::optional<DVec<K>> solve(DVec<K> v) const
    {
        DVec<K> c(nbasis, k->zero());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto f = v[pivots[i]];
            if (k->is_zero(f))
                continue;
            for (std::size_t j = 0; j < width; ++j)
                v[j] = k->sub(v[j], k->mul(f, rows[i][j]));
            for (std::size_t j = 0; j < nbasis; ++j)
                c[j] = k->add(c[j], k->mul(f, coeffs[i][j]));
        }
        for (auto& x : v)
            if (!k->is_zero(x))
                return std::nullopt;
        return c;
    }
};

/* degree-d slice of a finitely presented graded module: monomial
 * coordinates modulo the span of the relation multiples */
template <class K>
struct ModuleSlice {
    Ring<K> ring;
    std::int64_t degree = 0;
    // coordinates: (generator index, monomial), generator-major
    std::vector<std::pair<std::size_t, Monomial>> coords;
    std::vector<std::size_t> gen_offset; // per generator, offset into coords
    std::vector<std::vector<Monomial>> gen_monomials;
    Echelon<K> relspan;
    std::vector<std::size_t> free_pos; // quotient coordinate positions

    std::size_t dim() const { return free_pos.size(); }
    std::size_t ambient() const { return coords.size(); }

    // dense ambient coords of m * e_gen
    std::optional<std::size_t> coord_index(std::size_t gen,
                                           const Monomial& m) const
    {
        const auto& list = gen_monomials[gen];
        for (std::size_t i = 0; i < list.size(); ++i)
            if (list[i] == m)
                return gen_offset[gen] + i;
        return std::nullopt;
    }

    DVec<K> dense_of_column(const Column<K>& col) const
    {
        const K& k = ring->field;
        DVec<K> v(ambient(), k.zero());
        for (std::size_t i = 0; i < col.size(); ++i)
            for (auto& t : col[i].p.t) {
                auto ix = coord_index(i, t.m);
                if (!ix)
                    throw GradingError("column term outside slice degree");
                v[*ix] = k.add(v[*ix], t.c);
            }
        return v;
    }

    // canonical quotient coordinates
    DVec<K> quot(DVec<K> ambient_vec) const
    {
        const K& k = ring->field;
        auto red = relspan.reduce(std::move(ambient_vec));
        DVec<K> out(free_pos.size(), k.zero());
        for (std::size_t i = 0; i < free_pos.size(); ++i)
            out[i] = red[free_pos[i]];
        return out;
    }

    DVec<K> lift(const DVec<K>& q) const
    {
        const K& k = ring->field;
        DVec<K> v(ambient(), k.zero());
        for (std::size_t i = 0; i < free_pos.size(); ++i)
            v[free_pos[i]] = q[i];
        return v;
    }
};

template <class K>
ModuleSlice<K> module_slice(const FpModule<K>& m, std::int64_t d)
{
    ModuleSlice<K> s;
    s.ring = m.ring;
    s.degree = d;
    const K& k = m.ring->field;
    if (m.gens == 0) {
        s.relspan = Echelon<K>(k, 0);
        return s;
    }
    if (!m.ring->graded() || !m.gen_degrees)
        throw GradingError("module_slice requires the graded regime");
    s.gen_monomials.resize(m.gens);
    for (std::size_t g = 0; g < m.gens; ++g) {
        s.gen_offset.push_back(s.coords.size());
        s.gen_monomials[g] =
            monomials_of_degree(m.ring, d - (*m.gen_degrees)[g]);
        for (auto& mm : s.gen_monomials[g])
            s.coords.push_back({g, mm});
    }
    s.relspan = Echelon<K>(k, s.coords.size());
    for (auto& col : m.relations) {
        auto cd = column_degree(col, *m.gen_degrees, m.ring->weights);
        if (!cd)
            throw GradingError("inhomogeneous relation in graded slice");
        for (auto& mult : monomials_of_degree(m.ring, d - *cd)) {
            DVec<K> v(s.coords.size(), k.zero());
            bool any = false;
            for (std::size_t i = 0; i < col.size(); ++i)
                for (auto& t : col[i].p.t) {
                    auto ix = s.coord_index(i, mon_mul(t.m, mult));
                    if (ix) {
                        v[*ix] = k.add(v[*ix], t.c);
                        any = true;
                    }
                }
            if (any)
                s.relspan.insert(std::move(v));
        }
    }
    // quotient ideal relations act on every generator as well
    for (auto& q : m.ring->quotient_gb) {
        std::int64_t qd;
        poly_homogeneous(q, m.ring->weights, &qd);
        for (std::size_t g = 0; g < m.gens; ++g) {
            std::int64_t target = d - (*m.gen_degrees)[g] - qd;
            for (auto& mult : monomials_of_degree(m.ring, target)) {
                DVec<K> v(s.coords.size(), k.zero());
                bool any = false;
                for (auto& t : q.t) {
                    auto ix = s.coord_index(g, mon_mul(t.m, mult));
                    if (ix) {
                        v[*ix] = k.add(v[*ix], t.c);
                        any = true;
                    }
                }
                if (any)
                    s.relspan.insert(std::move(v));
            }
        }
    }
    for (std::size_t j = 0; j < s.coords.size(); ++j)
        if (!s.relspan.is_pivot(j))
            s.free_pos.push_back(j);
    return s;
}

/* slice of a degree-0 homogeneous matrix between graded modules */
template <class K>
DMat<K> slice_matrix(const Matrix<K>& mat, const FpModule<K>& src,
                     const FpModule<K>& tgt, const ModuleSlice<K>& ssrc,
                     const ModuleSlice<K>& stgt)
{
    const K& k = src.ring->field;
    DMat<K> out;
    for (std::size_t ci = 0; ci < ssrc.dim(); ++ci) {
        auto amb = ssrc.lift([&] {
            DVec<K> q(ssrc.dim(), k.zero());
            q[ci] = k.one();
            return q;
        }());
        // ambient vector -> element column -> image column -> target dense
        DVec<K> img(stgt.ambient(), k.zero());
        for (std::size_t pos = 0; pos < amb.size(); ++pos) {
            if (k.is_zero(amb[pos]))
                continue;
            auto [g, mm] = ssrc.coords[pos];
            // image of mm*e_g is mm * mat[g]
            for (std::size_t i = 0; i < tgt.gens; ++i)
                for (auto& t : mat[g][i].p.t) {
                    auto ix = stgt.coord_index(i, mon_mul(t.m, mm));
                    if (!ix)
                        throw GradingError("map not homogeneous of degree 0");
                    img[*ix] = k.add(img[*ix], k.mul(amb[pos], t.c));
                }
        }
        out.push_back(stgt.quot(std::move(img)));
    }
    return out;
}

/* slice cohomology of a complex at (cohomological degree kdeg, internal
 * degree d): canonical basis plus coordinate solver */
template <class K>
struct SliceH {
    std::size_t dim = 0;
    ModuleSlice<K> space;           // slice of component kdeg
    std::vector<DVec<K>> basis;     // quotient-coordinate vectors
    Echelon<K> boundaries;          // image of previous differential
    SolvingEchelon<K> solver;       // over boundary-reduced basis

    // coordinates of a cocycle (in quotient coords of `space`) in the basis
    DVec<K> coords(const DVec<K>& v) const
    {
        auto r = boundaries.reduce(v);
        auto c = solver.solve(std::move(r));
        if (!c)
            throw std::logic_error("slice cohomology: vector not a cocycle class");
        return *c;
    }
};

template <class K>
DVec<K> dmat_apply(const K& k, const DMat<K>& m, const DVec<K>& v)
{
    if (m.empty())
        return {};
    DVec<K> out(m[0].size(), k.zero());
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (k.is_zero(v[j]))
            continue;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = k.add(out[i], k.mul(m[j][i], v[j]));
    }
    return out;
}

template <class K>
SliceH<K> slice_cohomology(const Complex<K>& x, int kdeg, std::int64_t d)
{
    const K& k = x.ring->field;
    SliceH<K> h;
    h.space = module_slice(x.component(kdeg), d);
    ModuleSlice<K> snext = module_slice(x.component(kdeg + 1), d);
    ModuleSlice<K> sprev = module_slice(x.component(kdeg - 1), d);

    DMat<K> dk = x.component(kdeg).gens
                     ? slice_matrix(x.differential(kdeg), x.component(kdeg),
                                    x.component(kdeg + 1), h.space, snext)
                     : DMat<K>{};
    DMat<K> dprev = x.component(kdeg - 1).gens
                        ? slice_matrix(x.differential(kdeg - 1),
                                       x.component(kdeg - 1),
                                       x.component(kdeg), sprev, h.space)
                        : DMat<K>{};

    // kernel of dk : F^n -> F^m via RREF
    std::size_t n = h.space.dim();
    std::size_t m = snext.dim();
    // build row-major copy
    std::vector<DVec<K>> rows(m, DVec<K>(n, k.zero()));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            rows[i][j] = dk.empty() ? k.zero() : dk[j][i];
    Echelon<K> re(k, n);
    for (auto& r : rows)
        re.insert(r);
    std::vector<DVec<K>> kernel;
    // free columns of re give kernel basis
    for (std::size_t j = 0; j < n; ++j) {
        if (re.is_pivot(j))
            continue;
        DVec<K> v(n, k.zero());
        v[j] = k.one();
        // back-substitute pivots
        for (std::size_t i = 0; i < re.rows.size(); ++i) {
            // row: x_{pivot} + sum coeff*x_free = 0
            v[re.pivots[i]] = k.neg(re.rows[i][j]);
        }
        kernel.push_back(std::move(v));
    }

    h.boundaries = Echelon<K>(k, n);
    for (auto& col : dprev)
        h.boundaries.insert(col);

    std::vector<DVec<K>> chosen;
    Echelon<K> chosen_ech(k, n);
    for (auto& kv : kernel) {
        auto r = h.boundaries.reduce(kv);
        if (chosen_ech.insert(r))
            chosen.push_back(std::move(r));
    }
    h.basis = chosen;
    h.dim = chosen.size();
    h.solver = SolvingEchelon<K>(k, n, h.dim);
    for (std::size_t i = 0; i < chosen.size(); ++i)
        h.solver.add_basis(h.boundaries.reduce(chosen[i]), i);
    return h;
}

/* induced map on slice cohomology from a degree-0 complex map */
template <class K>
DMat<K> slice_induced(const ComplexMap<K>& f, int kdeg, std::int64_t d,
                      const SliceH<K>& hs, const SliceH<K>& ht)
{
    const K& k = f.source.ring->field;
    DMat<K> fm = f.source.component(kdeg).gens && f.target.component(kdeg).gens
                     ? slice_matrix(f.map_at(kdeg), f.source.component(kdeg),
                                    f.target.component(kdeg), hs.space,
                                    ht.space)
                     : DMat<K>{};
    DMat<K> out;
    for (auto& b : hs.basis) {
        DVec<K> img = fm.empty() ? DVec<K>(ht.space.dim(), k.zero())
                                 : dmat_apply(k, fm, b);
        out.push_back(ht.coords(img));
    }
    return out;
}

template <class K>
bool dmat_bijective(const K& k, const DMat<K>& m, std::size_t rows)
{
    if (m.size() != rows)
        return false;
    Echelon<K> e(k, rows);
    std::size_t r = 0;
    for (auto& c : m)
        if (e.insert(c))
            ++r;
    return r == rows;
}

} // namespace adic

#endif
