#ifndef ADIC_MODULE_HPP
#define ADIC_MODULE_HPP

#include <optional>

#include "adic/ring.hpp"

namespace adic {

/* Finitely presented module: cokernel of the relation matrix acting on a
 * free module of rank `gens`. Relation columns are normal forms; in the
 * graded regime every column is homogeneous w.r.t. the generator degrees. */

template <class K>
struct FpModule {
    Ring<K> ring;
    std::size_t gens = 0;
    Matrix<K> relations;                        // columns of length `gens`
    std::optional<std::vector<std::int64_t>> gen_degrees;

    bool graded() const { return gen_degrees.has_value(); }
};

template <class K>
FpModule<K> free_module(const Ring<K>& r, std::size_t g,
                        std::optional<std::vector<std::int64_t>> degs = {})
{
    FpModule<K> m;
    m.ring = r;
    m.gens = g;
    if (degs && degs->size() != g)
        throw GradingError("generator degree count mismatch");
    m.gen_degrees = degs;
    return m;
}

/* degree of a homogeneous column w.r.t. generator degrees; nullopt if the
 * column is not homogeneous (or zero, which fits any degree) */
template <class K>
std::optional<std::int64_t> column_degree(const Column<K>& col,
                                          const std::vector<std::int64_t>& gdeg,
                                          const std::vector<std::uint32_t>& w)
{
    std::optional<std::int64_t> d;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (col[i].is_zero())
            continue;
        std::int64_t pd;
        if (!poly_homogeneous(col[i].p, w, &pd))
            return std::nullopt;
        std::int64_t total = pd + gdeg[i];
        if (d && *d != total)
            return std::nullopt;
        d = total;
    }
    return d ? d : std::optional<std::int64_t>(0);
}

template <class K>
void check_graded_presentation(const FpModule<K>& m)
{
    if (!m.ring->graded() || !m.graded())
        return;
    for (auto& col : m.relations)
        if (!column_degree(col, *m.gen_degrees, m.ring->weights))
            throw GradingError("relation column is not homogeneous");
}

template <class K>
FpModule<K> make_module(const Ring<K>& r, std::size_t g, const Matrix<K>& rel,
                        std::optional<std::vector<std::int64_t>> degs = {})
{
    FpModule<K> m = free_module(r, g, std::move(degs));
    for (auto& col : rel)
        if (col.size() != g)
            throw std::invalid_argument("relation column height mismatch");
    m.relations = rel;
    check_graded_presentation(m);
    return m;
}

/* A^1/(f1..fs) */
template <class K>
FpModule<K> cyclic_module(const Ring<K>& r, const std::vector<RElt<K>>& ideal)
{
    Matrix<K> rel;
    for (auto& f : ideal)
        rel.push_back(Column<K>{f});
    std::optional<std::vector<std::int64_t>> degs;
    if (r->graded())
        degs = std::vector<std::int64_t>{0};
    return make_module(r, 1, rel, degs);
}

template <class K>
std::shared_ptr<const ModGB<K>> relations_gb(const FpModule<K>& m)
{
    return module_gb(m.ring, m.relations, m.gens);
}

template <class K>
bool module_is_zero(const FpModule<K>& m)
{
    auto gb = relations_gb(m);
    for (std::size_t i = 0; i < m.gens; ++i) {
        Column<K> e(m.gens, relt_zero(m.ring));
        e[i] = relt_const(m.ring, 1);
        if (!modgb_contains(*gb, e))
            return false;
    }
    return true;
}

/* witness: normal form of the first nonzero generator class, for reports */
template <class K>
std::optional<std::string> module_nonzero_witness(const FpModule<K>& m)
{
    auto gb = relations_gb(m);
    for (std::size_t i = 0; i < m.gens; ++i) {
        Column<K> e(m.gens, relt_zero(m.ring));
        e[i] = relt_const(m.ring, 1);
        auto nf = modgb_normal_form(*gb, e);
        for (auto& x : nf)
            if (!x.is_zero()) {
                std::string s = "generator " + std::to_string(i) + " ~ (";
                for (std::size_t j = 0; j < nf.size(); ++j)
                    s += (j ? ", " : "") + rstr(nf[j]);
                return s + ")";
            }
    }
    return std::nullopt;
}

/* ---- matrix utilities ---- */

template <class K>
Column<K> mat_apply(const Matrix<K>& mat, const Column<K>& v, const Ring<K>& r,
                    std::size_t rows)
{
    Column<K> out(rows, relt_zero(r));
    if (mat.size() != v.size())
        throw std::invalid_argument("matrix/vector size mismatch");
    for (std::size_t j = 0; j < mat.size(); ++j) {
        if (v[j].is_zero())
            continue;
        for (std::size_t i = 0; i < rows; ++i) {
            if (mat[j][i].is_zero())
                continue;
            out[i] = radd(out[i], rmul(mat[j][i], v[j]));
        }
    }
    return out;
}

template <class K>
Matrix<K> mat_compose(const Matrix<K>& f, const Matrix<K>& g, const Ring<K>& r,
                      std::size_t rows_f)
{
    // (f o g): columns of g pushed through f
    Matrix<K> out;
    for (auto& col : g)
        out.push_back(mat_apply(f, col, r, rows_f));
    return out;
}

template <class K>
Matrix<K> identity_matrix(const Ring<K>& r, std::size_t g)
{
    Matrix<K> m;
    for (std::size_t j = 0; j < g; ++j) {
        Column<K> c(g, relt_zero(r));
        c[j] = relt_const(r, 1);
        m.push_back(c);
    }
    return m;
}

/* Module maps carry generator-image matrices and are checked to be
 * well-defined at construction (fail fast). */
template <class K>
struct ModuleMap {
    FpModule<K> source;
    FpModule<K> target;
    Matrix<K> mat; // mat[j] = image of source generator j, length target.gens

    ModuleMap() = default;
    ModuleMap(FpModule<K> src, FpModule<K> tgt, Matrix<K> matrix,
              bool verify = true)
        : source(std::move(src)), target(std::move(tgt)), mat(std::move(matrix))
    {
        if (mat.size() != source.gens)
            throw std::invalid_argument("map has wrong number of columns");
        for (auto& c : mat)
            if (c.size() != target.gens)
                throw std::invalid_argument("map column height mismatch");
        if (verify && !well_defined())
            throw std::domain_error("module map not well-defined");
    }

    bool well_defined() const
    {
        auto gb = relations_gb(target);
        for (auto& rel : source.relations) {
            auto img = mat_apply(mat, rel, source.ring, target.gens);
            if (!modgb_contains(*gb, img))
                return false;
        }
        return true;
    }
};

template <class K>
ModuleMap<K> identity_map(const FpModule<K>& m)
{
    return ModuleMap<K>(m, m, identity_matrix(m.ring, m.gens), false);
}

template <class K>
ModuleMap<K> zero_map(const FpModule<K>& src, const FpModule<K>& tgt)
{
    Matrix<K> mat(src.gens, Column<K>(tgt.gens, relt_zero(src.ring)));
    return ModuleMap<K>(src, tgt, mat, false);
}

template <class K>
ModuleMap<K> compose(const ModuleMap<K>& f, const ModuleMap<K>& g)
{
    // f after g
    return ModuleMap<K>(g.source, f.target,
                        mat_compose(f.mat, g.mat, f.source.ring, f.target.gens),
                        false);
}

template <class K>
bool map_is_zero(const ModuleMap<K>& f)
{
    auto gb = relations_gb(f.target);
    for (auto& col : f.mat)
        if (!modgb_contains(*gb, col))
            return false;
    return true;
}

template <class K>
bool maps_equal(const ModuleMap<K>& f, const ModuleMap<K>& g)
{
    if (f.mat.size() != g.mat.size())
        return false;
    auto gb = relations_gb(f.target);
    for (std::size_t j = 0; j < f.mat.size(); ++j) {
        Column<K> d(f.target.gens, relt_zero(f.source.ring));
        for (std::size_t i = 0; i < f.target.gens; ++i)
            d[i] = rsub(f.mat[j][i], g.mat[j][i]);
        if (!modgb_contains(*gb, d))
            return false;
    }
    return true;
}

/* ---- kernel / image / cokernel via the double-syzygy construction ---- */

template <class K>
struct ModuleCalculus {
    FpModule<K> kernel;
    ModuleMap<K> kernel_inclusion;
    FpModule<K> image;
    ModuleMap<K> image_inclusion; // image -> target
    FpModule<K> cokernel;
    bool is_zero_map = false;
};

namespace detail {

/* syzygy u-parts of [cols | extra] restricted to the first `cols.size()`
 * coordinates, as a Matrix */
template <class K>
Matrix<K> syzygy_uparts(const Ring<K>& r, const Matrix<K>& cols,
                        const Matrix<K>& extra, std::size_t g)
{
    Matrix<K> all = cols;
    for (auto& c : extra)
        all.push_back(c);
    auto gb = module_gb(r, all, g);
    Matrix<K> out;
    for (auto& sy : gb->syzygies) {
        Column<K> u;
        bool nz = false;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            u.push_back(RElt<K>(r, sy[j]));
            if (!sy[j].is_zero())
                nz = true;
        }
        if (nz)
            out.push_back(u);
    }
    return out;
}

} // namespace detail

/* generator degrees for columns over a graded module; degrades to ungraded
 * (nullopt) when a column is inhomogeneous */
template <class K>
std::optional<std::vector<std::int64_t>> column_degrees(
    const Ring<K>& r, const Matrix<K>& cols,
    const std::optional<std::vector<std::int64_t>>& gdeg)
{
    if (!r->graded() || !gdeg)
        return std::nullopt;
    std::vector<std::int64_t> out;
    for (auto& c : cols) {
        auto d = column_degree(c, *gdeg, r->weights);
        if (!d)
            return std::nullopt;
        out.push_back(*d);
    }
    return out;
}

template <class K>
ModuleCalculus<K> module_calculus(const ModuleMap<K>& f)
{
    ModuleCalculus<K> out;
    const Ring<K>& r = f.source.ring;

    // U = syzygy u-parts of [F | R_target]: coefficient vectors u with
    // F u in span(R_target); these generate both ker (inside source) and the
    // relations of im (on the generators F e_j)
    Matrix<K> U = detail::syzygy_uparts(r, f.mat, f.target.relations,
                                        f.target.gens);

    // kernel: generated by U inside the source; relations = syzygies of U
    // modulo the source relations
    Matrix<K> kerrel =
        detail::syzygy_uparts(r, U, f.source.relations, f.source.gens);
    out.kernel = make_module(r, U.size(), kerrel,
                             column_degrees(r, U, f.source.gen_degrees));
    out.kernel_inclusion = ModuleMap<K>(out.kernel, f.source, U, false);

    // image: generators = classes of F e_j in target, relations = U
    out.image = make_module(r, f.source.gens, U, f.source.gen_degrees);
    out.image_inclusion = ModuleMap<K>(out.image, f.target, f.mat, false);

    // cokernel: target modulo image columns
    Matrix<K> crel = f.mat;
    for (auto& c : f.target.relations)
        crel.push_back(c);
    out.cokernel = make_module(r, f.target.gens, crel, f.target.gen_degrees);

    out.is_zero_map = map_is_zero(f);
    return out;
}

template <class K>
bool map_is_iso(const ModuleMap<K>& f)
{
    auto c = module_calculus(f);
    return module_is_zero(c.kernel) && module_is_zero(c.cokernel);
}

/* submodule span equality inside A^g (with quotient relations implicit) */
template <class K>
bool submodule_eq(const Ring<K>& r, const Matrix<K>& a, const Matrix<K>& b,
                  std::size_t g)
{
    auto gba = module_gb(r, a, g);
    auto gbb = module_gb(r, b, g);
    for (auto& c : a)
        if (!modgb_contains(*gbb, c))
            return false;
    for (auto& c : b)
        if (!modgb_contains(*gba, c))
            return false;
    return true;
}

/* ---- ideal operations ---- */

template <class K>
struct ElementSequence {
    Ring<K> ring;
    std::vector<RElt<K>> elems;

    ElementSequence() = default;
    ElementSequence(const Ring<K>& r, std::vector<RElt<K>> es)
        : ring(r), elems(std::move(es))
    {
        if (elems.empty())
            throw std::invalid_argument("element sequence must be nonempty");
    }
    std::size_t size() const { return elems.size(); }

    /* a^i = (a_1^i, ..., a_n^i) */
    ElementSequence power(std::uint32_t i) const
    {
        std::vector<RElt<K>> es;
        for (auto& a : elems)
            es.push_back(rpow(a, i));
        return ElementSequence(ring, es);
    }
};

/* generators of (a^j) = (a_1^j,...,a_n^j) and of the j-th ordinary power
 * ideal (all degree-j products) */
template <class K>
std::vector<RElt<K>> sequence_power_gens(const ElementSequence<K>& seq,
                                         std::uint32_t j)
{
    std::vector<RElt<K>> out;
    for (auto& a : seq.elems)
        out.push_back(rpow(a, j));
    return out;
}

template <class K>
std::vector<RElt<K>> ideal_power_gens(const ElementSequence<K>& seq,
                                      std::uint32_t j)
{
    // all products of j generators with repetition
    std::vector<RElt<K>> out;
    std::vector<std::uint32_t> pick(j, 0);
    const std::size_t n = seq.size();
    for (;;) {
        RElt<K> prod = relt_const(seq.ring, 1);
        for (auto i : pick)
            prod = rmul(prod, seq.elems[i]);
        out.push_back(prod);
        // next multiset (non-decreasing tuples)
        std::size_t k = j;
        while (k > 0 && pick[k - 1] == n - 1)
            --k;
        if (k == 0)
            break;
        ++pick[k - 1];
        for (std::size_t t = k; t < j; ++t)
            pick[t] = pick[k - 1];
    }
    return out;
}

template <class K>
bool ideal_contains(const Ring<K>& r, const std::vector<RElt<K>>& gens,
                    const RElt<K>& f)
{
    Matrix<K> cols;
    for (auto& g : gens)
        cols.push_back(Column<K>{g});
    auto gb = module_gb(r, cols, 1);
    return modgb_contains(*gb, Column<K>{f});
}

/* radical membership via the Rabinowitsch trick: f in sqrt(ideal) iff
 * 1 in (quotient + ideal + (1 - t f)) in the ring with a fresh variable t */
template <class K>
bool radical_contains(const Ring<K>& r, const std::vector<RElt<K>>& gens,
                      const RElt<K>& f)
{
    if (f.is_zero())
        return true;
    std::string fresh = "t_";
    bool clash = true;
    while (clash) {
        clash = false;
        for (auto& v : r->vars)
            if (v == fresh) {
                fresh += "_";
                clash = true;
            }
    }
    std::vector<std::string> vars = r->vars;
    vars.push_back(fresh);
    const std::size_t n = r->nvars();
    auto extend = [&](const Poly<K>& p) {
        Poly<K> q;
        for (auto& t : p.t) {
            Monomial m(n + 1);
            for (std::size_t i = 0; i < n; ++i)
                m.e[i] = t.m.e[i];
            q.t.push_back({m, t.c});
        }
        return q;
    };
    std::vector<Poly<K>> egens;
    for (auto& q : r->quotient_gb)
        egens.push_back(extend(q));
    for (auto& g : gens)
        egens.push_back(extend(g.p));
    // 1 - t*f
    Monomial tm(n + 1);
    tm.e[n] = 1;
    Poly<K> tf = poly_mul_term(r->field, extend(f.p), tm, r->field.one());
    Poly<K> one = poly_const(r->field, n + 1, 1);
    egens.push_back(poly_sub(r->field, one, tf, r->ord));

    std::vector<FreeVec<K>> cols;
    for (auto& g : egens)
        cols.push_back(poly_to_vec(g, 0));
    auto gb = module_groebner(r->field, cols, n + 1, r->ord);
    for (auto& g : gb.gb)
        if (g.t.size() == 1 && g.t[0].m.is_one() && g.t[0].comp == 0)
            return true;
    return false;
}

template <class K>
struct RadicalVerdict {
    bool equal = false;
    std::string witness; // generator failing radical membership, if any
};

template <class K>
RadicalVerdict<K> radical_equal(const Ring<K>& r,
                                const std::vector<RElt<K>>& gens_a,
                                const std::vector<RElt<K>>& gens_b)
{
    for (auto& a : gens_a)
        if (!radical_contains(r, gens_b, a))
            return {false, rstr(a) + " not in radical of second ideal"};
    for (auto& b : gens_b)
        if (!radical_contains(r, gens_a, b))
            return {false, rstr(b) + " not in radical of first ideal"};
    return {true, ""};
}

/* ---- torsion submodule by annihilator-chain saturation ---- */

template <class K>
struct TorsionResult {
    FpModule<K> torsion;
    ModuleMap<K> inclusion; // into M
    std::uint32_t stabilization_level = 0;
};

/* (0 :_M I) for an ideal given by generators: kernel of M -> M^r,
 * m -> (g_i m) */
template <class K>
ModuleCalculus<K> annihilator_kernel(const FpModule<K>& m,
                                     const std::vector<RElt<K>>& gens)
{
    const Ring<K>& r = m.ring;
    const std::size_t rr = gens.size();
    // target = M^r with block relations
    FpModule<K> target;
    target.ring = r;
    target.gens = m.gens * rr;
    if (m.gen_degrees) {
        // degrees only consistent when all gens have degree shifts; the
        // annihilator computation itself is degree-agnostic, so drop grading
        target.gen_degrees = std::nullopt;
    }
    for (std::size_t b = 0; b < rr; ++b)
        for (auto& col : m.relations) {
            Column<K> c(target.gens, relt_zero(r));
            for (std::size_t i = 0; i < m.gens; ++i)
                c[b * m.gens + i] = col[i];
            target.relations.push_back(c);
        }
    FpModule<K> src = m;
    src.gen_degrees = std::nullopt;
    Matrix<K> mat;
    for (std::size_t j = 0; j < m.gens; ++j) {
        Column<K> c(target.gens, relt_zero(r));
        for (std::size_t b = 0; b < rr; ++b)
            c[b * m.gens + j] = gens[b];
        mat.push_back(c);
    }
    ModuleMap<K> f(src, target, mat, false);
    return module_calculus(f);
}

template <class K>
TorsionResult<K> torsion_submodule(const FpModule<K>& m,
                                   const ElementSequence<K>& seq,
                                   std::uint32_t cap = 32)
{
    const Ring<K>& r = m.ring;
    Matrix<K> prev; // generators (in M coordinates) of (0 : a^i)
    std::optional<ModuleCalculus<K>> prev_calc;
    for (std::uint32_t i = 1; i <= cap; ++i) {
        auto gens_i = ideal_power_gens(seq, i);
        auto calc = annihilator_kernel(m, gens_i);
        Matrix<K> cur = calc.kernel_inclusion.mat;
        if (i > 1) {
            Matrix<K> a = prev, b = cur;
            for (auto& c : m.relations) {
                a.push_back(c);
                b.push_back(c);
            }
            if (submodule_eq(r, a, b, m.gens)) {
                TorsionResult<K> out;
                out.torsion = prev_calc->kernel;
                out.inclusion = prev_calc->kernel_inclusion;
                out.stabilization_level = i - 1;
                return out;
            }
        }
        prev = cur;
        prev_calc = calc;
    }
    throw LevelCapError("torsion submodule: level cap " + std::to_string(cap) +
                        " exceeded before stabilization");
}

} // namespace adic

#endif
