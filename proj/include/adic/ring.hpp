#ifndef ADIC_RING_HPP
#define ADIC_RING_HPP

#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adic/groebner.hpp"

namespace adic {

struct ZeroRingError : std::runtime_error {
    ZeroRingError() : std::runtime_error("zero ring: 1 lies in the quotient ideal") {}
};
struct GradingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LevelCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int l = 0, int c = 0)
        : std::runtime_error(msg), line(l), col(c)
    {
    }
};

/* A ring presentation: quotient of a multivariate polynomial ring over an
 * exact field, with a fixed term order and an optional positive grading.
 * The reduced Groebner basis of the quotient ideal is computed once at
 * construction; elements are stored as unique normal forms against it. */

template <class K>
struct RingData {
    K field;
    std::vector<std::string> vars;
    std::vector<std::uint32_t> weights; // empty = ungraded
    TermOrderKind ord = TermOrderKind::Grevlex;
    std::vector<Poly<K>> quotient_input;
    std::vector<Poly<K>> quotient_gb; // reduced, monic

    std::size_t nvars() const { return vars.size(); }
    bool graded() const { return !weights.empty(); }
    std::string key; // canonical identity for caching
};

template <class K>
using Ring = std::shared_ptr<const RingData<K>>;

/* canonical serializations (cache keys, determinism checks) */
template <class K>
std::string poly_key(const K& k, const Poly<K>& p)
{
    std::ostringstream os;
    for (auto& t : p.t) {
        os << k.str(t.c) << "[";
        for (auto e : t.m.e)
            os << e << ",";
        os << "]";
    }
    return os.str();
}

template <class K>
std::string ring_key(const RingData<K>& r)
{
    std::ostringstream os;
    os << r.field.name() << "|";
    for (auto& v : r.vars)
        os << v << ",";
    os << "|";
    for (auto w : r.weights)
        os << w << ",";
    os << "|" << (r.ord == TermOrderKind::Grevlex ? "grevlex" : "lex") << "|";
    for (auto& q : r.quotient_gb)
        os << poly_key(r.field, q) << ";";
    return os.str();
}

inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

template <class K>
FreeVec<K> poly_to_vec(const Poly<K>& p, std::uint32_t comp)
{
    FreeVec<K> v;
    v.t.reserve(p.t.size());
    for (auto& t : p.t)
        v.t.push_back({comp, t.m, t.c});
    return v;
}

template <class K>
Ring<K> make_ring(const K& field, const std::vector<std::string>& vars,
                  const std::vector<std::uint32_t>& weights,
                  const std::vector<Poly<K>>& quotient,
                  TermOrderKind ord = TermOrderKind::Grevlex)
{
    auto r = std::make_shared<RingData<K>>();
    r->field = field;
    r->vars = vars;
    r->weights = weights;
    r->ord = ord;
    r->quotient_input = quotient;
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw std::invalid_argument("duplicate variable name " + vars[i]);
    if (!weights.empty()) {
        if (weights.size() != vars.size())
            throw GradingError("weight count does not match variable count");
        for (auto w : weights)
            if (w == 0)
                throw GradingError("grading weights must be positive");
        for (auto& q : quotient)
            if (!poly_homogeneous(q, weights))
                throw GradingError("quotient generator is not homogeneous: " +
                                   poly_str(field, q, vars));
    }
    std::vector<FreeVec<K>> cols;
    for (auto& q : quotient)
        cols.push_back(poly_to_vec(q, 0));
    auto gb = module_groebner(field, cols, vars.size(), ord);
    for (auto& g : gb.gb) {
        Poly<K> p;
        for (auto& t : g.t)
            p.t.push_back({t.m, t.c});
        if (p.t.size() == 1 && p.t[0].m.is_one())
            throw ZeroRingError();
        r->quotient_gb.push_back(p);
    }
    r->key = ring_key(*r);
    return r;
}

template <class K>
Ring<K> make_poly_ring(const K& field, const std::vector<std::string>& vars,
                       TermOrderKind ord = TermOrderKind::Grevlex)
{
    return make_ring(field, vars, {}, {}, ord);
}

/* normal form modulo the quotient ideal */
template <class K>
Poly<K> ring_reduce(const Ring<K>& r, const Poly<K>& p)
{
    if (r->quotient_gb.empty())
        return p;
    std::vector<FreeVec<K>> basis;
    for (auto& q : r->quotient_gb)
        basis.push_back(poly_to_vec(q, 0));
    auto d = vec_reduce(r->field, poly_to_vec(p, 0), basis, r->ord);
    Poly<K> out;
    for (auto& t : d.rem.t)
        out.t.push_back({t.m, t.c});
    return out;
}

/* Ring elements: polynomial in unique normal form plus owning ring. */
template <class K>
struct RElt {
    Ring<K> ring;
    Poly<K> p; // always reduced

    RElt() = default;
    RElt(const Ring<K>& r, const Poly<K>& raw) : ring(r), p(ring_reduce(r, raw)) {}
    bool is_zero() const { return p.is_zero(); }
};

template <class K>
RElt<K> relt_zero(const Ring<K>& r)
{
    return RElt<K>{r, Poly<K>{}};
}
template <class K>
RElt<K> relt_const(const Ring<K>& r, long c)
{
    return RElt<K>(r, poly_const(r->field, r->nvars(), c));
}
template <class K>
RElt<K> relt_var(const Ring<K>& r, std::size_t i)
{
    Monomial m(r->nvars());
    m.e[i] = 1;
    return RElt<K>(r, poly_term(r->field, m, r->field.one()));
}
template <class K>
RElt<K> radd(const RElt<K>& a, const RElt<K>& b)
{
    return RElt<K>(a.ring, poly_add(a.ring->field, a.p, b.p, a.ring->ord));
}
template <class K>
RElt<K> rsub(const RElt<K>& a, const RElt<K>& b)
{
    return RElt<K>(a.ring, poly_sub(a.ring->field, a.p, b.p, a.ring->ord));
}
template <class K>
RElt<K> rmul(const RElt<K>& a, const RElt<K>& b)
{
    return RElt<K>(a.ring, poly_mul(a.ring->field, a.p, b.p, a.ring->ord));
}
template <class K>
RElt<K> rneg(const RElt<K>& a)
{
    return RElt<K>{a.ring, poly_neg(a.ring->field, a.p)};
}
template <class K>
RElt<K> rscale(const RElt<K>& a, long c)
{
    return RElt<K>{a.ring, poly_scale(a.ring->field, a.p, a.ring->field.from_int(c))};
}
template <class K>
RElt<K> rpow(const RElt<K>& a, std::uint32_t n)
{
    RElt<K> r = relt_const(a.ring, 1);
    for (std::uint32_t i = 0; i < n; ++i)
        r = rmul(r, a);
    return r;
}
template <class K>
bool req(const RElt<K>& a, const RElt<K>& b)
{
    return poly_eq(a.ring->field, a.p, b.p);
}
template <class K>
std::string rstr(const RElt<K>& a)
{
    return poly_str(a.ring->field, a.p, a.ring->vars);
}

/* ---- polynomial surface syntax: integers, variables, + - * ^, parens ---- */

template <class K>
class PolyParser {
public:
    PolyParser(const K& field, const std::vector<std::string>& vars,
               const std::string& src, TermOrderKind ord)
        : k_(field), vars_(vars), s_(src), ord_(ord)
    {
    }

    Poly<K> parse()
    {
        auto p = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        return p;
    }

private:
    const K& k_;
    const std::vector<std::string>& vars_;
    std::string s_;
    std::size_t pos_ = 0;
    TermOrderKind ord_;

    [[noreturn]] void fail(const std::string& msg)
    {
        throw ParseError("polynomial syntax error at offset " +
                         std::to_string(pos_) + ": " + msg + " in '" + s_ + "'");
    }
    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_]))
            ++pos_;
    }
    bool eat(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Poly<K> expr()
    {
        Poly<K> r;
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        r = term();
        if (neg)
            r = poly_neg(k_, r);
        for (;;) {
            if (eat('+'))
                r = poly_add(k_, r, term(), ord_);
            else if (eat('-'))
                r = poly_sub(k_, r, term(), ord_);
            else
                break;
        }
        return r;
    }
    Poly<K> term()
    {
        Poly<K> r = factor();
        while (eat('*'))
            r = poly_mul(k_, r, factor(), ord_);
        return r;
    }
    Poly<K> factor()
    {
        Poly<K> b = base();
        if (eat('^')) {
            skip_ws();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
                ++pos_;
            if (st == pos_)
                fail("expected exponent");
            unsigned long e = std::stoul(s_.substr(st, pos_ - st));
            Poly<K> r = poly_const(k_, b.t.empty() ? vars_.size() : b.t[0].m.nvars(), 1);
            if (b.is_zero())
                r = e == 0 ? r : Poly<K>{};
            for (unsigned long i = 0; i < e; ++i)
                r = poly_mul(k_, r, b, ord_);
            return r;
        }
        return b;
    }
    Poly<K> base()
    {
        skip_ws();
        if (eat('(')) {
            auto p = expr();
            if (!eat(')'))
                fail("expected ')'");
            return p;
        }
        if (eat('-'))
            return poly_neg(k_, factor());
        if (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
                ++pos_;
            long v = std::stol(s_.substr(st, pos_ - st));
            return poly_const(k_, vars_.size(), v);
        }
        if (pos_ < s_.size() &&
            (std::isalpha((unsigned char)s_[pos_]) || s_[pos_] == '_')) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) ||
                                        s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(st, pos_ - st);
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) {
                    Monomial m(vars_.size());
                    m.e[i] = 1;
                    return poly_term(k_, m, k_.one());
                }
            fail("unknown variable '" + name + "'");
        }
        fail("expected polynomial atom");
    }
};

template <class K>
Poly<K> parse_poly_raw(const K& field, const std::vector<std::string>& vars,
                       const std::string& src,
                       TermOrderKind ord = TermOrderKind::Grevlex)
{
    return PolyParser<K>(field, vars, src, ord).parse();
}

template <class K>
RElt<K> parse_elt(const Ring<K>& r, const std::string& src)
{
    return RElt<K>(r, parse_poly_raw(r->field, r->vars, src, r->ord));
}

/* ring homomorphism A -> B determined by images of the variables */
template <class K>
struct RingMap {
    Ring<K> source;
    Ring<K> target;
    std::vector<Poly<K>> images; // one per source variable, over target

    RingMap(const Ring<K>& a, const Ring<K>& b, std::vector<Poly<K>> imgs)
        : source(a), target(b), images(std::move(imgs))
    {
        if (images.size() != a->nvars())
            throw std::invalid_argument("ring map: one image per variable");
        // well-definedness: quotient generators must map into the target ideal
        for (auto& q : a->quotient_gb) {
            auto img = apply_raw(q);
            if (!ring_reduce(b, img).is_zero())
                throw std::domain_error(
                    "ring map does not kill the quotient ideal");
        }
    }

    Poly<K> apply_raw(const Poly<K>& p) const
    {
        const K& k = source->field;
        Poly<K> out;
        for (auto& t : p.t) {
            Poly<K> term = poly_const(k, target->nvars(), 0);
            term = poly_term(k, Monomial(target->nvars()), t.c);
            for (std::size_t v = 0; v < source->nvars(); ++v)
                for (std::uint32_t e = 0; e < t.m.e[v]; ++e)
                    term = poly_mul(k, term, images[v], target->ord);
            out = poly_add(k, out, term, target->ord);
        }
        return out;
    }
};

/* ---- quotient-aware module Groebner layer with shared cache ---- */

/* Matrices are stored column-major: mat[j] is column j, a vector of g ring
 * elements. Columns of the relation matrix of an FpModule, the images of
 * generators under a map, etc. */
template <class K>
using Column = std::vector<RElt<K>>;
template <class K>
using Matrix = std::vector<Column<K>>; // list of columns

template <class K>
FreeVec<K> column_to_vec(const Column<K>& col)
{
    FreeVec<K> v;
    std::vector<typename FreeVec<K>::Term> terms;
    for (std::uint32_t i = 0; i < col.size(); ++i)
        for (auto& t : col[i].p.t)
            terms.push_back({i, t.m, t.c});
    // already grouped by component ascending; within a component the poly
    // order is descending, which matches the module order
    v.t = std::move(terms);
    return v;
}

template <class K>
Column<K> vec_to_column(const Ring<K>& r, const FreeVec<K>& v, std::size_t g)
{
    std::vector<Poly<K>> ps(g);
    for (auto& t : v.t)
        ps[t.comp] = poly_add(r->field, ps[t.comp],
                              poly_term(r->field, t.m, t.c), r->ord);
    Column<K> col;
    col.reserve(g);
    for (auto& p : ps)
        col.push_back(RElt<K>(r, p));
    return col;
}

/* Submodule-of-free-module context over the quotient ring: the Groebner
 * data for span(columns) + quotient relations on every coordinate. */
template <class K>
struct ModGB {
    Ring<K> ring;
    std::size_t g = 0;     // rank of ambient free module
    std::size_t ncols = 0; // original columns
    GroebnerResult<K> raw; // over inputs = columns ++ quotient*e_i
    std::vector<std::vector<Poly<K>>> syzygies; // projected to ncols coords
};

template <class K>
std::string matrix_key(const Ring<K>& r, const Matrix<K>& cols, std::size_t g)
{
    std::ostringstream os;
    os << r->key << "#g" << g << "#";
    for (auto& c : cols) {
        for (auto& e : c)
            os << poly_key(r->field, e.p) << "/";
        os << ";";
    }
    return os.str();
}

namespace detail {
struct GbCache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<void>> entries;
    static GbCache& instance()
    {
        static GbCache c;
        return c;
    }
};
} // namespace detail

/* normalize a generating set of a submodule of A^g: monic leads, duplicates
 * removed, generators redundant within the span of the others dropped
 * (scanning from the back keeps the earliest generators). Raw Groebner
 * runs only; no recursion through the cache. */
template <class K>
Matrix<K> minimalize_columns(const Ring<K>& r, const Matrix<K>& cols,
                             std::size_t g)
{
    const K& k = r->field;
    std::vector<FreeVec<K>> vecs;
    Matrix<K> work;
    std::vector<std::string> keys;
    for (auto& c : cols) {
        auto v = column_to_vec(c);
        if (v.is_zero())
            continue;
        auto inv = k.inv(v.lead().c);
        Column<K> nc;
        for (auto& e : c)
            nc.push_back(RElt<K>{r, poly_scale(k, e.p, inv)});
        std::ostringstream os;
        for (auto& e : nc)
            os << poly_key(k, e.p) << "/";
        bool dup = false;
        for (auto& kk : keys)
            if (kk == os.str())
                dup = true;
        if (dup)
            continue;
        keys.push_back(os.str());
        work.push_back(nc);
    }
    std::vector<FreeVec<K>> quot;
    for (std::uint32_t i = 0; i < g; ++i)
        for (auto& q : r->quotient_gb) {
            FreeVec<K> v;
            for (auto& t : q.t)
                v.t.push_back({i, t.m, t.c});
            quot.push_back(v);
        }
    std::vector<char> keep(work.size(), 1);
    for (std::size_t i = work.size(); i-- > 0;) {
        std::vector<FreeVec<K>> basis = quot;
        for (std::size_t j = 0; j < work.size(); ++j)
            if (j != i && keep[j])
                basis.push_back(column_to_vec(work[j]));
        auto gb = module_groebner(k, basis, r->nvars(), r->ord);
        auto d = vec_reduce(k, column_to_vec(work[i]), gb.gb, r->ord);
        if (d.rem.is_zero())
            keep[i] = 0;
    }
    Matrix<K> out;
    for (std::size_t i = 0; i < work.size(); ++i)
        if (keep[i])
            out.push_back(work[i]);
    return out;
}

template <class K>
std::shared_ptr<const ModGB<K>> module_gb(const Ring<K>& r,
                                          const Matrix<K>& cols, std::size_t g)
{
    auto key = matrix_key(r, cols, g);
    auto& cache = detail::GbCache::instance();
    {
        std::lock_guard<std::mutex> lock(cache.mu);
        auto it = cache.entries.find(key);
        if (it != cache.entries.end())
            return std::static_pointer_cast<const ModGB<K>>(it->second);
    }
    auto res = std::make_shared<ModGB<K>>();
    res->ring = r;
    res->g = g;
    res->ncols = cols.size();
    std::vector<FreeVec<K>> inputs;
    for (auto& c : cols) {
        if (c.size() != g)
            throw std::invalid_argument("column height mismatch");
        inputs.push_back(column_to_vec(c));
    }
    for (std::uint32_t i = 0; i < g; ++i)
        for (auto& q : r->quotient_gb) {
            FreeVec<K> v;
            for (auto& t : q.t)
                v.t.push_back({i, t.m, t.c});
            inputs.push_back(v);
        }
    res->raw = module_groebner(r->field, inputs, r->nvars(), r->ord);
    // syzygies of the original columns: project away quotient coordinates,
    // then normalize and minimalize the generating set
    if (res->ncols) {
        Matrix<K> proj_cols;
        for (auto& sy : res->raw.syz) {
            Column<K> proj;
            bool nz = false;
            for (std::size_t j = 0; j < res->ncols; ++j) {
                proj.push_back(RElt<K>(r, sy[j]));
                if (!proj.back().is_zero())
                    nz = true;
            }
            if (nz)
                proj_cols.push_back(proj);
        }
        for (auto& c : minimalize_columns(r, proj_cols, res->ncols)) {
            std::vector<Poly<K>> sy;
            for (auto& e : c)
                sy.push_back(e.p);
            res->syzygies.push_back(sy);
        }
    }
    {
        std::lock_guard<std::mutex> lock(cache.mu);
        cache.entries.emplace(key, res);
    }
    return res;
}

/* normal form of the column against the submodule (canonical representative) */
template <class K>
Column<K> modgb_normal_form(const ModGB<K>& m, const Column<K>& col)
{
    auto d = vec_reduce(m.ring->field, column_to_vec(col), m.raw.gb,
                        m.ring->ord);
    Column<K> out(m.g, relt_zero(m.ring));
    for (auto& t : d.rem.t) {
        out[t.comp].ring = m.ring;
        out[t.comp].p = poly_add(m.ring->field, out[t.comp].p,
                                 poly_term(m.ring->field, t.m, t.c),
                                 m.ring->ord);
    }
    return out;
}

template <class K>
bool modgb_contains(const ModGB<K>& m, const Column<K>& col)
{
    auto nf = modgb_normal_form(m, col);
    for (auto& e : nf)
        if (!e.is_zero())
            return false;
    return true;
}

/* Express col as an A-combination of the original columns (throws if the
 * column is not in the span). */
template <class K>
std::vector<RElt<K>> modgb_lift(const ModGB<K>& m, const Column<K>& col)
{
    auto d = vec_reduce(m.ring->field, column_to_vec(col), m.raw.gb,
                        m.ring->ord);
    if (!d.rem.is_zero())
        throw std::domain_error("lift: column not in submodule");
    std::vector<Poly<K>> coeff(m.ncols);
    for (std::size_t gidx = 0; gidx < m.raw.gb.size(); ++gidx) {
        if (d.quot[gidx].is_zero())
            continue;
        for (std::size_t j = 0; j < m.ncols; ++j)
            coeff[j] = poly_add(
                m.ring->field, coeff[j],
                poly_mul(m.ring->field, d.quot[gidx], m.raw.reps[gidx][j],
                         m.ring->ord),
                m.ring->ord);
    }
    std::vector<RElt<K>> out;
    for (auto& p : coeff)
        out.push_back(RElt<K>(m.ring, p));
    return out;
}

} // namespace adic

#endif
