#ifndef ADIC_POLY_HPP
#define ADIC_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "adic/field.hpp"

namespace adic {

/* Monomials are exponent vectors of fixed length (one slot per ring
 * variable). Total degree for the term order is the plain exponent sum;
 * the optional grading weights live in the ring and only enter through
 * weighted_degree. */

struct Monomial {
    std::vector<std::uint32_t> e;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e(nvars, 0) {}

    std::size_t nvars() const { return e.size(); }
    bool is_one() const
    {
        for (auto x : e)
            if (x)
                return false;
        return true;
    }
    std::uint64_t total_degree() const
    {
        std::uint64_t d = 0;
        for (auto x : e)
            d += x;
        return d;
    }
    std::int64_t weighted_degree(const std::vector<std::uint32_t>& w) const
    {
        std::int64_t d = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            d += (std::int64_t)e[i] * (std::int64_t)(w.empty() ? 1 : w[i]);
        return d;
    }
    bool operator==(const Monomial& o) const { return e == o.e; }
};

inline Monomial mon_mul(const Monomial& a, const Monomial& b)
{
    Monomial r(a.nvars());
    for (std::size_t i = 0; i < a.e.size(); ++i)
        r.e[i] = a.e[i] + b.e[i];
    return r;
}

inline bool mon_divides(const Monomial& a, const Monomial& b)
{
    // a | b
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i])
            return false;
    return true;
}

inline Monomial mon_div(const Monomial& b, const Monomial& a)
{
    Monomial r(a.nvars());
    for (std::size_t i = 0; i < a.e.size(); ++i)
        r.e[i] = b.e[i] - a.e[i];
    return r;
}

inline Monomial mon_lcm(const Monomial& a, const Monomial& b)
{
    Monomial r(a.nvars());
    for (std::size_t i = 0; i < a.e.size(); ++i)
        r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
}

enum class TermOrderKind { Grevlex, Lex };

/* Returns <0, 0, >0 like strcmp; grevlex is the engine default. */
inline int mon_cmp(const Monomial& a, const Monomial& b, TermOrderKind ord)
{
    if (ord == TermOrderKind::Lex) {
        for (std::size_t i = 0; i < a.e.size(); ++i) {
            if (a.e[i] != b.e[i])
                return a.e[i] > b.e[i] ? 1 : -1;
        }
        return 0;
    }
    std::uint64_t da = a.total_degree(), db = b.total_degree();
    if (da != db)
        return da > db ? 1 : -1;
    for (std::size_t i = a.e.size(); i-- > 0;) {
        if (a.e[i] != b.e[i])
            return a.e[i] < b.e[i] ? 1 : -1;
    }
    return 0;
}

/* Sparse polynomial: terms sorted strictly descending in the term order,
 * no zero coefficients. Kept canonical by construction. */
template <class K>
struct Poly {
    struct Term {
        Monomial m;
        typename K::Elem c;
    };
    std::vector<Term> t;

    bool is_zero() const { return t.empty(); }
    const Term& lead() const { return t.front(); }
};

template <class K>
Poly<K> poly_zero()
{
    return {};
}

template <class K>
Poly<K> poly_term(const K& k, const Monomial& m, const typename K::Elem& c)
{
    Poly<K> p;
    if (!k.is_zero(c))
        p.t.push_back({m, c});
    return p;
}

template <class K>
Poly<K> poly_const(const K& k, std::size_t nvars, long c)
{
    return poly_term(k, Monomial(nvars), k.from_int(c));
}

template <class K>
Poly<K> poly_add(const K& k, const Poly<K>& a, const Poly<K>& b, TermOrderKind ord)
{
    Poly<K> r;
    r.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        int c = mon_cmp(a.t[i].m, b.t[j].m, ord);
        if (c > 0)
            r.t.push_back(a.t[i++]);
        else if (c < 0)
            r.t.push_back(b.t[j++]);
        else {
            auto s = k.add(a.t[i].c, b.t[j].c);
            if (!k.is_zero(s))
                r.t.push_back({a.t[i].m, s});
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
Poly<K> poly_neg(const K& k, const Poly<K>& a)
{
    Poly<K> r = a;
    for (auto& tm : r.t)
        tm.c = k.neg(tm.c);
    return r;
}

template <class K>
Poly<K> poly_sub(const K& k, const Poly<K>& a, const Poly<K>& b, TermOrderKind ord)
{
    return poly_add(k, a, poly_neg(k, b), ord);
}

template <class K>
Poly<K> poly_scale(const K& k, const Poly<K>& a, const typename K::Elem& c)
{
    Poly<K> r;
    if (k.is_zero(c))
        return r;
    r.t.reserve(a.t.size());
    for (auto& tm : a.t)
        r.t.push_back({tm.m, k.mul(tm.c, c)});
    return r;
}

template <class K>
Poly<K> poly_mul_term(const K& k, const Poly<K>& a, const Monomial& m,
                      const typename K::Elem& c)
{
    Poly<K> r;
    if (k.is_zero(c))
        return r;
    r.t.reserve(a.t.size());
    for (auto& tm : a.t)
        r.t.push_back({mon_mul(tm.m, m), k.mul(tm.c, c)});
    return r;
}

template <class K>
Poly<K> poly_mul(const K& k, const Poly<K>& a, const Poly<K>& b, TermOrderKind ord)
{
    Poly<K> r;
    for (auto& tm : a.t)
        r = poly_add(k, r, poly_mul_term(k, b, tm.m, tm.c), ord);
    return r;
}

template <class K>
bool poly_eq(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    if (a.t.size() != b.t.size())
        return false;
    for (std::size_t i = 0; i < a.t.size(); ++i)
        if (!(a.t[i].m == b.t[i].m) || !k.eq(a.t[i].c, b.t[i].c))
            return false;
    return true;
}

/* Homogeneity w.r.t. grading weights; zero is homogeneous of any degree. */
template <class K>
bool poly_homogeneous(const Poly<K>& a, const std::vector<std::uint32_t>& w,
                      std::int64_t* deg_out = nullptr)
{
    if (a.t.empty()) {
        if (deg_out)
            *deg_out = 0;
        return true;
    }
    std::int64_t d = a.t[0].m.weighted_degree(w);
    for (auto& tm : a.t)
        if (tm.m.weighted_degree(w) != d)
            return false;
    if (deg_out)
        *deg_out = d;
    return true;
}

template <class K>
std::string poly_str(const K& k, const Poly<K>& a,
                     const std::vector<std::string>& vars)
{
    if (a.t.empty())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < a.t.size(); ++i) {
        const auto& tm = a.t[i];
        std::string cs = k.str(tm.c);
        if (i)
            s += cs.size() && cs[0] == '-' ? "" : "+";
        std::string ms;
        for (std::size_t v = 0; v < tm.m.e.size(); ++v) {
            if (!tm.m.e[v])
                continue;
            if (!ms.empty())
                ms += "*";
            ms += vars[v];
            if (tm.m.e[v] > 1)
                ms += "^" + std::to_string(tm.m.e[v]);
        }
        if (ms.empty())
            s += cs;
        else if (cs == "1")
            s += ms;
        else if (cs == "-1")
            s += "-" + ms;
        else
            s += cs + "*" + ms;
    }
    return s;
}

} // namespace adic

#endif
