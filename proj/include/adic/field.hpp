#ifndef ADIC_FIELD_HPP
#define ADIC_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

namespace adic {

/* Exact coefficient fields. Every scalar in the engine is either a GMP
 * rational or an element of a prime field; there is no floating point
 * anywhere. */

struct RationalField {
    using Elem = mpq_class;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long n) const { return Elem(n); }
    Elem add(const Elem& a, const Elem& b) const { return Elem(a + b); }
    Elem sub(const Elem& a, const Elem& b) const { return Elem(a - b); }
    Elem mul(const Elem& a, const Elem& b) const { return Elem(a * b); }
    Elem neg(const Elem& a) const { return Elem(-a); }
    Elem inv(const Elem& a) const
    {
        if (a == 0)
            throw std::domain_error("division by zero");
        return Elem(1 / a);
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    std::string str(const Elem& a) const { return a.get_str(); }
    std::string name() const { return "Q"; }
    bool operator==(const RationalField&) const { return true; }
};

struct PrimeField {
    using Elem = std::uint64_t;
    std::uint64_t p;

    explicit PrimeField(std::uint64_t prime = 2) : p(prime)
    {
        if (p < 2 || !is_prime(p))
            throw std::invalid_argument("prime field order must be prime");
    }

    static bool is_prime(std::uint64_t n)
    {
        if (n < 2)
            return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_int(long n) const
    {
        long r = n % (long)p;
        if (r < 0)
            r += (long)p;
        return (Elem)r;
    }
    Elem add(Elem a, Elem b) const { return (a + b) % p; }
    Elem sub(Elem a, Elem b) const { return (a + p - b % p) % p; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem neg(Elem a) const { return (p - a % p) % p; }
    Elem inv(Elem a) const
    {
        a %= p;
        if (a == 0)
            throw std::domain_error("division by zero");
        // extended Euclid
        std::int64_t t = 0, nt = 1, r = (std::int64_t)p, nr = (std::int64_t)a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0)
            t += (std::int64_t)p;
        return (Elem)t;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    bool is_zero(Elem a) const { return a % p == 0; }
    bool eq(Elem a, Elem b) const { return a % p == b % p; }
    std::string str(Elem a) const { return std::to_string(a % p); }
    std::string name() const { return "F" + std::to_string(p); }
    bool operator==(const PrimeField& o) const { return p == o.p; }
};

} // namespace adic

#endif
