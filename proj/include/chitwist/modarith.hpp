#pragma once

/**
 * @file modarith.hpp
 * @brief Exact modular arithmetic on 64-bit moduli.
 *
 * All intermediate products go through __int128, which keeps every
 * operation exact for moduli up to 2^40 (the largest this library ever
 * uses). Even moduli of the form 2^r are rejected where a primitive
 * root is required; the rest of the library only deals with odd prime
 * powers and products of two odd primes.
 */

#include <cstdint>
#include <numeric>
#include <vector>

#include "chitwist/errors.hpp"

namespace chitwist {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// A residue class value mod m, kept normalized to [0, m).
struct Residue {
    i64 value = 0;
    i64 modulus = 1;

    friend bool operator==(const Residue&, const Residue&) = default;
};

inline i64 mod_reduce(i128 a, i64 m) {
    i64 r = static_cast<i64>(a % m);
    return r < 0 ? r + m : r;
}

inline i64 mod_mul(i64 a, i64 b, i64 m) {
    return mod_reduce(static_cast<i128>(a) * b, m);
}

inline i64 mod_pow(i64 base, i64 exp, i64 m) {
    i64 result = 1 % m;
    base = mod_reduce(base, m);
    while (exp > 0) {
        if (exp & 1) result = mod_mul(result, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Extended gcd: returns g = gcd(a, b) and x, y with a*x + b*y = g.
inline i64 extended_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i64 x1 = 0, y1 = 0;
    i64 g = extended_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

/// Multiplicative inverse of a mod m. Throws NotInvertible if gcd(a, m) > 1.
inline Residue mod_inverse(i64 a, i64 m) {
    if (m < 1) throw PreconditionViolated("mod_inverse: modulus must be >= 1");
    if (m == 1) return {0, 1};
    a = mod_reduce(a, m);
    i64 x = 0, y = 0;
    i64 g = extended_gcd(a, m, x, y);
    if (g != 1) throw NotInvertible("mod_inverse: gcd(a, m) > 1");
    return {mod_reduce(x, m), m};
}

/// Combine r1 mod m1 and r2 mod m2 into the unique residue mod m1*m2.
inline Residue crt_combine(const Residue& r1, const Residue& r2) {
    i64 m1 = r1.modulus, m2 = r2.modulus;
    if (std::gcd(m1, m2) != 1)
        throw ModuliNotCoprime("crt_combine: moduli share a factor");
    // x = r1 + m1 * t with t = (r2 - r1) / m1 (mod m2)
    i64 m1_inv = mod_inverse(m1 % m2, m2).value;
    i64 t = mod_mul(mod_reduce(static_cast<i128>(r2.value) - r1.value, m2), m1_inv, m2);
    i128 x = static_cast<i128>(r1.value) + static_cast<i128>(m1) * t;
    return {static_cast<i64>(x), m1 * m2};
}

/// Prime factorization by trial division (n fits well inside 2^40 here).
inline std::vector<i64> prime_factors(i64 n) {
    std::vector<i64> out;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline i64 ipow(i64 base, i64 exp) {
    i64 r = 1;
    while (exp-- > 0) {
        i128 next = static_cast<i128>(r) * base;
        if (next > (static_cast<i128>(1) << 62)) throw SizeLimit("ipow: overflow");
        r = static_cast<i64>(next);
    }
    return r;
}

/// Euler phi of p^r for p prime.
inline i64 phi_prime_power(i64 p, i64 r) {
    return ipow(p, r - 1) * (p - 1);
}

/// Multiplicative order of g mod m, given phi = |(Z/m)^x|.
/// Returns phi iff g generates the full unit group.
inline i64 multiplicative_order(i64 g, i64 m, i64 phi) {
    i64 order = phi;
    for (i64 q : prime_factors(phi)) {
        while (order % q == 0 && mod_pow(g, order / q, m) == 1) order /= q;
    }
    return order;
}

/**
 * Smallest generator of the cyclic group (Z/p^r Z)^x for odd prime p.
 * p = 2 is rejected: the unit group mod 2^r (r >= 3) is not cyclic and
 * nothing downstream needs it.
 */
inline i64 primitive_root(i64 p, i64 r) {
    if (p == 2) throw UnsupportedModulus("primitive_root: p = 2 not supported");
    if (r < 1 || !is_prime(p))
        throw PreconditionViolated("primitive_root: need odd prime p, r >= 1");
    i64 m = ipow(p, r);
    i64 phi = phi_prime_power(p, r);
    for (i64 g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g, m, phi) == phi) return g;
    }
    throw PreconditionViolated("primitive_root: none found (non-prime p?)");
}

} // namespace chitwist
