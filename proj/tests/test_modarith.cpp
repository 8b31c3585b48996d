#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "chitwist/modarith.hpp"

using namespace chitwist;

namespace {

// Independent oracle: find the inverse by scanning all residues.
i64 inverse_by_search(i64 a, i64 m) {
    for (i64 x = 0; x < m; ++x)
        if (mod_mul(a, x, m) == 1) return x;
    return -1;
}

} // namespace

TEST_CASE("mod_inverse on pinned cases") {
    CHECK(mod_inverse(1, 7).value == 1);
    CHECK(mod_inverse(3, 7).value == inverse_by_search(3, 7));
    CHECK(mod_inverse(3, 7).value == 5);
    CHECK_THROWS_AS(mod_inverse(2, 4), NotInvertible);
}

TEST_CASE("mod_inverse exhaustive up to 10^4") {
    for (i64 m = 1; m <= 10000; ++m) {
        for (i64 a = 1; a < m; ++a) {
            if (std::gcd(a, m) != 1) continue;
            i64 x = mod_inverse(a, m).value;
            REQUIRE(mod_mul(a, x, m) == 1 % m);
        }
    }
}

TEST_CASE("crt_combine pinned cases") {
    CHECK(crt_combine({0, 3}, {0, 5}) == Residue{0, 15});

    // Oracle: scan residues mod 15 for the unique solution.
    i64 expect = -1;
    for (i64 x = 0; x < 15; ++x)
        if (x % 3 == 2 && x % 5 == 3) expect = x;
    REQUIRE(expect == 8);
    CHECK(crt_combine({2, 3}, {3, 5}) == Residue{8, 15});

    CHECK_THROWS_AS(crt_combine({1, 4}, {1, 6}), ModuliNotCoprime);
}

TEST_CASE("crt_combine is a bijection for all coprime pairs with product <= 10^4") {
    for (i64 m1 = 1; m1 <= 100; ++m1) {
        for (i64 m2 = m1; m1 * m2 <= 10000; ++m2) {
            if (std::gcd(m1, m2) != 1) continue;
            std::vector<char> seen(static_cast<size_t>(m1 * m2), 0);
            for (i64 r1 = 0; r1 < m1; ++r1) {
                for (i64 r2 = 0; r2 < m2; ++r2) {
                    Residue c = crt_combine({r1, m1}, {r2, m2});
                    REQUIRE(c.modulus == m1 * m2);
                    REQUIRE(c.value % m1 == r1);
                    REQUIRE(c.value % m2 == r2);
                    REQUIRE(!seen[static_cast<size_t>(c.value)]);
                    seen[static_cast<size_t>(c.value)] = 1;
                }
            }
        }
    }
}

TEST_CASE("primitive_root pinned cases") {
    // Oracle for (3,1): order of 2 mod 3 is 2 = phi(3).
    CHECK(mod_pow(2, 1, 3) != 1);
    CHECK(mod_pow(2, 2, 3) == 1);
    CHECK(primitive_root(3, 1) == 2);

    // Oracle for (5,2): 2 has order 20 mod 25, checked by brute force.
    i64 ord = 1, x = 2;
    while (x != 1) {
        x = mod_mul(x, 2, 25);
        ++ord;
    }
    REQUIRE(ord == 20);
    CHECK(primitive_root(5, 2) == 2);

    CHECK_THROWS_AS(primitive_root(2, 3), UnsupportedModulus);
}

TEST_CASE("primitive_root has exact order phi(p^r)") {
    for (i64 p : {3, 5, 7, 11, 13, 101}) {
        for (i64 r = 1; r <= 3; ++r) {
            if (ipow(p, r) > 100000) continue;
            i64 m = ipow(p, r);
            i64 phi = phi_prime_power(p, r);
            i64 g = primitive_root(p, r);
            REQUIRE(multiplicative_order(g, m, phi) == phi);
            // No proper divisor of phi is an order: factor phi and test.
            for (i64 q : prime_factors(phi)) REQUIRE(mod_pow(g, phi / q, m) != 1);
        }
    }
}
