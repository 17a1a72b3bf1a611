#include "doctest.h"

#include <random>

#include "eiscong/arith.hpp"

using namespace eiscong;

namespace {

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("factor examples") {
    auto f = factor(234);
    REQUIRE(f.factors.size() == 3);
    CHECK(f.factors[0] == std::make_pair<std::uint64_t, unsigned>(2, 1));
    CHECK(f.factors[1] == std::make_pair<std::uint64_t, unsigned>(3, 2));
    CHECK(f.factors[2] == std::make_pair<std::uint64_t, unsigned>(13, 1));
    CHECK(to_string(factor(725)) == "5^2*29");
    CHECK(to_string(factor(121)) == "11^2");
    CHECK(factor(1).factors.empty());
    CHECK_THROWS_AS(factor(0), DomainError);
}

TEST_CASE("factor reproduces n with certified primes up to 10^6") {
    for (std::uint64_t n = 1; n <= 1000000; ++n) {
        auto f = factor(n);
        std::uint64_t prod = 1, last = 0;
        for (auto& [p, e] : f.factors) {
            REQUIRE(p > last);
            last = p;
            for (unsigned i = 0; i < e; ++i) prod *= p;
        }
        REQUIRE(prod == n);
    }
    for (std::uint64_t n = 2; n <= 20000; ++n)
        for (auto p : factor(n).primes()) REQUIRE(trial_prime(p));
}

TEST_CASE("factor of large semiprimes") {
    std::uint64_t p = 1000000007ULL, q = 998244353ULL;
    auto f = factor(p * q);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == q);
    CHECK(f.factors[1].first == p);
    CHECK(is_prime(18446744073709551557ULL));
    CHECK_FALSE(is_prime(3215031751ULL));
}

TEST_CASE("valuation") {
    CHECK(valuation(234, 3) == 2);
    CHECK(valuation(234, 13) == 1);
    CHECK(valuation(121, 5) == 0);
    std::mt19937_64 rng(7);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = rng() % 1000000 + 1, p = primes[rng() % 6];
        unsigned v = valuation(n, p);
        std::uint64_t pv = 1;
        for (unsigned j = 0; j < v; ++j) pv *= p;
        CHECK(n % pv == 0);
        CHECK(n % (pv * p) != 0);
    }
}

TEST_CASE("euler_phi against brute force") {
    CHECK(euler_phi(11) == 10);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(29) == 28);
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        std::uint64_t c = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1) ++c;
        REQUIRE(euler_phi(n) == c);
    }
}

TEST_CASE("p-good levels") {
    CHECK(is_p_good(121, 11));
    CHECK(is_p_good(725, 5));
    CHECK(is_p_good(99, 3));
    CHECK_FALSE(is_p_good(175, 5));
    CHECK_FALSE(is_p_good(9 * 4, 3));
    CHECK(is_p_good(234, 3));
    CHECK_THROWS_AS(is_p_good(12, 2), DomainError);
    CHECK_THROWS_AS(is_p_good(81, 9), DomainError);
    for (std::uint64_t p : {3, 5, 7, 11}) {
        for (std::uint64_t q = 1; q < 500; ++q) {
            bool expect = trial_prime(q) && q != p && (q % p == 1 || q % p == p - 1);
            bool got = is_p_good(p * p * q, p);
            if (!trial_prime(q) && q != 1) continue;
            if (q == 1) {
                CHECK(got);
                continue;
            }
            CHECK_MESSAGE(got == expect, "p=" << p << " q=" << q);
        }
    }
}

TEST_CASE("sturm bound") {
    CHECK(sturm_bound(121) == 22);
    CHECK(sturm_bound(11) == 2);
    CHECK(sturm_bound(234) == 84);
    CHECK(sturm_bound(725) == 150);
}

TEST_CASE("prime divisors of big integers") {
    Int n = Int(605);
    Int big = 1;
    for (int i = 0; i < 10; ++i) big *= n;
    for (int i = 0; i < 5; ++i) big *= 11;
    auto ps = prime_divisors(big);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0] == 5);
    CHECK(ps[1] == 11);
    Int r = Int("1000000007") * Int("1000000009") * 4;
    auto qs = prime_divisors(r);
    REQUIRE(qs.size() == 3);
    CHECK(qs[2] == Int("1000000009"));
}
