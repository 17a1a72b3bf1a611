#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace eiscong {

using Int = mpz_class;
using Rational = mpq_class;

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Factorization {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;

    std::vector<std::uint64_t> primes() const;
    unsigned exponent(std::uint64_t p) const;
};

bool is_prime(std::uint64_t n);
Factorization factor(std::uint64_t n);
unsigned valuation(std::uint64_t n, std::uint64_t p);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
bool is_squarefree(std::uint64_t n);
bool is_p_good(std::uint64_t N, std::uint64_t p);
std::uint64_t sturm_bound(std::uint64_t N);

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u(std::uint64_t a, std::uint64_t b);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

// Prime divisors of |n|, n != 0.
std::vector<Int> prime_divisors(const Int& n);

std::string to_string(const Factorization& f);

}  // namespace eiscong
