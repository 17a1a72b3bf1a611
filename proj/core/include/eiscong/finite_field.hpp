#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eiscong/cyclotomic.hpp"

namespace eiscong {

class UnsupportedPrime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexicographically smallest monic irreducible polynomial of degree r over F_q, ascending coefficients.
std::vector<std::uint64_t> smallest_irreducible(std::uint64_t q, unsigned r);

// F_{q^r} = F_q[x]/(g) with g = smallest_irreducible(q, r).
class FiniteField {
public:
    using Elem = std::vector<std::uint64_t>;

    static std::shared_ptr<const FiniteField> get(std::uint64_t q, unsigned r);
    FiniteField(std::uint64_t q, unsigned r);

    std::uint64_t q() const { return q_; }
    unsigned r() const { return r_; }
    Int size() const;
    const std::vector<std::uint64_t>& modulus() const { return g_; }

    Elem zero() const { return Elem(r_, 0); }
    Elem one() const;
    Elem from_int(const Int& v) const;
    Elem from_rational(const Rational& v) const;
    Elem generator() const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, const Int& e) const;
    Elem inv(const Elem& a) const;
    Elem frobenius(const Elem& a) const { return pow(a, Int(static_cast<unsigned long>(q_))); }
    bool is_zero(const Elem& a) const;
    // Degree over F_q of the subfield generated by a.
    unsigned degree_of(const Elem& a) const;
    bool in_prime_field(const Elem& a) const { return degree_of(a) == 1; }
    std::string to_string(const Elem& a) const;

    // Element with base-q digits of idx as coefficients; used for enumeration and ordering.
    Elem element_at(std::uint64_t idx) const;
    static bool less(const Elem& a, const Elem& b);

private:
    std::uint64_t q_;
    unsigned r_;
    std::vector<std::uint64_t> g_;
};

using FFPtr = std::shared_ptr<const FiniteField>;

// Distinct roots in F_{q^r} of an integer polynomial (ascending coefficients), in canonical order.
std::vector<FiniteField::Elem> finite_field_roots(const std::vector<Int>& poly, std::uint64_t q, unsigned r);
std::vector<FiniteField::Elem> finite_field_roots(const std::vector<Int>& poly, const FFPtr& F);

// Degrees of the distinct irreducible factors of poly mod q.
std::vector<unsigned> factor_degrees_mod(const std::vector<Int>& poly, std::uint64_t q);

struct Embedding {
    FFPtr field;
    std::uint64_t m;              // cyclotomic side: image of zeta_m
    FiniteField::Elem zeta;
    std::vector<Int> g;           // number field side: image of a root of g
    FiniteField::Elem root;

    unsigned residue_degree() const { return field->r(); }
    FiniteField::Elem reduce(const CycElement& x) const;
    FiniteField::Elem reduce_poly(const std::vector<Rational>& coeffs) const;
};

// One embedding pair per Frobenius orbit, over every residue degree a prime above q can have.
std::vector<Embedding> reduction_embeddings(std::uint64_t m, const std::vector<Int>& g, std::uint64_t q);

}  // namespace eiscong
