#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/cyclotomic.hpp"

namespace eiscong {

// Generators of (Z/fZ)^x: smallest primitive root per odd prime power, -1 and 5 for 2^a (a >= 3),
// lifted by CRT and listed by increasing prime.
struct UnitGroupGenerator {
    std::uint64_t value;
    std::uint64_t order;
};
std::vector<UnitGroupGenerator> unit_group_generators(std::uint64_t f);

class DirichletCharacter {
public:
    DirichletCharacter();  // trivial character mod 1

    // exps[a] = e(a) for units a mod f (chi(a) = zeta_order^e(a)), -1 for non-units. The order is reduced.
    static DirichletCharacter from_table(std::uint64_t f, std::uint64_t order, std::vector<std::int64_t> exps);
    static DirichletCharacter trivial(std::uint64_t f);
    // Label "f.k.e1[.e2...]": chi(g_i) = zeta_k^{e_i} on unit_group_generators(f).
    static DirichletCharacter from_label(const std::string& label);

    std::uint64_t modulus() const { return f_; }
    std::uint64_t order() const { return k_; }
    std::optional<std::int64_t> exponent(std::int64_t n) const;
    CycElement value(std::int64_t n) const;
    std::vector<std::int64_t> generator_exponents() const;
    std::string label() const;

    bool is_trivial() const { return k_ == 1; }
    bool is_even() const;
    bool is_quadratic() const { return k_ == 2; }
    std::uint64_t conductor() const;
    bool is_primitive() const { return conductor() == f_; }
    DirichletCharacter primitive_part() const;

    DirichletCharacter pow(std::int64_t j) const;
    DirichletCharacter inverse() const { return pow(-1); }
    DirichletCharacter lift(std::uint64_t multiple) const;
    DirichletCharacter operator*(const DirichletCharacter& o) const;
    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.f_ == b.f_ && a.k_ == b.k_ && a.exps_ == b.exps_;
    }
    friend bool operator!=(const DirichletCharacter& a, const DirichletCharacter& b) { return !(a == b); }

private:
    std::uint64_t f_ = 1;
    std::uint64_t k_ = 1;
    std::vector<std::int64_t> exps_;
};

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t f);
std::vector<DirichletCharacter> primitive_characters(std::uint64_t f);

CycElement gauss_sum(const DirichletCharacter& chi);
CycElement bernoulli_B1(const DirichletCharacter& chi);
CycElement bernoulli_B2(const DirichletCharacter& chi);

enum class XSParity { None, Plus, Minus };
bool chi_in_XS(const DirichletCharacter& chi, std::uint64_t N);
XSParity xs_parity(const DirichletCharacter& chi, std::uint64_t N);

}  // namespace eiscong
