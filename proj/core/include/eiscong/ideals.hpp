#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eiscong/cusps.hpp"
#include "eiscong/finite_field.hpp"
#include "eiscong/lattice.hpp"

namespace eiscong {

class UnsupportedCharacteristic : public DomainError {
public:
    using DomainError::DomainError;
};

// |Z[zeta_f, phi] / Num(beta~)|.
Int cuspidal_order(const EisensteinParams& params);

std::set<std::uint64_t> s1_set(std::uint64_t N);
std::set<std::uint64_t> s2_set(std::uint64_t N, std::uint64_t p);

struct CandidateReport {
    std::uint64_t N = 0, p = 0;
    std::set<std::uint64_t> S1, S2, all;
    // prime -> sources among "6p", "S1", "S2"
    std::map<std::uint64_t, std::vector<std::string>> provenance;

    std::string to_string() const;  // "{2, 3, 5, 7}"
    std::string to_json() const;
};

CandidateReport candidate_characteristics(std::uint64_t N, std::uint64_t p);

// Reduction of phi modulo a prime of Z[zeta_k] above l: zeta_k -> zeta, an element of order k' (prime-to-l part of k).
struct ResidualCharacter {
    DirichletCharacter phi;
    std::uint64_t l = 0;
    std::uint64_t order = 1;  // k'
    FFPtr field;
    FiniteField::Elem zeta;

    static ResidualCharacter make(const DirichletCharacter& phi, std::uint64_t l);
    static ResidualCharacter make(const DirichletCharacter& phi, const FFPtr& F, const FiniteField::Elem& zeta_k);

    unsigned residue_degree() const;
    FiniteField::Elem value(std::int64_t n) const;
    FiniteField::Elem inverse_value(std::int64_t n) const;
};

struct UGenerator {
    std::uint64_t prime = 0;
    std::optional<FiniteField::Elem> value;  // none for U_p, p | f
    std::string text;
};

struct TGenerator {
    std::string variable;
    std::vector<std::uint64_t> residues;
    unsigned degree = 1;
    // Minimal polynomial over F_l: coefficients[i][j] multiplies T^i var^j.
    std::vector<std::vector<std::uint64_t>> coefficients;
    std::string text;
};

struct IdealDescriptor {
    std::uint64_t l = 0, N = 0, f = 0, M = 1, L = 1;
    std::string character;
    unsigned residue_degree = 1;
    std::string zeta_image;
    std::vector<UGenerator> u_generators;
    std::vector<TGenerator> t_generators;

    // "<7, U_5, U_29 - 1, {T_r - 1 - r}_{primes r ≡ 1, 4 (mod 5)}, ...>" with angle brackets ⟨ ⟩.
    std::string to_text() const;
    std::string to_json() const;
    std::string residue_field() const;  // "F_49"
};

// merge_classes = false lists every residue class as its own T generator.
IdealDescriptor descriptor(const EisensteinParams& params, std::uint64_t l, bool merge_classes = true);
IdealDescriptor descriptor(const EisensteinParams& params, const ResidualCharacter& eps, bool merge_classes = true);

}  // namespace eiscong
