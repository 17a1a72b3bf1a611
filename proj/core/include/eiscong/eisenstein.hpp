#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/characters.hpp"

namespace eiscong {

class ParameterError : public DomainError {
public:
    using DomainError::DomainError;
};

// Weight-2 q-expansion; coefficients a_1..a_precision are known exactly.
struct QExpansion {
    std::uint64_t level = 1;
    std::size_t precision = 0;
    std::vector<CycElement> coeffs;  // coeffs[n - 1] = a_n
    CycElement a0;

    const CycElement& operator[](std::size_t n) const;
    QExpansion truncated(std::size_t B) const;
    QExpansion scaled(const CycElement& c) const;
    std::uint64_t coefficient_conductor() const;

    // "q - 3q^2 + 4q^3 + O(q^4)"
    std::string to_string() const;
    // One line per coefficient, "n: <poly>", for n = 0..precision.
    std::string to_lines() const;
};

bool equal_to_precision(const QExpansion& a, const QExpansion& b);

struct EisensteinParams {
    DirichletCharacter phi;
    std::uint64_t N = 0, M = 1, L = 1;
    std::uint64_t f = 1, T1 = 1, T2 = 1, T2phi = 1;
    std::vector<std::uint64_t> S_phi;

    static EisensteinParams make(const DirichletCharacter& phi, std::uint64_t N, std::uint64_t M, std::uint64_t L);

    std::uint64_t scale() const { return M * L / (T1 * T2); }
    std::uint64_t built_level() const { return f * f * M * L; }
    std::vector<std::uint64_t> critical_primes() const;
    std::vector<std::uint64_t> ordinary_primes() const;
    // "ord_2,crit_13"; empty when no refinement is applied.
    std::string refinement_name() const;
    std::string name() const;
};

QExpansion e_phi(const DirichletCharacter& phi, std::size_t B);
QExpansion refine_critical(const QExpansion& g, std::uint64_t l, const DirichletCharacter& phi);
QExpansion refine_ordinary(const QExpansion& g, std::uint64_t q, const DirichletCharacter& phi);
QExpansion slash_scale(const QExpansion& g, std::uint64_t d);
QExpansion build_E(const EisensteinParams& params, std::size_t B);

QExpansion hecke_Tl(const QExpansion& g, std::uint64_t l);
QExpansion hecke_Uq(const QExpansion& g, std::uint64_t q);

// c with image = c * g up to the common precision, if any.
std::optional<CycElement> eigenvalue(const QExpansion& image, const QExpansion& g);

CycElement expected_T_eigenvalue(const EisensteinParams& params, std::uint64_t r);
CycElement expected_U_eigenvalue(const EisensteinParams& params, std::uint64_t q);

CycElement lambda_twisted(const EisensteinParams& params, const DirichletCharacter& chi);
CycElement lambda_pm(const EisensteinParams& params, const DirichletCharacter& chi);

// p with N = p^2 N', N' squarefree and prime to p; 0 when N has no such shape.
std::uint64_t square_part_prime(std::uint64_t N);
// (phi, M, N'/M) over nontrivial characters of conductor p and M | N'.
std::vector<EisensteinParams> eisenstein_basis(std::uint64_t N, std::uint64_t p);

}  // namespace eiscong
