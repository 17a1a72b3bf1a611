#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/eisenstein.hpp"

namespace eiscong {

class DivisorUndefined : public DomainError {
public:
    using DomainError::DomainError;
};

// Cusp of X_0(N) with divisor d and class a_class in (Z/tZ)^x, t = gcd(d, N/d).
// Canonical representative [a; d] with a the least positive integer congruent to a_class mod t and prime to d.
struct Cusp {
    std::uint64_t level = 1;
    std::uint64_t d = 1;
    std::uint64_t t = 1;
    std::uint64_t a_class = 0;
    std::uint64_t a = 1;

    std::uint64_t b() const { return d; }
    std::string to_string() const;  // "[a;b]"

    friend bool operator<(const Cusp& x, const Cusp& y) {
        if (x.d != y.d) return x.d < y.d;
        return x.a_class < y.a_class;
    }
    friend bool operator==(const Cusp& x, const Cusp& y) {
        return x.level == y.level && x.d == y.d && x.a_class == y.a_class;
    }
};

// Class of a/c, gcd(a, c) = 1; c = 0 is the cusp at infinity.
Cusp cusp_of(std::uint64_t N, std::int64_t a, std::int64_t c);
std::vector<Cusp> enumerate_cusps(std::uint64_t N);
std::uint64_t cusp_count(std::uint64_t N);

std::uint64_t ram_index(const Cusp& x);
// Width of the canonical representative, N / gcd(b^2, N).
std::uint64_t width(const Cusp& x);
std::uint64_t field_torsion(const Cusp& x);

struct CuspDivisor {
    std::uint64_t level = 1;
    std::map<Cusp, CycElement> support;

    void add(const Cusp& x, const CycElement& c);
    CycElement at(const Cusp& x) const;
    CycElement degree() const;
    CuspDivisor scaled(const CycElement& c) const;
    CuspDivisor& operator+=(const CuspDivisor& o);
    CuspDivisor& operator-=(const CuspDivisor& o);
    friend CuspDivisor operator+(CuspDivisor a, const CuspDivisor& b) { return a += b; }
    friend CuspDivisor operator-(CuspDivisor a, const CuspDivisor& b) { return a -= b; }
    friend bool operator==(const CuspDivisor& a, const CuspDivisor& b);

    // "[a;b]@N : <coefficient>" per line, sorted by (d, a_class).
    std::string to_string() const;
    std::string to_json() const;
};

// D_{Gamma_0(N), d}(phi): sum of phi(a b) [a; d b] over cusps of divisor d.
CuspDivisor D_divisor(std::uint64_t N, std::uint64_t d, const DirichletCharacter& phi);

// Images of a cusp of X_0(Al) in X_0(A).
Cusp image_pi_paren(const Cusp& x, std::uint64_t l);
Cusp image_pi_l(const Cusp& x, std::uint64_t l);
// Ramification at x, computed from stabilizer conjugation.
std::uint64_t ramification_pi_paren(const Cusp& x, std::uint64_t l);
std::uint64_t ramification_pi_l(const Cusp& x, std::uint64_t l);

// Pullbacks along X_0(Al) -> X_0(A), z -> z and z -> lz.
CuspDivisor pullback_pi_paren(const CuspDivisor& D, std::uint64_t l);
CuspDivisor pullback_pi_l(const CuspDivisor& D, std::uint64_t l);

// Formal combination sum_d c_d D_{Gamma_0(level), d}(phi).
struct DSum {
    std::uint64_t level = 1;
    std::map<std::uint64_t, CycElement> terms;

    void add(std::uint64_t d, const CycElement& c);
    CuspDivisor expand(const DirichletCharacter& phi) const;
};

// Pullbacks of D_{A,d} by the four-case tables.
DSum table_pullback_paren(const DSum& S, std::uint64_t l, const DirichletCharacter& phi);
DSum table_pullback_l(const DSum& S, std::uint64_t l, const DirichletCharacter& phi);

// Coefficient recursions: alpha_{l^nuN, i} (i < nuM), beta_{q^nuN, j} (j <= nuN), gamma_{t^nuN, k} (k <= nuN).
std::vector<CycElement> alpha_coefficients(std::uint64_t l, const DirichletCharacter& phi, unsigned nuM, unsigned nuN);
std::vector<CycElement> beta_coefficients(std::uint64_t q, const DirichletCharacter& phi, unsigned nuL, unsigned nuN);
std::vector<CycElement> gamma_coefficients(std::uint64_t t, const DirichletCharacter& phi, unsigned nuN);

// xi = primitive character attached to phi^2, n its conductor.
DirichletCharacter xi_character(const DirichletCharacter& phi);
CycElement beta_phi(const DirichletCharacter& phi);
CycElement beta_constant(const EisensteinParams& params);
CycElement beta_tilde(const EisensteinParams& params);
unsigned delta_p(const EisensteinParams& params, std::uint64_t p);

struct CoefficientMutation {
    char family = 'b';  // 'a', 'b' or 'g'
    std::uint64_t prime = 0;
    std::size_t index = 0;
};

// Divisor D_{Gamma_0(N),M,L}(phi) as a multi-sum over the coefficient recursions.
DSum closed_form_dsum(const EisensteinParams& params, const CoefficientMutation* mutation = nullptr);
CuspDivisor closed_form_divisor(const EisensteinParams& params, const CoefficientMutation* mutation = nullptr);

// delta(E_{phi,M,L}) by pulling back the level f^2 divisor through refinements, slashes and level raising.
CuspDivisor boundary_divisor(const EisensteinParams& params);

struct BoundaryReport {
    bool ok = false;
    std::optional<Cusp> mismatch;
    CycElement recursion_value;
    CycElement closed_value;
    std::string message;
};

BoundaryReport verify_boundary(const EisensteinParams& params, const CoefficientMutation* mutation = nullptr);

}  // namespace eiscong
