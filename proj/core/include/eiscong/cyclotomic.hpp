#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eiscong/arith.hpp"

namespace eiscong {

// Coefficients of the m-th cyclotomic polynomial, ascending degree.
std::vector<Int> cyclotomic_polynomial(std::uint64_t m);

// m with m = 2 mod 4 replaced by m/2; both index the same field.
std::uint64_t canonical_conductor(std::uint64_t m);

class CyclotomicField {
public:
    static std::shared_ptr<const CyclotomicField> get(std::uint64_t m);

    std::uint64_t m() const { return m_; }
    std::size_t degree() const { return deg_; }
    const std::vector<Int>& modulus() const { return phi_; }

    // Reduces a polynomial (any length) in place modulo Phi_m; result has length degree().
    void reduce(std::vector<Int>& poly) const;

    explicit CyclotomicField(std::uint64_t m);

private:
    std::uint64_t m_;
    std::size_t deg_;
    std::vector<Int> phi_;
    std::vector<std::pair<std::size_t, Int>> tail_;  // nonzero non-leading terms of Phi_m
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

inline constexpr std::size_t kElementDegreeCap = 2000;
inline constexpr std::size_t kIdealDegreeCap = 200;

class CycElement {
public:
    CycElement();
    CycElement(long v);
    CycElement(const Int& v);
    CycElement(const Rational& v);

    static CycElement zero(std::uint64_t m);
    static CycElement zeta(std::uint64_t m, std::int64_t j = 1);
    // (1/den) * sum_j counts[j] zeta_m^j; counts has length m.
    static CycElement from_cyclic(std::uint64_t m, std::vector<Int> counts, const Int& den = 1);
    static CycElement from_coeffs(std::uint64_t m, const std::vector<Rational>& coeffs);

    const FieldPtr& field() const { return field_; }
    std::uint64_t conductor() const { return field_->m(); }
    std::size_t degree() const { return field_->degree(); }

    Rational coeff(std::size_t i) const;
    std::vector<Rational> coeffs() const;
    const Int& denominator() const { return den_; }
    const std::vector<Int>& numerators() const { return num_; }

    bool is_zero() const;
    bool is_rational() const;
    bool is_integral() const { return den_ == 1; }
    Rational to_rational() const;

    CycElement embed(std::uint64_t m) const;
    CycElement galois(std::int64_t a) const;
    CycElement conj() const { return galois(-1); }
    CycElement inverse() const;
    CycElement pow(std::int64_t e) const;
    Rational norm() const;
    Rational trace() const;
    std::complex<double> approx() const;
    std::string to_string(const std::string& var = "") const;

    CycElement operator-() const;
    CycElement& operator+=(const CycElement& o);
    CycElement& operator-=(const CycElement& o);
    CycElement& operator*=(const CycElement& o);
    CycElement& operator/=(const CycElement& o);
    friend CycElement operator+(CycElement a, const CycElement& b) { return a += b; }
    friend CycElement operator-(CycElement a, const CycElement& b) { return a -= b; }
    friend CycElement operator*(CycElement a, const CycElement& b) { return a *= b; }
    friend CycElement operator/(CycElement a, const CycElement& b) { return a /= b; }
    friend bool operator==(const CycElement& a, const CycElement& b);
    friend bool operator!=(const CycElement& a, const CycElement& b) { return !(a == b); }

private:
    CycElement(FieldPtr f, std::vector<Int> num, Int den);
    void normalize();
    static void unify(CycElement& a, CycElement& b);

    FieldPtr field_;
    Int den_;
    std::vector<Int> num_;
};

// Determinant over Z (Bareiss), used for norm cross-checks.
Int integer_determinant(std::vector<std::vector<Int>> m);
// Matrix of multiplication by x on the power basis; rows are x * zeta^i.
std::vector<std::vector<Int>> multiplication_matrix(const CycElement& x);

}  // namespace eiscong
