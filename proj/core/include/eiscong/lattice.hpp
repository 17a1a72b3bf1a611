#pragma once

#include <vector>

#include "eiscong/cyclotomic.hpp"

namespace eiscong {

using IntMatrix = std::vector<std::vector<Int>>;

// Upper-triangular Hermite normal form of the lattice spanned by rows together with D*Z^n.
// D must be a positive multiple of the lattice index, so D*Z^n lies inside the lattice.
IntMatrix hnf_mod(const IntMatrix& rows, std::size_t n, const Int& D);

class IntegralIdeal {
public:
    IntegralIdeal(FieldPtr field, IntMatrix basis);

    static IntegralIdeal unit(std::uint64_t m);

    const FieldPtr& field() const { return field_; }
    const IntMatrix& basis() const { return basis_; }
    std::size_t degree() const { return basis_.size(); }
    Int index() const;
    bool contains(const std::vector<Int>& v) const;
    bool contains(const CycElement& x) const;
    bool is_ideal() const;

    friend bool operator==(const IntegralIdeal& a, const IntegralIdeal& b) {
        return a.field_->m() == b.field_->m() && a.basis_ == b.basis_;
    }

private:
    FieldPtr field_;
    IntMatrix basis_;
};

IntegralIdeal ideal_from_element(const CycElement& e);
IntegralIdeal ideal_from_generators(const std::vector<CycElement>& gens);
IntegralIdeal lattice_intersect(const IntegralIdeal& I, const IntegralIdeal& J);
IntegralIdeal numerator_ideal(const CycElement& e);
Int ideal_index(const IntegralIdeal& I);

}  // namespace eiscong
