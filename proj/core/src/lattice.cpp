#include "eiscong/lattice.hpp"

namespace eiscong {

namespace {

void check_cap(const FieldPtr& f) {
    if (f->degree() > kIdealDegreeCap)
        throw DomainError("ideal arithmetic in Q(zeta_" + std::to_string(f->m()) + ") exceeds the degree cap of " +
                          std::to_string(kIdealDegreeCap));
}

void mod_into(Int& v, const Int& D) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), D.get_mpz_t());
}

bool is_zero_row(const std::vector<Int>& r) {
    for (auto& v : r)
        if (v != 0) return false;
    return true;
}

}  // namespace

IntMatrix hnf_mod(const IntMatrix& rows, std::size_t n, const Int& D) {
    if (D <= 0) throw DomainError("hnf_mod: modulus must be positive");
    IntMatrix work;
    for (auto r : rows) {
        r.resize(n, Int(0));
        for (auto& v : r) mod_into(v, D);
        if (!is_zero_row(r)) work.push_back(std::move(r));
    }
    IntMatrix out(n, std::vector<Int>(n, Int(0)));
    Int g, s, t, a, b;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Int> P(n, Int(0));
        P[j] = D;
        for (auto& r : work) {
            if (r[j] == 0) continue;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), P[j].get_mpz_t(), r[j].get_mpz_t());
            mpz_divexact(a.get_mpz_t(), P[j].get_mpz_t(), g.get_mpz_t());
            mpz_divexact(b.get_mpz_t(), r[j].get_mpz_t(), g.get_mpz_t());
            for (std::size_t k = j + 1; k < n; ++k) {
                Int np = s * P[k] + t * r[k];
                Int nr = a * r[k] - b * P[k];
                mod_into(np, D);
                mod_into(nr, D);
                P[k] = std::move(np);
                r[k] = std::move(nr);
            }
            P[j] = g;
            r[j] = 0;
        }
        out[j] = std::move(P);
        std::erase_if(work, is_zero_row);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Int& piv = out[k][k];
        for (std::size_t i = 0; i < k; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), out[i][k].get_mpz_t(), piv.get_mpz_t());
            if (q == 0) continue;
            for (std::size_t c = k; c < n; ++c) out[i][c] -= q * out[k][c];
        }
    }
    return out;
}

IntegralIdeal::IntegralIdeal(FieldPtr field, IntMatrix basis) : field_(std::move(field)), basis_(std::move(basis)) {}

IntegralIdeal IntegralIdeal::unit(std::uint64_t m) {
    auto f = CyclotomicField::get(m);
    check_cap(f);
    std::size_t n = f->degree();
    IntMatrix id(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    return IntegralIdeal(f, id);
}

Int IntegralIdeal::index() const {
    Int r = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) r *= basis_[i][i];
    return r;
}

bool IntegralIdeal::contains(const std::vector<Int>& v0) const {
    std::vector<Int> v = v0;
    std::size_t n = basis_.size();
    v.resize(n, Int(0));
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == 0) continue;
        if (!mpz_divisible_p(v[j].get_mpz_t(), basis_[j][j].get_mpz_t())) return false;
        Int c = v[j] / basis_[j][j];
        for (std::size_t k = j; k < n; ++k) v[k] -= c * basis_[j][k];
    }
    return true;
}

bool IntegralIdeal::contains(const CycElement& x) const {
    CycElement y = x.embed(field_->m());
    if (!y.is_integral()) return false;
    return contains(y.numerators());
}

bool IntegralIdeal::is_ideal() const {
    CycElement z = CycElement::zeta(field_->m());
    for (auto& row : basis_) {
        std::vector<Rational> c;
        for (auto& v : row) c.emplace_back(v);
        CycElement e = CycElement::from_coeffs(field_->m(), c) * z;
        if (!contains(e)) return false;
    }
    return true;
}

IntegralIdeal ideal_from_element(const CycElement& e) {
    if (e.is_zero()) throw DomainError("ideal_from_element: zero element");
    if (!e.is_integral()) throw DomainError("ideal_from_element: element is not integral");
    check_cap(e.field());
    Rational nrm = e.norm();
    Int D = abs(nrm.get_num());
    return IntegralIdeal(e.field(), hnf_mod(multiplication_matrix(e), e.degree(), D));
}

IntegralIdeal ideal_from_generators(const std::vector<CycElement>& gens) {
    if (gens.empty()) throw DomainError("ideal_from_generators: no generators");
    std::uint64_t m = 1;
    for (auto& g : gens) m = lcm_u(m, g.conductor());
    auto f = CyclotomicField::get(m);
    check_cap(f);
    Int D = 0;
    IntMatrix rows;
    for (auto& g0 : gens) {
        CycElement g = g0.embed(m);
        if (!g.is_integral()) throw DomainError("ideal_from_generators: generator is not integral");
        if (g.is_zero()) continue;
        Int nrm = abs(g.norm().get_num());
        mpz_gcd(D.get_mpz_t(), D.get_mpz_t(), nrm.get_mpz_t());
        for (auto& r : multiplication_matrix(g)) rows.push_back(r);
    }
    if (D == 0) throw DomainError("ideal_from_generators: zero ideal");
    return IntegralIdeal(f, hnf_mod(rows, f->degree(), D));
}

IntegralIdeal lattice_intersect(const IntegralIdeal& I, const IntegralIdeal& J) {
    if (I.field()->m() != J.field()->m()) throw DomainError("lattice_intersect: ideals live in different fields");
    std::size_t n = I.degree();
    Int D;
    Int di = I.index(), dj = J.index();
    mpz_lcm(D.get_mpz_t(), di.get_mpz_t(), dj.get_mpz_t());
    IntMatrix rows;
    for (auto& r : I.basis()) {
        std::vector<Int> row(r);
        row.insert(row.end(), r.begin(), r.end());
        rows.push_back(std::move(row));
    }
    for (auto& r : J.basis()) {
        std::vector<Int> row(r);
        row.resize(2 * n, Int(0));
        rows.push_back(std::move(row));
    }
    IntMatrix h = hnf_mod(rows, 2 * n, D);
    IntMatrix lower;
    for (std::size_t i = n; i < 2 * n; ++i) lower.emplace_back(h[i].begin() + static_cast<std::ptrdiff_t>(n), h[i].end());
    return IntegralIdeal(I.field(), hnf_mod(lower, n, D));
}

IntegralIdeal numerator_ideal(const CycElement& e) {
    if (e.is_zero()) throw DomainError("numerator_ideal: zero element");
    if (e.is_integral()) return ideal_from_element(e);
    Int d = e.denominator();
    CycElement de = e * CycElement(d);
    IntegralIdeal A = ideal_from_element(de);
    IntegralIdeal B = ideal_from_element(CycElement(d).embed(e.conductor()));
    IntMatrix basis = lattice_intersect(A, B).basis();
    for (auto& row : basis)
        for (auto& v : row) {
            if (!mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()))
                throw std::logic_error("numerator_ideal: intersection not divisible by denominator");
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
        }
    return IntegralIdeal(e.field(), std::move(basis));
}

Int ideal_index(const IntegralIdeal& I) { return I.index(); }

}  // namespace eiscong
