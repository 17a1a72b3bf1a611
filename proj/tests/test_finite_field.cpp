#include "doctest.h"

#include <random>

#include "eiscong/finite_field.hpp"

using namespace eiscong;

namespace {

bool is_root(const FiniteField& F, const std::vector<Int>& poly, const FiniteField::Elem& x) {
    FiniteField::Elem acc = F.zero();
    for (std::size_t i = poly.size(); i-- > 0;) acc = F.add(F.mul(acc, x), F.from_int(poly[i]));
    return F.is_zero(acc);
}

}  // namespace

TEST_CASE("defining polynomials") {
    CHECK(smallest_irreducible(2, 2) == std::vector<std::uint64_t>{1, 1, 1});
    CHECK(smallest_irreducible(3, 2) == std::vector<std::uint64_t>{1, 0, 1});
    CHECK(smallest_irreducible(7, 2) == std::vector<std::uint64_t>{1, 0, 1});
    CHECK(smallest_irreducible(5, 1) == std::vector<std::uint64_t>{0, 1});
    CHECK_THROWS_AS(smallest_irreducible(6, 2), DomainError);
}

TEST_CASE("field axioms on samples") {
    auto F = FiniteField::get(7, 4);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        auto a = F->element_at(rng() % 2401), b = F->element_at(rng() % 2401);
        CHECK(F->mul(a, b) == F->mul(b, a));
        if (!F->is_zero(a)) CHECK(F->mul(a, F->inv(a)) == F->one());
        CHECK(F->pow(a, F->size()) == a);
    }
    CHECK(F->degree_of(F->from_int(3)) == 1);
    CHECK(F->degree_of(F->generator()) == 4);
}

TEST_CASE("roots of small polynomials") {
    auto phi11 = cyclotomic_polynomial(11);
    CHECK(finite_field_roots(phi11, 5, 1).empty());
    auto r5 = finite_field_roots(phi11, 5, 5);
    CHECK(r5.size() == 10);
    auto r = finite_field_roots({-2, 0, 1}, 7, 1);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == FiniteField::Elem{3});
    CHECK(r[1] == FiniteField::Elem{4});
    CHECK(finite_field_roots({0, 1}, 13, 1).size() == 1);
}

TEST_CASE("equal-degree splitting on large fields") {
    auto phi11 = cyclotomic_polynomial(11);
    auto F = FiniteField::get(5, 10);
    auto roots = finite_field_roots(phi11, F);
    CHECK(roots.size() == 10);
    for (auto& x : roots) CHECK(is_root(*F, phi11, x));
    auto phi19 = cyclotomic_polynomial(19);
    auto F2 = FiniteField::get(2, 18);
    auto r2 = finite_field_roots(phi19, F2);
    CHECK(r2.size() == 18);
    for (auto& x : r2) CHECK(is_root(*F2, phi19, x));
    auto F3 = FiniteField::get(3, 12);
    auto phi13 = cyclotomic_polynomial(13);
    CHECK(finite_field_roots(phi13, F3).size() == 12);
}

TEST_CASE("brute force and splitting agree") {
    auto phi = cyclotomic_polynomial(13);
    auto F = FiniteField::get(3, 6);
    auto brute = finite_field_roots(phi, F);
    CHECK(brute.size() == 12);
    auto F12 = FiniteField::get(3, 12);
    std::size_t sub = 0;
    for (auto& x : finite_field_roots(phi, F12)) sub += F12->degree_of(x) == 3;
    CHECK(sub == 12);
}

TEST_CASE("factor degrees") {
    CHECK(factor_degrees_mod(cyclotomic_polynomial(11), 5) == std::vector<unsigned>{5});
    CHECK(factor_degrees_mod({-2, 0, 1}, 7) == std::vector<unsigned>{1});
    CHECK(factor_degrees_mod({-2, 0, 1}, 5) == std::vector<unsigned>{2});
    CHECK(factor_degrees_mod({-1, 0, 41, 0, -13, 0, 1}, 3).size() >= 1);
}

TEST_CASE("reduction embeddings") {
    auto e = reduction_embeddings(11, {0, 1}, 5);
    REQUIRE(e.size() == 2);
    CHECK(e[0].residue_degree() == 5);
    auto s = reduction_embeddings(1, {-2, 0, 1}, 7);
    REQUIRE(s.size() == 2);
    CHECK(s[0].root == FiniteField::Elem{3});
    CHECK(s[1].root == FiniteField::Elem{4});
    auto c = reduction_embeddings(4, {-2, 0, 1}, 7);
    REQUIRE(c.size() == 2);
    CHECK(c[0].residue_degree() == 2);
    auto r = reduction_embeddings(10, {0, 1}, 5);
    REQUIRE(r.size() == 1);
    CHECK(r[0].residue_degree() == 1);
    CHECK(r[0].reduce(CycElement::zeta(5)) == FiniteField::Elem{1});
    CHECK(r[0].reduce(CycElement::zeta(10)) == FiniteField::Elem{4});
    CHECK_THROWS_AS(r[0].reduce(CycElement(Rational(1, 5))), UnsupportedPrime);
    auto r44 = reduction_embeddings(44, {0, 1}, 11);
    REQUIRE(r44.size() == 1);
    CHECK(r44[0].reduce(CycElement::zeta(44, 4)) == r44[0].field->one());
    CHECK(r44[0].residue_degree() == 2);
}

TEST_CASE("embeddings are ring homomorphisms") {
    std::mt19937_64 rng(4);
    for (std::uint64_t m : {5, 12, 20}) {
        for (auto& emb : reduction_embeddings(m, {0, 1}, 7)) {
            for (int t = 0; t < 10; ++t) {
                std::vector<Rational> a, b;
                for (std::size_t i = 0; i < euler_phi(m); ++i) {
                    a.emplace_back(static_cast<long>(rng() % 11) - 5);
                    b.emplace_back(static_cast<long>(rng() % 11) - 5, 2);
                }
                auto x = CycElement::from_coeffs(m, a), y = CycElement::from_coeffs(m, b);
                const auto& F = *emb.field;
                CHECK(emb.reduce(x * y) == F.mul(emb.reduce(x), emb.reduce(y)));
                CHECK(emb.reduce(x + y) == F.add(emb.reduce(x), emb.reduce(y)));
            }
            CHECK(emb.reduce(CycElement::zeta(m)) == emb.zeta);
        }
    }
}
