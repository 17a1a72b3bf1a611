#include "doctest.h"

#include <random>

#include "eiscong/eisenstein.hpp"

using namespace eiscong;

namespace {

CycElement z(std::uint64_t m, std::int64_t j = 1) { return CycElement::zeta(m, j); }
CycElement c(long v) { return CycElement(v); }

void check_integers(const QExpansion& g, const std::vector<long>& want) {
    REQUIRE(g.precision >= want.size());
    for (std::size_t n = 1; n <= want.size(); ++n) {
        CAPTURE(n);
        CHECK(g[n] == c(want[n - 1]));
    }
}

DirichletCharacter quad(std::uint64_t p) {
    for (auto& ch : primitive_characters(p))
        if (ch.is_quadratic()) return ch;
    throw std::logic_error("no quadratic character");
}

// Coefficient by direct divisor sum with character values.
CycElement oracle_coeff(const DirichletCharacter& phi, std::uint64_t n) {
    CycElement s(0);
    auto inv = phi.inverse();
    for (auto b : divisors(n)) s += phi.value(static_cast<std::int64_t>(n / b)) * inv.value(static_cast<std::int64_t>(b)) * c(static_cast<long>(b));
    return s;
}

}  // namespace

TEST_CASE("E_phi for the quadratic character mod 11") {
    auto phi = DirichletCharacter::from_label("11.2.1");
    auto g = e_phi(phi, 12);
    CHECK(g.level == 121);
    CHECK(g.a0.is_zero());
    check_integers(g, {1, -3, 4, 7, 6, -12, -8, -15, 13, -18, 0, 28});
    CHECK(g.to_string() == "q - 3q^2 + 4q^3 + 7q^4 + 6q^5 - 12q^6 - 8q^7 - 15q^8 + 13q^9 - 18q^10 + 28q^12 + O(q^13)");
}

TEST_CASE("E_phi for an order-10 character mod 11") {
    auto phi = DirichletCharacter::from_label("11.10.1");
    REQUIRE(phi.value(2) == z(10));
    auto g = e_phi(phi, 6);
    CHECK(g[1] == c(1));
    CHECK(g[2] == z(10) * (c(1) + c(2) * z(5, 4)));
    CHECK(g[3] == -z(10, 3) * (c(1) + c(3) * z(5, 2)));
    CHECK(g[4] == z(5) * (c(1) + c(2) * z(5, 4) + c(4) * z(5, 3)));
    CHECK(g[5] == z(5, 2) * (c(1) + c(5) * z(5)));
    CHECK(g[6] == -z(5, 2) * (c(1) + c(2) * z(5, 4) + c(3) * z(5, 2) + c(6) * z(5)));
}

TEST_CASE("E_phi agrees with the divisor-sum oracle") {
    for (auto f : {3u, 4u, 5u, 7u, 8u, 9u, 11u, 12u, 13u, 15u, 16u}) {
        for (auto& phi : primitive_characters(f)) {
            if (phi.is_trivial()) continue;
            auto g = e_phi(phi, 40);
            for (std::uint64_t n = 1; n <= 40; ++n) {
                CAPTURE(phi.label());
                CAPTURE(n);
                CHECK(g[n] == oracle_coeff(phi, n));
            }
            CHECK(g[1] == c(1));
            CHECK(g[f].is_zero());
        }
    }
}

TEST_CASE("E_phi for the quadratic character mod 5") {
    auto g = e_phi(quad(5), 14);
    check_integers(g, {1, -3, -4, 7, 0, 12, -8, -15, 13, 0, 12, -28, -14, 24});
}

TEST_CASE("E_phi rejects trivial and imprimitive characters") {
    CHECK_THROWS_AS(e_phi(DirichletCharacter::trivial(7), 5), DomainError);
    CHECK_THROWS_AS(e_phi(quad(3).lift(6), 5), DomainError);
}

TEST_CASE("refinements at level 9") {
    auto phi = quad(3);
    auto E = e_phi(phi, 15);
    check_integers(E, {1, -3, 0, 7, -6, 0, 8, -15, 0, 18, -12, 0, 14, -24, 0});
    auto crit13 = refine_critical(E, 13, phi);
    auto ord13 = refine_ordinary(E, 13, phi);
    CHECK(crit13.level == 117);
    CHECK(crit13[13] == c(13));
    CHECK(ord13[13] == c(1));
    CHECK(crit13[1] == c(1));
    auto ord2 = refine_ordinary(E, 2, phi);
    CHECK(ord2[2] == c(-1));
    CHECK(refine_critical(E, 3, phi).level == E.level);
    CHECK(equal_to_precision(refine_ordinary(E, 3, phi), E));
    CHECK_THROWS_AS(refine_critical(crit13, 13, phi), DomainError);
    CHECK_THROWS_AS(refine_critical(E, 15, phi), DomainError);
}

TEST_CASE("level 234 refined series") {
    auto phi = quad(3);
    auto ord2crit13 = build_E(EisensteinParams::make(phi, 234, 13, 2), 15);
    auto crit2crit13 = build_E(EisensteinParams::make(phi, 234, 26, 1), 15);
    auto ord2ord13 = build_E(EisensteinParams::make(phi, 234, 1, 26), 15);
    auto crit2ord13 = build_E(EisensteinParams::make(phi, 234, 2, 13), 15);
    check_integers(ord2crit13, {1, -1, 0, 1, -6, 0, 8, -1, 0, 6, -12, 0, 13, -8, 0});
    check_integers(crit2crit13, {1, -2, 0, 4, -6, 0, 8, -8, 0, 12, -12, 0, 13, -16, 0});
    check_integers(ord2ord13, {1, -1, 0, 1, -6, 0, 8, -1, 0, 6, -12, 0, 1, -8, 0});
    check_integers(crit2ord13, {1, -2, 0, 4, -6, 0, 8, -8, 0, 12, -12, 0, 1, -16, 0});
    CHECK(ord2crit13.level == 234);
    CHECK(EisensteinParams::make(phi, 234, 13, 2).refinement_name() == "ord_2,crit_13");
    CHECK(ord2crit13.to_string() == "q - q^2 + q^4 - 6q^5 + 8q^7 - q^8 + 6q^10 - 12q^11 + 13q^13 - 8q^14 + O(q^16)");
}

TEST_CASE("slash_scale") {
    QExpansion g;
    g.level = 1;
    g.precision = 2;
    g.coeffs = {c(1), c(1)};
    auto s = slash_scale(g, 2);
    CHECK(s.precision == 4);
    CHECK(s.level == 2);
    CHECK(s[1].is_zero());
    CHECK(s[2] == c(2));
    CHECK(s[3].is_zero());
    CHECK(s[4] == c(2));
    CHECK(equal_to_precision(slash_scale(g, 1), g));
    auto E = e_phi(quad(5), 30);
    auto ab = slash_scale(slash_scale(E, 2), 3);
    auto d = slash_scale(E, 6);
    CHECK(ab.precision == d.precision);
    CHECK(equal_to_precision(ab, d));
}

TEST_CASE("build_E without refinement is E_phi") {
    auto phi = quad(11);
    CHECK(equal_to_precision(build_E(EisensteinParams::make(phi, 121, 1, 1), 30), e_phi(phi, 30)));
}

TEST_CASE("parameter validation") {
    auto phi = quad(5);
    CHECK_THROWS_AS(EisensteinParams::make(phi, 725, 2, 1), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(phi, 725, 29, 29), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(DirichletCharacter::trivial(5), 725, 1, 1), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(phi.lift(10), 1450, 1, 1), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(phi, 25 * 9, 1, 1), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(phi, 625, 1, 1), ParameterError);
    CHECK_THROWS_AS(EisensteinParams::make(phi, 625, 5, 1), ParameterError);
    auto ok = EisensteinParams::make(phi, 625, 25, 1);
    CHECK(ok.scale() == 25);
    CHECK(ok.T1 == 1);
    auto p = EisensteinParams::make(DirichletCharacter::from_label("5.4.1"), 725 * 11, 11, 29);
    CHECK(p.T1 == 11);
    CHECK(p.T2 == 29);
    CHECK(p.S_phi == std::vector<std::uint64_t>{29});
    CHECK(p.T2phi == 29);
    auto p2 = EisensteinParams::make(DirichletCharacter::from_label("5.4.1"), 25 * 7, 1, 7);
    CHECK(p2.S_phi.empty());
    CHECK(p2.T2phi == 1);
}

TEST_CASE("Hecke eigenvalues on level 121") {
    auto phi = quad(11);
    auto E = e_phi(phi, 60);
    auto T2 = hecke_Tl(E, 2);
    CHECK(T2.precision == 30);
    REQUIRE(eigenvalue(T2, E));
    CHECK(*eigenvalue(T2, E) == c(-3));
    CHECK(*eigenvalue(hecke_Tl(E, 3), E) == c(4));
    CHECK(*eigenvalue(hecke_Uq(E, 11), E) == c(0));
    CHECK_THROWS_AS(hecke_Tl(E, 11), DomainError);
    CHECK_THROWS_AS(hecke_Uq(E, 2), DomainError);
}

TEST_CASE("U eigenvalues follow the refinement type") {
    auto phi = quad(3);
    for (auto [M, L] : std::vector<std::pair<int, int>>{{13, 2}, {26, 1}, {1, 26}, {2, 13}}) {
        auto P = EisensteinParams::make(phi, 234, M, L);
        auto E = build_E(P, 200);
        for (auto q : {2u, 3u, 13u}) {
            CAPTURE(P.name());
            CAPTURE(q);
            auto ev = eigenvalue(hecke_Uq(E, q), E);
            REQUIRE(ev);
            CHECK(*ev == expected_U_eigenvalue(P, q));
        }
    }
    auto P = EisensteinParams::make(phi, 234, 13, 2);
    CHECK(expected_U_eigenvalue(P, 2) == c(-1));
    CHECK(expected_U_eigenvalue(P, 13) == c(13));
    auto Q = EisensteinParams::make(quad(5), 725, 29, 1);
    CHECK(*eigenvalue(hecke_Uq(build_E(Q, 300), 29), build_E(Q, 300)) == c(29));
}

TEST_CASE("randomized eigenform property") {
    std::mt19937_64 rng(17);
    int built = 0;
    for (int trial = 0; trial < 60 && built < 25; ++trial) {
        std::uint64_t p = (rng() & 1) ? 3 : 5;
        std::uint64_t Np = 1 + rng() % 30;
        std::uint64_t N = p * p * Np;
        if (square_part_prime(N) != p) continue;
        auto basis = eisenstein_basis(N, p);
        auto P = basis[rng() % basis.size()];
        auto E = build_E(P, 13 * 13);
        ++built;
        CHECK(E.a0.is_zero());
        for (std::uint64_t r : {2u, 3u, 5u, 7u, 11u, 13u}) {
            if (N % r == 0) continue;
            CAPTURE(P.name());
            CAPTURE(r);
            auto ev = eigenvalue(hecke_Tl(E, r), E);
            REQUIRE(ev);
            CHECK(*ev == expected_T_eigenvalue(P, r));
        }
        for (auto q : factor(N).primes()) {
            auto ev = eigenvalue(hecke_Uq(E, q), E);
            REQUIRE(ev);
            CHECK(*ev == expected_U_eigenvalue(P, q));
        }
    }
    CHECK(built == 25);
}

TEST_CASE("refinements at distinct primes commute") {
    auto phi = DirichletCharacter::from_label("5.4.1");
    auto E = e_phi(phi, 120);
    auto a = refine_ordinary(refine_critical(E, 2, phi), 3, phi);
    auto b = refine_critical(refine_ordinary(E, 3, phi), 2, phi);
    CHECK(equal_to_precision(a, b));
}

TEST_CASE("line format") {
    auto g = e_phi(DirichletCharacter::from_label("5.4.1"), 3);
    CHECK(g.to_lines() == "0: 0\n1: 1\n2: -z4\n3: 2*z4\n");
    auto q = e_phi(quad(11), 2);
    CHECK(q.to_lines() == "0: 0\n1: 1\n2: -3\n");
}

TEST_CASE("basis enumeration") {
    CHECK(eisenstein_basis(725, 5).size() == 6);
    CHECK(eisenstein_basis(121, 11).size() == 9);
    CHECK(eisenstein_basis(234, 3).size() == 4);
    CHECK_THROWS_AS(eisenstein_basis(10, 3), ParameterError);
    CHECK_THROWS_AS(eisenstein_basis(75 * 3, 5), ParameterError);
    CHECK(square_part_prime(725) == 5);
    CHECK(square_part_prime(7 * 7 * 11 * 11) == 0);
    CHECK(square_part_prime(30) == 0);
    for (auto& P : eisenstein_basis(725, 5)) CHECK(P.M * P.L == 29);
}

TEST_CASE("twisted special values") {
    auto phi = quad(11);
    auto P = EisensteinParams::make(phi, 121, 1, 1);
    DirichletCharacter chi, chim;
    for (auto& ch : primitive_characters(7)) {
        if (ch.order() == 3 && chi.is_trivial()) chi = ch;
        if (ch.is_quadratic()) chim = ch;
    }
    REQUIRE(chi.order() == 3);
    REQUIRE(chi_in_XS(chi, 121));
    CHECK(lambda_twisted(P, chi * chim).is_zero());
    auto full = lambda_twisted(P, chi);
    auto pm = lambda_pm(P, chi);
    CHECK(pm == full / c(2));
    CHECK(!pm.is_zero());
    CHECK_THROWS_AS(lambda_twisted(P, quad(11)), DomainError);
    CHECK_THROWS_AS(lambda_pm(P, chim), DomainError);
    CHECK_THROWS_AS(lambda_pm(P, chi * chim), DomainError);
}

TEST_CASE("special values vanish for even chi*phi^-1") {
    auto phi = quad(5);
    auto P = EisensteinParams::make(phi, 725, 29, 1);
    for (auto& chi : primitive_characters(7)) {
        if ((chi * phi.inverse()).is_even()) CHECK(lambda_twisted(P, chi).is_zero());
    }
}

TEST_CASE("special values under scaling pick up chi(d)") {
    auto phi = DirichletCharacter::from_label("5.4.1");
    auto A = EisensteinParams::make(phi, 125, 1, 1);
    auto B = EisensteinParams::make(phi, 125, 5, 1);
    REQUIRE(B.scale() == 5);
    for (auto& chi : primitive_characters(7)) {
        CAPTURE(chi.label());
        CHECK(lambda_twisted(B, chi) == chi.value(5) * lambda_twisted(A, chi));
    }
}

TEST_CASE("ordinary factor kills the special value") {
    auto phi = quad(5);
    auto P = EisensteinParams::make(phi, 25 * 29, 1, 29);
    for (auto& chi : primitive_characters(7)) {
        if (!chi_in_XS(chi, P.N) || chi.is_even() == phi.is_even()) continue;
        if (chi.value(29) * phi.inverse().value(29) == c(1)) CHECK(lambda_pm(P, chi).is_zero());
    }
}
