#include "eiscong/characters.hpp"

#include <numeric>
#include <sstream>

namespace eiscong {

namespace {

constexpr std::uint64_t kModulusCap = 10000;

std::uint64_t crt_lift(std::uint64_t g, std::uint64_t pa, std::uint64_t f) {
    std::uint64_t Q = f / pa;
    if (Q == 1) return g % f;
    std::uint64_t t = mulmod((g + pa - 1) % pa, invmod(Q % pa, pa), pa);
    return (1 + Q * t) % f;
}

std::uint64_t smallest_primitive_root(std::uint64_t p, std::uint64_t pa) {
    std::uint64_t target = euler_phi(pa);
    for (std::uint64_t g = 2; g < pa; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g, pa) == target) return g;
    }
    return 1;
}

void check_modulus(std::uint64_t f) {
    if (f == 0) throw DomainError("character modulus must be positive");
    if (f > kModulusCap) throw DomainError("character modulus above the supported cap");
}

}  // namespace

std::vector<UnitGroupGenerator> unit_group_generators(std::uint64_t f) {
    check_modulus(f);
    std::vector<UnitGroupGenerator> out;
    for (auto& [p, a] : factor(f).factors) {
        std::uint64_t pa = 1;
        for (unsigned i = 0; i < a; ++i) pa *= p;
        if (p == 2) {
            if (a == 1) continue;
            out.push_back({crt_lift(pa - 1, pa, f), 2});
            if (a >= 3) out.push_back({crt_lift(5, pa, f), pa / 4});
        } else {
            out.push_back({crt_lift(smallest_primitive_root(p, pa), pa, f), euler_phi(pa)});
        }
    }
    return out;
}

namespace {

// Table of exponents mod K from generator images e(g_i), walking every unit as a word in the generators.
std::vector<std::int64_t> table_from_generators(std::uint64_t f, std::uint64_t K,
                                                const std::vector<UnitGroupGenerator>& gens,
                                                const std::vector<std::int64_t>& ge) {
    std::vector<std::int64_t> exps(f, -1);
    if (f == 1) {
        exps[0] = 0;
        return exps;
    }
    std::vector<std::uint64_t> j(gens.size(), 0);
    std::uint64_t x = 1 % f;
    std::int64_t e = 0;
    std::int64_t Ki = static_cast<std::int64_t>(K);
    while (true) {
        exps[x] = e;
        std::size_t i = 0;
        for (; i < gens.size(); ++i) {
            if (++j[i] < gens[i].order) {
                x = mulmod(x, gens[i].value, f);
                e = (e + ge[i]) % Ki;
                break;
            }
            j[i] = 0;
            x = mulmod(x, gens[i].value, f);
            e = (e + ge[i]) % Ki;
        }
        if (i == gens.size()) break;
    }
    return exps;
}

}  // namespace

DirichletCharacter::DirichletCharacter() : f_(1), k_(1), exps_{0} {}

DirichletCharacter DirichletCharacter::from_table(std::uint64_t f, std::uint64_t order, std::vector<std::int64_t> exps) {
    check_modulus(f);
    if (exps.size() != f || order == 0) throw DomainError("from_table: malformed exponent table");
    std::int64_t K = static_cast<std::int64_t>(order);
    std::int64_t g = K;
    for (std::uint64_t a = 0; a < f; ++a) {
        if (std::gcd(a, f) != 1 && f > 1) {
            exps[a] = -1;
            continue;
        }
        exps[a] = mod_floor(exps[a], K);
        g = std::gcd(g, exps[a]);
    }
    if (g > 1)
        for (auto& e : exps)
            if (e >= 0) e /= g;
    DirichletCharacter c;
    c.f_ = f;
    c.k_ = static_cast<std::uint64_t>(K / g);
    c.exps_ = std::move(exps);
    return c;
}

DirichletCharacter DirichletCharacter::trivial(std::uint64_t f) {
    return from_table(f, 1, std::vector<std::int64_t>(f, 0));
}

DirichletCharacter DirichletCharacter::from_label(const std::string& label) {
    std::vector<std::int64_t> parts;
    std::stringstream ss(label);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("malformed character label '" + label + "'");
        parts.push_back(std::stoll(tok));
    }
    if (parts.size() < 2) throw DomainError("malformed character label '" + label + "'");
    std::uint64_t f = static_cast<std::uint64_t>(parts[0]);
    std::uint64_t k = static_cast<std::uint64_t>(parts[1]);
    if (f == 0 || k == 0) throw DomainError("malformed character label '" + label + "'");
    auto gens = unit_group_generators(f);
    std::vector<std::int64_t> ge(parts.begin() + 2, parts.end());
    if (gens.empty() && ge.size() == 1 && ge[0] == 0) ge.clear();
    if (ge.size() != gens.size())
        throw DomainError("character label '" + label + "' needs " + std::to_string(gens.size()) + " generator exponents");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (ge[i] < 0 || static_cast<std::uint64_t>(ge[i]) >= k ||
            (static_cast<std::uint64_t>(ge[i]) * gens[i].order) % k != 0)
            throw DomainError("character label '" + label + "' is inconsistent with the unit group");
    }
    auto c = from_table(f, k, table_from_generators(f, k, gens, ge));
    if (c.order() != k) throw DomainError("character label '" + label + "' does not have order " + std::to_string(k));
    return c;
}

std::optional<std::int64_t> DirichletCharacter::exponent(std::int64_t n) const {
    std::int64_t a = mod_floor(n, static_cast<std::int64_t>(f_));
    std::int64_t e = exps_[static_cast<std::size_t>(a)];
    if (e < 0) return std::nullopt;
    return e;
}

CycElement DirichletCharacter::value(std::int64_t n) const {
    auto e = exponent(n);
    if (!e) return CycElement::zero(k_);
    return CycElement::zeta(k_, *e);
}

std::vector<std::int64_t> DirichletCharacter::generator_exponents() const {
    std::vector<std::int64_t> out;
    for (auto& g : unit_group_generators(f_)) out.push_back(*exponent(static_cast<std::int64_t>(g.value)));
    return out;
}

std::string DirichletCharacter::label() const {
    std::ostringstream os;
    os << f_ << '.' << k_;
    auto ge = generator_exponents();
    if (ge.empty()) os << ".0";
    for (auto e : ge) os << '.' << e;
    return os.str();
}

bool DirichletCharacter::is_even() const { return *exponent(-1) == 0; }

std::uint64_t DirichletCharacter::conductor() const {
    for (auto d : divisors(f_)) {
        bool ok = true;
        for (std::uint64_t a = 1; a < f_ && ok; a += d)
            if (exps_[a] > 0) ok = false;
        if (ok) return d;
    }
    return f_;
}

DirichletCharacter DirichletCharacter::primitive_part() const {
    std::uint64_t d = conductor();
    if (d == f_) return *this;
    std::vector<std::int64_t> exps(d, -1);
    for (std::uint64_t b = 0; b < d; ++b) {
        if (std::gcd(b, d) != 1 && d > 1) continue;
        for (std::uint64_t a = b; a < f_ + d; a += d) {
            std::uint64_t am = a % f_;
            if (exps_[am] >= 0) {
                exps[b] = exps_[am];
                break;
            }
        }
    }
    return from_table(d, k_, std::move(exps));
}

DirichletCharacter DirichletCharacter::pow(std::int64_t j) const {
    std::vector<std::int64_t> exps = exps_;
    std::int64_t K = static_cast<std::int64_t>(k_);
    for (auto& e : exps)
        if (e >= 0) e = mod_floor(e * mod_floor(j, K), K);
    return from_table(f_, k_, std::move(exps));
}

DirichletCharacter DirichletCharacter::lift(std::uint64_t F) const {
    if (F % f_ != 0) throw DomainError("lift: modulus must be a multiple");
    std::vector<std::int64_t> exps(F, -1);
    for (std::uint64_t a = 0; a < F; ++a)
        if (std::gcd(a, F) == 1 || F == 1) exps[a] = exps_[a % f_];
    return from_table(F, k_, std::move(exps));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
    std::uint64_t F = lcm_u(f_, o.f_);
    std::uint64_t K = lcm_u(k_, o.k_);
    std::int64_t s1 = static_cast<std::int64_t>(K / k_), s2 = static_cast<std::int64_t>(K / o.k_);
    std::vector<std::int64_t> exps(F, -1);
    for (std::uint64_t a = 0; a < F; ++a) {
        if (std::gcd(a, F) != 1 && F > 1) continue;
        exps[a] = (exps_[a % f_] * s1 + o.exps_[a % o.f_] * s2) % static_cast<std::int64_t>(K);
    }
    return from_table(F, K, std::move(exps));
}

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t f) {
    auto gens = unit_group_generators(f);
    std::uint64_t K = 1;
    for (auto& g : gens) K = lcm_u(K, g.order);
    std::vector<DirichletCharacter> out;
    std::vector<std::uint64_t> a(gens.size(), 0);
    while (true) {
        std::vector<std::int64_t> ge;
        for (std::size_t i = 0; i < gens.size(); ++i) ge.push_back(static_cast<std::int64_t>(a[i] * (K / gens[i].order)));
        out.push_back(DirichletCharacter::from_table(f, K, table_from_generators(f, K, gens, ge)));
        std::size_t i = gens.size();
        while (i > 0) {
            --i;
            if (++a[i] < gens[i].order) break;
            a[i] = 0;
            if (i == 0) return out;
        }
        if (gens.empty()) return out;
    }
}

std::vector<DirichletCharacter> primitive_characters(std::uint64_t f) {
    std::vector<DirichletCharacter> out;
    for (auto& c : enumerate_characters(f))
        if (c.is_primitive()) out.push_back(c);
    return out;
}

CycElement gauss_sum(const DirichletCharacter& chi) {
    if (!chi.is_primitive()) throw DomainError("gauss_sum: character must be primitive");
    std::uint64_t f = chi.modulus();
    if (f == 1) return CycElement(1);
    std::uint64_t m = lcm_u(f, chi.order());
    std::uint64_t sk = m / chi.order(), sf = m / f;
    std::vector<Int> counts(m, Int(0));
    for (std::uint64_t a = 1; a < f; ++a) {
        auto e = chi.exponent(static_cast<std::int64_t>(a));
        if (!e) continue;
        counts[(static_cast<std::uint64_t>(*e) * sk + a * sf) % m] += 1;
    }
    return CycElement::from_cyclic(m, std::move(counts));
}

CycElement bernoulli_B1(const DirichletCharacter& chi) {
    if (chi.is_trivial()) throw DomainError("bernoulli_B1: trivial character");
    std::uint64_t f = chi.modulus(), k = chi.order();
    std::vector<Int> counts(k, Int(0));
    for (std::uint64_t a = 1; a < f; ++a) {
        auto e = chi.exponent(static_cast<std::int64_t>(a));
        if (e) counts[static_cast<std::size_t>(*e)] += static_cast<unsigned long>(a);
    }
    return CycElement::from_cyclic(k, std::move(counts), Int(static_cast<unsigned long>(f)));
}

CycElement bernoulli_B2(const DirichletCharacter& chi) {
    if (chi.is_trivial()) return CycElement(Rational(1, 6));
    std::uint64_t m = chi.modulus(), k = chi.order();
    std::vector<Int> counts(k, Int(0));
    Int mm(static_cast<unsigned long>(m));
    for (std::uint64_t a = 0; a < m; ++a) {
        auto e = chi.exponent(static_cast<std::int64_t>(a));
        if (!e) continue;
        Int ai(static_cast<unsigned long>(a));
        counts[static_cast<std::size_t>(*e)] += 6 * ai * ai - 6 * ai * mm + mm * mm;
    }
    return CycElement::from_cyclic(k, std::move(counts), 6 * mm);
}

bool chi_in_XS(const DirichletCharacter& chi, std::uint64_t N) {
    std::uint64_t c = chi.conductor();
    return is_prime(c) && c % 4 == 3 && !chi.is_quadratic() && !chi.is_trivial() && std::gcd(c, N) == 1;
}

XSParity xs_parity(const DirichletCharacter& chi, std::uint64_t N) {
    if (!chi_in_XS(chi, N)) return XSParity::None;
    return chi.is_even() ? XSParity::Plus : XSParity::Minus;
}

}  // namespace eiscong
