#include "eiscong/eisenstein.hpp"

#include <algorithm>
#include <sstream>

namespace eiscong {

namespace {

std::int64_t sgn(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void require_prime(std::uint64_t l, const char* what) {
    if (!is_prime(l)) throw DomainError(std::string(what) + ": " + std::to_string(l) + " is not prime");
}

QExpansion refine(const QExpansion& g, std::uint64_t l, const CycElement& c) {
    QExpansion out = g;
    out.level = g.level * l;
    for (std::size_t n = l; n <= g.precision; n += l) out.coeffs[n - 1] -= c * g.coeffs[n / l - 1];
    out.a0 = g.a0 - c * g.a0;
    return out;
}

std::string coefficient_term(const CycElement& c, std::size_t n, bool first) {
    std::ostringstream os;
    bool neg = false;
    std::string body;
    if (c.is_rational()) {
        Rational r = c.to_rational();
        neg = r < 0;
        Rational a = abs(r);
        if (a != 1 || n == 0) body = a.get_den() == 1 ? a.get_str() : "(" + a.get_str() + ")";
    } else {
        body = "(" + c.to_string() + ")";
    }
    if (first)
        os << (neg ? "-" : "");
    else
        os << (neg ? " - " : " + ");
    os << body;
    if (n >= 1) os << 'q';
    if (n >= 2) os << '^' << n;
    return os.str();
}

}  // namespace

const CycElement& QExpansion::operator[](std::size_t n) const {
    if (n == 0) return a0;
    if (n > precision) throw DomainError("QExpansion: coefficient " + std::to_string(n) + " beyond precision " + std::to_string(precision));
    return coeffs[n - 1];
}

QExpansion QExpansion::truncated(std::size_t B) const {
    QExpansion out = *this;
    if (B < precision) {
        out.precision = B;
        out.coeffs.resize(B);
    }
    return out;
}

QExpansion QExpansion::scaled(const CycElement& c) const {
    QExpansion out = *this;
    for (auto& a : out.coeffs) a *= c;
    out.a0 *= c;
    return out;
}

std::uint64_t QExpansion::coefficient_conductor() const {
    std::uint64_t m = a0.conductor();
    for (auto& a : coeffs) m = lcm_u(m, a.conductor());
    return canonical_conductor(m);
}

std::string QExpansion::to_string() const {
    std::string s;
    bool first = true;
    if (!a0.is_zero()) {
        s += coefficient_term(a0, 0, true);
        first = false;
    }
    for (std::size_t n = 1; n <= precision; ++n) {
        if (coeffs[n - 1].is_zero()) continue;
        s += coefficient_term(coeffs[n - 1], n, first);
        first = false;
    }
    std::string tail = "O(q^" + std::to_string(precision + 1) + ")";
    return first ? tail : s + " + " + tail;
}

std::string QExpansion::to_lines() const {
    std::ostringstream os;
    os << "0: " << a0.to_string() << '\n';
    for (std::size_t n = 1; n <= precision; ++n) os << n << ": " << coeffs[n - 1].to_string() << '\n';
    return os.str();
}

bool equal_to_precision(const QExpansion& a, const QExpansion& b) {
    if (a.a0 != b.a0) return false;
    std::size_t P = std::min(a.precision, b.precision);
    for (std::size_t n = 1; n <= P; ++n)
        if (a.coeffs[n - 1] != b.coeffs[n - 1]) return false;
    return true;
}

EisensteinParams EisensteinParams::make(const DirichletCharacter& phi, std::uint64_t N, std::uint64_t M, std::uint64_t L) {
    if (phi.is_trivial()) throw ParameterError("trivial character: rational Eisenstein series are not supported");
    if (!phi.is_primitive())
        throw ParameterError("character " + phi.label() + " is not primitive (conductor " + std::to_string(phi.conductor()) + ")");
    if (N == 0 || M == 0 || L == 0) throw ParameterError("N, M and L must be positive");
    EisensteinParams p;
    p.phi = phi;
    p.N = N;
    p.M = M;
    p.L = L;
    p.f = phi.modulus();
    std::uint64_t f = p.f;
    unsigned __int128 need = static_cast<unsigned __int128>(f) * f * M * L;
    if (need > N || N % static_cast<std::uint64_t>(need) != 0)
        throw ParameterError("f^2*M*L = " + std::to_string(f) + "^2*" + std::to_string(M) + "*" + std::to_string(L) +
                             " does not divide N = " + std::to_string(N));
    if (gcd_u(f * M, L) != 1) throw ParameterError("gcd(f*M, L) = " + std::to_string(gcd_u(f * M, L)) + " is not 1");
    std::uint64_t rest = N / (f * f);
    for (auto [q, e] : factor(rest).factors) {
        if (f % q == 0) {
            if (e > 1 && valuation(M, q) != e)
                throw ParameterError("nu_" + std::to_string(q) + "(N/f^2) = " + std::to_string(e) + " > 1 requires nu_" +
                                     std::to_string(q) + "(M) = " + std::to_string(e));
        } else if (e > 1) {
            throw ParameterError("N/f^2 = " + std::to_string(rest) + " has a square factor " + std::to_string(q) +
                                 "^" + std::to_string(e) + " prime to f");
        }
    }
    for (auto l : factor(M).primes())
        if (f % l != 0) p.T1 *= l;
    for (auto q : factor(L).primes()) {
        p.T2 *= q;
        auto e = phi.exponent(sgn(q));
        if (e && (2 * *e) % sgn(phi.order()) == 0) {
            p.S_phi.push_back(q);
            p.T2phi *= q;
        }
    }
    return p;
}

std::vector<std::uint64_t> EisensteinParams::critical_primes() const { return factor(T1).primes(); }
std::vector<std::uint64_t> EisensteinParams::ordinary_primes() const { return factor(T2).primes(); }

std::string EisensteinParams::refinement_name() const {
    std::vector<std::pair<std::uint64_t, bool>> all;
    for (auto l : critical_primes()) all.emplace_back(l, true);
    for (auto q : ordinary_primes()) all.emplace_back(q, false);
    std::sort(all.begin(), all.end());
    std::string s;
    for (auto& [r, crit] : all) {
        if (!s.empty()) s += ',';
        s += (crit ? "crit_" : "ord_") + std::to_string(r);
    }
    return s;
}

std::string EisensteinParams::name() const {
    return "E[" + phi.label() + ",M=" + std::to_string(M) + ",L=" + std::to_string(L) + "]";
}

QExpansion e_phi(const DirichletCharacter& phi, std::size_t B) {
    if (phi.is_trivial()) throw DomainError("e_phi: trivial character: rational Eisenstein series are not supported");
    if (!phi.is_primitive()) throw DomainError("e_phi: character must be primitive");
    std::uint64_t f = phi.modulus(), k = phi.order();
    std::vector<std::int64_t> ex(f);
    for (std::uint64_t a = 0; a < f; ++a) ex[a] = phi.exponent(sgn(a)).value_or(-1);
    std::vector<std::int64_t> acc(B * k, 0);
    for (std::size_t b = 1; b <= B; ++b) {
        std::int64_t eb = ex[b % f];
        if (eb < 0) continue;
        for (std::size_t c = 1; b * c <= B; ++c) {
            std::int64_t ec = ex[c % f];
            if (ec < 0) continue;
            std::size_t slot = static_cast<std::size_t>(mod_floor(ec - eb, sgn(k)));
            acc[(b * c - 1) * k + slot] += static_cast<std::int64_t>(b);
        }
    }
    QExpansion out;
    out.level = f * f;
    out.precision = B;
    out.a0 = CycElement::zero(k);
    out.coeffs.reserve(B);
    for (std::size_t n = 1; n <= B; ++n) {
        std::vector<Int> counts(k);
        for (std::size_t j = 0; j < k; ++j) counts[j] = static_cast<long>(acc[(n - 1) * k + j]);
        out.coeffs.push_back(CycElement::from_cyclic(k, std::move(counts)));
    }
    return out;
}

QExpansion refine_critical(const QExpansion& g, std::uint64_t l, const DirichletCharacter& phi) {
    require_prime(l, "refine_critical");
    if (phi.modulus() % l == 0) return g;
    if (g.level % l == 0) throw DomainError("refine_critical: " + std::to_string(l) + " already divides the level");
    return refine(g, l, phi.value(sgn(l)));
}

QExpansion refine_ordinary(const QExpansion& g, std::uint64_t q, const DirichletCharacter& phi) {
    require_prime(q, "refine_ordinary");
    if (phi.modulus() % q == 0) return g;
    if (g.level % q == 0) throw DomainError("refine_ordinary: " + std::to_string(q) + " already divides the level");
    return refine(g, q, CycElement(static_cast<long>(q)) * phi.inverse().value(sgn(q)));
}

QExpansion slash_scale(const QExpansion& g, std::uint64_t d) {
    if (d == 0) throw DomainError("slash_scale: d must be positive");
    if (d == 1) return g;
    QExpansion out;
    out.level = g.level * d;
    out.precision = g.precision * d;
    CycElement dd(static_cast<long>(d));
    CycElement z = g.a0 * CycElement(0);
    out.coeffs.assign(out.precision, z);
    for (std::size_t n = 1; n <= g.precision; ++n) out.coeffs[n * d - 1] = dd * g.coeffs[n - 1];
    out.a0 = dd * g.a0;
    return out;
}

QExpansion build_E(const EisensteinParams& params, std::size_t B) {
    QExpansion g = e_phi(params.phi, B);
    for (auto l : params.critical_primes()) g = refine_critical(g, l, params.phi);
    for (auto q : params.ordinary_primes()) g = refine_ordinary(g, q, params.phi);
    g = slash_scale(g, params.scale()).truncated(B);
    g.level = params.N;
    return g;
}

QExpansion hecke_Tl(const QExpansion& g, std::uint64_t l) {
    require_prime(l, "hecke_Tl");
    if (g.level % l == 0) throw DomainError("hecke_Tl: " + std::to_string(l) + " divides the level " + std::to_string(g.level) + "; use hecke_Uq");
    QExpansion out;
    out.level = g.level;
    out.precision = g.precision / l;
    CycElement ll(static_cast<long>(l));
    for (std::size_t n = 1; n <= out.precision; ++n) {
        CycElement v = g.coeffs[n * l - 1];
        if (n % l == 0) v += ll * g.coeffs[n / l - 1];
        out.coeffs.push_back(std::move(v));
    }
    out.a0 = g.a0 + ll * g.a0;
    return out;
}

QExpansion hecke_Uq(const QExpansion& g, std::uint64_t q) {
    require_prime(q, "hecke_Uq");
    if (g.level % q != 0) throw DomainError("hecke_Uq: " + std::to_string(q) + " does not divide the level " + std::to_string(g.level) + "; use hecke_Tl");
    QExpansion out;
    out.level = g.level;
    out.precision = g.precision / q;
    for (std::size_t n = 1; n <= out.precision; ++n) out.coeffs.push_back(g.coeffs[n * q - 1]);
    out.a0 = g.a0;
    return out;
}

std::optional<CycElement> eigenvalue(const QExpansion& image, const QExpansion& g) {
    std::size_t P = std::min(image.precision, g.precision);
    std::optional<CycElement> c;
    for (std::size_t n = 1; n <= P && !c; ++n)
        if (!g.coeffs[n - 1].is_zero()) c = image.coeffs[n - 1] / g.coeffs[n - 1];
    if (!c) {
        if (P == 0) return std::nullopt;
        for (std::size_t n = 1; n <= P; ++n)
            if (!image.coeffs[n - 1].is_zero()) return std::nullopt;
        return CycElement(0);
    }
    for (std::size_t n = 1; n <= P; ++n)
        if (image.coeffs[n - 1] != *c * g.coeffs[n - 1]) return std::nullopt;
    if (image.a0 != *c * g.a0) return std::nullopt;
    return c;
}

CycElement expected_T_eigenvalue(const EisensteinParams& params, std::uint64_t r) {
    if (params.N % r == 0) throw DomainError("expected_T_eigenvalue: " + std::to_string(r) + " divides N");
    return params.phi.value(sgn(r)) + CycElement(static_cast<long>(r)) * params.phi.inverse().value(sgn(r));
}

CycElement expected_U_eigenvalue(const EisensteinParams& params, std::uint64_t q) {
    if (params.N % q != 0) throw DomainError("expected_U_eigenvalue: " + std::to_string(q) + " does not divide N");
    if (params.scale() % q == 0)
        throw DomainError("expected_U_eigenvalue: " + params.name() + " is not a U_" + std::to_string(q) + " eigenform");
    if (params.f % q == 0) return CycElement(0);
    if (params.T1 % q == 0) return CycElement(static_cast<long>(q)) * params.phi.inverse().value(sgn(q));
    if (params.T2 % q == 0) return params.phi.value(sgn(q));
    throw DomainError("expected_U_eigenvalue: " + params.name() + " is not a U_" + std::to_string(q) + " eigenform at level " +
                      std::to_string(params.N));
}

namespace {

CycElement euler_factors(const EisensteinParams& params, const DirichletCharacter& chi) {
    CycElement r(1);
    DirichletCharacter phii = params.phi.inverse();
    for (auto l : params.critical_primes())
        r *= CycElement(1) - chi.value(sgn(l)) * params.phi.value(sgn(l)) / CycElement(static_cast<long>(l));
    for (auto q : params.ordinary_primes()) r *= CycElement(1) - chi.value(sgn(q)) * phii.value(sgn(q));
    return r;
}

void check_twist(const EisensteinParams& params, const DirichletCharacter& chi, const char* what) {
    if (!chi.is_primitive()) throw DomainError(std::string(what) + ": twisting character must be primitive");
    if (gcd_u(chi.modulus(), params.N) != 1)
        throw DomainError(std::string(what) + ": conductor " + std::to_string(chi.modulus()) + " is not prime to N = " +
                          std::to_string(params.N));
}

}  // namespace

CycElement lambda_twisted(const EisensteinParams& params, const DirichletCharacter& chi) {
    check_twist(params, chi, "lambda_twisted");
    DirichletCharacter phii = params.phi.inverse();
    std::uint64_t m = chi.modulus();
    CycElement v = params.phi.value(sgn(m)) / (CycElement(2) * gauss_sum(phii));
    v *= chi.value(sgn(params.f * params.scale()));
    v *= euler_factors(params, chi);
    v *= bernoulli_B1(chi.inverse() * phii) * bernoulli_B1(chi * phii);
    return v;
}

CycElement lambda_pm(const EisensteinParams& params, const DirichletCharacter& chi) {
    check_twist(params, chi, "lambda_pm");
    if (!chi_in_XS(chi, params.N)) throw DomainError("lambda_pm: " + chi.label() + " is not in X_S");
    if (chi.is_even() == params.phi.is_even())
        throw DomainError("lambda_pm: " + chi.label() + " must have parity opposite to phi");
    DirichletCharacter phii = params.phi.inverse();
    std::uint64_t m = chi.modulus();
    CycElement v = params.phi.value(-sgn(m)) * gauss_sum(params.phi) / CycElement(static_cast<long>(params.f));
    v *= chi.value(sgn(params.f * params.scale()));
    v *= euler_factors(params, chi);
    v *= bernoulli_B1(chi.inverse() * phii) * bernoulli_B1(chi * phii) / CycElement(4);
    return v;
}

std::uint64_t square_part_prime(std::uint64_t N) {
    std::uint64_t p = 0;
    for (auto [q, e] : factor(N).factors) {
        if (e == 1) continue;
        if (e != 2 || p != 0) return 0;
        p = q;
    }
    return p;
}

std::vector<EisensteinParams> eisenstein_basis(std::uint64_t N, std::uint64_t p) {
    if (!is_prime(p) || square_part_prime(N) != p)
        throw ParameterError("eisenstein_basis: N = " + std::to_string(N) + " is not of the form " + std::to_string(p) +
                             "^2*N' with N' squarefree and prime to " + std::to_string(p));
    std::uint64_t Np = N / (p * p);
    std::vector<EisensteinParams> out;
    for (auto& phi : primitive_characters(p)) {
        if (phi.is_trivial()) continue;
        for (auto M : divisors(Np)) out.push_back(EisensteinParams::make(phi, N, M, Np / M));
    }
    return out;
}

}  // namespace eiscong
