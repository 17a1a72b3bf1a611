#include "eiscong/cusps.hpp"

#include <numeric>
#include <sstream>

#include "json.hpp"

namespace eiscong {

namespace {

std::int64_t sgn(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// (g, x, y) with a x + b y = g >= 0.
std::tuple<Int, Int, Int> ext_gcd(const Int& a, const Int& b) {
    Int g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, x, y};
}

std::uint64_t width_of(std::uint64_t N, const Int& c) {
    Int cc = abs(c) * abs(c);
    Int g;
    Int NN(static_cast<unsigned long>(N));
    mpz_gcd(g.get_mpz_t(), cc.get_mpz_t(), NN.get_mpz_t());
    return N / g.get_ui();
}

Cusp make_cusp(std::uint64_t N, std::uint64_t d, std::uint64_t a_class) {
    Cusp x;
    x.level = N;
    x.d = d;
    x.t = gcd_u(d, N / d);
    x.a_class = x.t == 1 ? 0 : a_class % x.t;
    std::uint64_t a = x.t == 1 ? 1 : (x.a_class == 0 ? x.t : x.a_class);
    while (gcd_u(a, d) != 1) a += x.t;
    x.a = a;
    return x;
}

// e = h_x u / (w h_y) where delta_y alpha delta_x^{-1} = [u v; 0 w], alpha = diag(s, 1).
std::uint64_t conjugation_index(std::uint64_t Nx, const Int& a, const Int& c, std::uint64_t Ny, std::uint64_t s) {
    Int sa = a * static_cast<unsigned long>(s);
    Int g;
    mpz_gcd(g.get_mpz_t(), sa.get_mpz_t(), c.get_mpz_t());
    Int a2 = sa / g, c2 = c / g;
    auto [g1, p, q] = ext_gcd(a, c);
    auto [g2, p2, q2] = ext_gcd(a2, c2);
    if (g1 != 1 || g2 != 1) throw std::logic_error("conjugation_index: representative is not primitive");
    Int u = p2 * sa + q2 * c;
    Int w = c2 * static_cast<unsigned long>(s) * q + a2 * p;
    Int lower = a2 * c - c2 * sa;
    if (lower != 0) throw std::logic_error("conjugation_index: conjugate is not upper triangular");
    Int num = Int(static_cast<unsigned long>(width_of(Nx, c))) * u;
    Int den = w * static_cast<unsigned long>(width_of(Ny, c2));
    if (num % den != 0) throw std::logic_error("conjugation_index: non-integral ramification");
    Int e = num / den;
    if (e <= 0) throw std::logic_error("conjugation_index: non-positive ramification");
    return e.get_ui();
}

void require_prime(std::uint64_t l, const char* what) {
    if (!is_prime(l)) throw DomainError(std::string(what) + ": " + std::to_string(l) + " is not prime");
}

}  // namespace

std::string Cusp::to_string() const { return "[" + std::to_string(a) + ";" + std::to_string(d) + "]"; }

Cusp cusp_of(std::uint64_t N, std::int64_t a, std::int64_t c) {
    if (N == 0) throw DomainError("cusp_of: level must be positive");
    if (c < 0) {
        a = -a;
        c = -c;
    }
    if (std::gcd(a, c) != 1) throw DomainError("cusp_of: a and c must be coprime");
    std::uint64_t d = gcd_u(static_cast<std::uint64_t>(c), N);
    std::uint64_t t = gcd_u(d, N / d);
    if (t == 1) return make_cusp(N, d, 0);
    std::int64_t c1 = c / sgn(d);
    std::int64_t cls = mod_floor(mod_floor(a, sgn(t)) * mod_floor(c1, sgn(t)), sgn(t));
    return make_cusp(N, d, static_cast<std::uint64_t>(cls));
}

std::vector<Cusp> enumerate_cusps(std::uint64_t N) {
    std::vector<Cusp> out;
    for (auto d : divisors(N)) {
        std::uint64_t t = gcd_u(d, N / d);
        if (t == 1) {
            out.push_back(make_cusp(N, d, 0));
            continue;
        }
        for (std::uint64_t u = 1; u < t; ++u)
            if (gcd_u(u, t) == 1) out.push_back(make_cusp(N, d, u));
    }
    return out;
}

std::uint64_t cusp_count(std::uint64_t N) {
    std::uint64_t n = 0;
    for (auto d : divisors(N)) n += euler_phi(gcd_u(d, N / d));
    return n;
}

std::uint64_t ram_index(const Cusp& x) { return x.level / (x.d * x.t); }
std::uint64_t width(const Cusp& x) { return width_of(x.level, Int(static_cast<unsigned long>(x.d))); }
std::uint64_t field_torsion(const Cusp& x) { return x.t; }

void CuspDivisor::add(const Cusp& x, const CycElement& c) {
    if (x.level != level) throw DomainError("CuspDivisor: cusp level " + std::to_string(x.level) + " differs from " + std::to_string(level));
    if (c.is_zero()) return;
    auto it = support.find(x);
    if (it == support.end()) {
        support.emplace(x, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) support.erase(it);
}

CycElement CuspDivisor::at(const Cusp& x) const {
    auto it = support.find(x);
    return it == support.end() ? CycElement(0) : it->second;
}

CycElement CuspDivisor::degree() const {
    CycElement s(0);
    for (auto& [x, c] : support) s += c;
    return s;
}

CuspDivisor CuspDivisor::scaled(const CycElement& c) const {
    CuspDivisor out;
    out.level = level;
    for (auto& [x, v] : support) out.add(x, v * c);
    return out;
}

CuspDivisor& CuspDivisor::operator+=(const CuspDivisor& o) {
    if (o.level != level) throw DomainError("CuspDivisor: level mismatch");
    for (auto& [x, c] : o.support) add(x, c);
    return *this;
}

CuspDivisor& CuspDivisor::operator-=(const CuspDivisor& o) {
    if (o.level != level) throw DomainError("CuspDivisor: level mismatch");
    for (auto& [x, c] : o.support) add(x, -c);
    return *this;
}

bool operator==(const CuspDivisor& a, const CuspDivisor& b) {
    if (a.level != b.level || a.support.size() != b.support.size()) return false;
    for (auto& [x, c] : a.support)
        if (b.at(x) != c) return false;
    return true;
}

std::string CuspDivisor::to_string() const {
    std::ostringstream os;
    for (auto& [x, c] : support) os << x.to_string() << '@' << level << " : " << c.to_string() << '\n';
    return os.str();
}

std::string CuspDivisor::to_json() const {
    nlohmann::ordered_json j;
    j["level"] = level;
    j["cusps"] = nlohmann::ordered_json::array();
    for (auto& [x, c] : support) {
        nlohmann::ordered_json e;
        e["a"] = x.a;
        e["b"] = x.b();
        e["d"] = x.d;
        e["t"] = x.t;
        e["coefficient"] = c.to_string();
        j["cusps"].push_back(std::move(e));
    }
    return j.dump(2);
}

CuspDivisor D_divisor(std::uint64_t N, std::uint64_t d, const DirichletCharacter& phi) {
    if (d == 0 || N % d != 0) throw DivisorUndefined("D_divisor: " + std::to_string(d) + " does not divide " + std::to_string(N));
    std::uint64_t t = gcd_u(d, N / d);
    std::uint64_t f = phi.modulus();
    if (t % f != 0)
        throw DivisorUndefined("D_divisor: conductor " + std::to_string(f) + " does not divide gcd(d, N/d) = " + std::to_string(t) +
                               " for N = " + std::to_string(N) + ", d = " + std::to_string(d));
    std::uint64_t b = 2;
    while (gcd_u(b, N) != 1) ++b;
    CuspDivisor D;
    D.level = N;
    for (auto& x : enumerate_cusps(N)) {
        if (x.d != d) continue;
        CycElement c = phi.value(sgn(x.a));
        // Second representative [a'; d b] of the same cusp.
        std::int64_t ap = sgn(x.a);
        if (t > 1) {
            std::int64_t binv = static_cast<std::int64_t>(invmod(b % t, t));
            ap = mod_floor(sgn(x.a) * binv, sgn(t));
            if (ap == 0) ap = sgn(t);
            while (std::gcd(ap, sgn(d * b)) != 1) ap += sgn(t);
        }
        Cusp y = cusp_of(N, ap, sgn(d * b));
        if (!(y == x) || phi.value(ap * sgn(b)) != c)
            throw std::logic_error("D_divisor: coefficient depends on the representative of " + x.to_string());
        D.add(x, c);
    }
    return D;
}

Cusp image_pi_paren(const Cusp& x, std::uint64_t l) {
    if (x.level % l != 0) throw DomainError("image_pi_paren: " + std::to_string(l) + " does not divide the level");
    return cusp_of(x.level / l, sgn(x.a), sgn(x.d));
}

Cusp image_pi_l(const Cusp& x, std::uint64_t l) {
    if (x.level % l != 0) throw DomainError("image_pi_l: " + std::to_string(l) + " does not divide the level");
    std::uint64_t g = gcd_u(l * x.a, x.d);
    return cusp_of(x.level / l, sgn(l * x.a / g), sgn(x.d / g));
}

std::uint64_t ramification_pi_paren(const Cusp& x, std::uint64_t l) {
    return conjugation_index(x.level, Int(static_cast<unsigned long>(x.a)), Int(static_cast<unsigned long>(x.d)), x.level / l, 1);
}

std::uint64_t ramification_pi_l(const Cusp& x, std::uint64_t l) {
    return conjugation_index(x.level, Int(static_cast<unsigned long>(x.a)), Int(static_cast<unsigned long>(x.d)), x.level / l, l);
}

CuspDivisor pullback_pi_paren(const CuspDivisor& D, std::uint64_t l) {
    require_prime(l, "pullback_pi_paren");
    CuspDivisor out;
    out.level = D.level * l;
    for (auto& x : enumerate_cusps(out.level)) {
        CycElement c = D.at(image_pi_paren(x, l));
        if (c.is_zero()) continue;
        out.add(x, c * CycElement(static_cast<long>(ramification_pi_paren(x, l))));
    }
    return out;
}

CuspDivisor pullback_pi_l(const CuspDivisor& D, std::uint64_t l) {
    require_prime(l, "pullback_pi_l");
    CuspDivisor out;
    out.level = D.level * l;
    for (auto& x : enumerate_cusps(out.level)) {
        CycElement c = D.at(image_pi_l(x, l));
        if (c.is_zero()) continue;
        out.add(x, c * CycElement(static_cast<long>(ramification_pi_l(x, l))));
    }
    return out;
}

void DSum::add(std::uint64_t d, const CycElement& c) {
    if (c.is_zero()) return;
    auto it = terms.find(d);
    if (it == terms.end()) {
        terms.emplace(d, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

CuspDivisor DSum::expand(const DirichletCharacter& phi) const {
    CuspDivisor out;
    out.level = level;
    for (auto& [d, c] : terms) out += D_divisor(level, d, phi).scaled(c);
    return out;
}

DSum table_pullback_paren(const DSum& S, std::uint64_t l, const DirichletCharacter& phi) {
    require_prime(l, "table_pullback_paren");
    DSum out;
    out.level = S.level * l;
    CycElement L(static_cast<long>(l)), fl = phi.value(sgn(l));
    for (auto& [d, c] : S.terms) {
        unsigned nd = valuation(d, l), nAd = valuation(S.level / d, l);
        if (nAd == 0) {
            out.add(d, nd == 0 ? c * L : c);
            out.add(d * l, c * fl);
        } else {
            out.add(d, nd <= nAd ? c * L : c);
        }
    }
    return out;
}

DSum table_pullback_l(const DSum& S, std::uint64_t l, const DirichletCharacter& phi) {
    require_prime(l, "table_pullback_l");
    DSum out;
    out.level = S.level * l;
    CycElement L(static_cast<long>(l)), fl = phi.value(sgn(l));
    for (auto& [d, c] : S.terms) {
        unsigned nd = valuation(d, l), nAd = valuation(S.level / d, l);
        if (nd == 0) {
            out.add(d * l, nAd == 0 ? c * L : c);
            out.add(d, c * fl);
        } else {
            out.add(d * l, nAd <= nd ? c * L : c);
        }
    }
    return out;
}

namespace {

// Level-raising step shared by beta and gamma: indices 0..n -> 0..n+1.
std::vector<CycElement> raise_level(const std::vector<CycElement>& v, std::uint64_t q, const DirichletCharacter& phi) {
    std::size_t n = v.size() - 1;
    std::vector<CycElement> out(n + 2);
    CycElement Q(static_cast<long>(q));
    for (std::size_t i = 0; i <= n; ++i) out[i] = i <= n / 2 ? Q * v[i] : v[i];
    out[n + 1] = phi.value(sgn(q)) * v[n];
    return out;
}

// Slash step shared by alpha and beta: indices 0..k -> 0..k+1 at exponent n -> n+1.
std::vector<CycElement> slash_step(const std::vector<CycElement>& v, std::size_t n, std::uint64_t q, const DirichletCharacter& phi) {
    std::size_t k = v.size();
    std::vector<CycElement> out(k + 1);
    CycElement Q(static_cast<long>(q));
    out[0] = phi.value(sgn(q)) * v[0];
    for (std::size_t i = 1; i <= k; ++i) out[i] = i <= (n + 1) / 2 ? v[i - 1] : Q * v[i - 1];
    return out;
}

}  // namespace

std::vector<CycElement> alpha_coefficients(std::uint64_t l, const DirichletCharacter& phi, unsigned nuM, unsigned nuN) {
    if (nuM == 0 || nuN < nuM) throw DomainError("alpha_coefficients: need 1 <= nu_l(M) <= nu_l(N)");
    std::vector<CycElement> a{CycElement(1)};
    for (unsigned n = 1; n < nuM; ++n) a = slash_step(a, n, l, phi);
    CycElement L(static_cast<long>(l));
    for (unsigned n = nuM; n < nuN; ++n)
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i <= n / 2) a[i] *= L;
    return a;
}

std::vector<CycElement> beta_coefficients(std::uint64_t q, const DirichletCharacter& phi, unsigned nuL, unsigned nuN) {
    if (nuL == 0 || nuN < nuL) throw DomainError("beta_coefficients: need 1 <= nu_q(L) <= nu_q(N)");
    auto e = phi.exponent(sgn(q));
    bool in_S = e && (2 * *e) % sgn(phi.order()) == 0;
    CycElement Q(static_cast<long>(q));
    std::vector<CycElement> b(2);
    if (in_S) {
        b[0] = CycElement(1);
        b[1] = -phi.value(sgn(q));
    } else {
        b[0] = Q - CycElement(1);
        b[1] = phi.value(sgn(q)) - Q * phi.inverse().value(sgn(q));
    }
    for (unsigned n = 1; n < nuL; ++n) b = slash_step(b, n, q, phi);
    for (unsigned n = nuL; n < nuN; ++n) b = raise_level(b, q, phi);
    return b;
}

std::vector<CycElement> gamma_coefficients(std::uint64_t t, const DirichletCharacter& phi, unsigned nuN) {
    std::vector<CycElement> g{CycElement(1)};
    for (unsigned n = 0; n < nuN; ++n) g = raise_level(g, t, phi);
    return g;
}

DirichletCharacter xi_character(const DirichletCharacter& phi) { return phi.pow(2).primitive_part(); }

namespace {

CycElement euler_xi(const DirichletCharacter& xi, std::uint64_t p) {
    return CycElement(1) - xi.value(sgn(p)) / CycElement(static_cast<long>(p * p));
}

}  // namespace

CycElement beta_phi(const DirichletCharacter& phi) {
    if (phi.is_trivial() || !phi.is_primitive()) throw DomainError("beta_phi: character must be primitive and nontrivial");
    std::uint64_t f = phi.modulus();
    DirichletCharacter xi = xi_character(phi);
    std::uint64_t n = xi.modulus();
    DirichletCharacter xii = xi.inverse();
    CycElement v = CycElement(Rational(Int(static_cast<unsigned long>(f * f * f)), Int(static_cast<unsigned long>(4 * n))));
    v *= gauss_sum(phi.inverse()) / gauss_sum(xii) * bernoulli_B2(xii);
    for (auto p : factor(f).primes()) v *= euler_xi(xi, p);
    return v;
}

unsigned delta_p(const EisensteinParams& params, std::uint64_t p) {
    return valuation(params.M, p) == 0 && valuation(params.N / (params.f * params.f), p) >= 1 ? 1 : 0;
}

CycElement beta_constant(const EisensteinParams& params) {
    const auto& phi = params.phi;
    std::uint64_t f = params.f;
    DirichletCharacter xi = xi_character(phi);
    std::uint64_t n = xi.modulus();
    DirichletCharacter xii = xi.inverse();
    Int phiT2 = 1;
    for (auto q : params.S_phi) phiT2 *= static_cast<unsigned long>(q - 1);
    Int num = Int(static_cast<unsigned long>(f * f * f)) * static_cast<unsigned long>(params.T1) * phiT2;
    for (auto p : factor(f).primes()) {
        unsigned e = valuation(params.M, p) + delta_p(params, p);
        for (unsigned i = 0; i < e; ++i) num *= static_cast<unsigned long>(p);
    }
    CycElement v = CycElement(Rational(num, Int(static_cast<unsigned long>(4 * n))));
    v *= gauss_sum(phi.inverse()) / gauss_sum(xii) * bernoulli_B2(xii);
    for (auto p : factor(f * params.T1).primes()) v *= euler_xi(xi, p);
    return v;
}

CycElement beta_tilde(const EisensteinParams& params) {
    return beta_constant(params) * CycElement(static_cast<long>(params.f * params.T1));
}

DSum closed_form_dsum(const EisensteinParams& params, const CoefficientMutation* mutation) {
    const auto& phi = params.phi;
    std::uint64_t N = params.N, f = params.f;
    std::uint64_t base = f;
    for (auto p : factor(f).primes())
        for (unsigned i = 0; i < valuation(params.M, p); ++i) base *= p;
    std::vector<std::pair<std::uint64_t, CycElement>> terms{{base, CycElement(1)}};
    auto fold = [&](std::uint64_t r, std::vector<CycElement> coeffs, char family) {
        if (mutation && mutation->family == family && mutation->prime == r && mutation->index < coeffs.size())
            coeffs[mutation->index] = -coeffs[mutation->index];
        std::vector<std::pair<std::uint64_t, CycElement>> next;
        for (auto& [d, c] : terms) {
            std::uint64_t rp = 1;
            for (std::size_t i = 0; i < coeffs.size(); ++i, rp *= r) next.emplace_back(d * rp, c * coeffs[i]);
        }
        terms = std::move(next);
    };
    for (auto l : params.critical_primes()) fold(l, alpha_coefficients(l, phi, valuation(params.M, l), valuation(N, l)), 'a');
    for (auto q : params.ordinary_primes()) fold(q, beta_coefficients(q, phi, valuation(params.L, q), valuation(N, q)), 'b');
    std::uint64_t fML = f * params.M * params.L;
    for (auto t : factor(N / (f * fML)).primes()) {
        if (fML % t == 0) continue;
        fold(t, gamma_coefficients(t, phi, valuation(N, t)), 'g');
    }
    DSum S;
    S.level = N;
    for (auto& [d, c] : terms) S.add(d, c);
    return S;
}

CuspDivisor closed_form_divisor(const EisensteinParams& params, const CoefficientMutation* mutation) {
    return closed_form_dsum(params, mutation).expand(params.phi);
}

CuspDivisor boundary_divisor(const EisensteinParams& params) {
    const auto& phi = params.phi;
    std::uint64_t f = params.f;
    CuspDivisor D = D_divisor(f * f, f, phi);
    for (auto l : params.critical_primes()) {
        CycElement c = phi.value(sgn(l)) / CycElement(static_cast<long>(l));
        D = pullback_pi_paren(D, l) - pullback_pi_l(D, l).scaled(c);
    }
    for (auto q : params.ordinary_primes()) {
        CycElement c = phi.inverse().value(sgn(q));
        D = pullback_pi_paren(D, q) - pullback_pi_l(D, q).scaled(c);
    }
    for (auto [p, e] : factor(params.scale()).factors)
        for (unsigned i = 0; i < e; ++i) D = pullback_pi_l(D, p);
    for (auto [p, e] : factor(params.N / params.built_level()).factors)
        for (unsigned i = 0; i < e; ++i) D = pullback_pi_paren(D, p);
    return D.scaled(beta_phi(phi));
}

BoundaryReport verify_boundary(const EisensteinParams& params, const CoefficientMutation* mutation) {
    BoundaryReport r;
    CuspDivisor lhs = boundary_divisor(params);
    CuspDivisor rhs = closed_form_divisor(params, mutation).scaled(beta_constant(params));
    for (auto& x : enumerate_cusps(params.N)) {
        CycElement a = lhs.at(x), b = rhs.at(x);
        if (a != b) {
            r.mismatch = x;
            r.recursion_value = a;
            r.closed_value = b;
            r.message = params.name() + ": mismatch at " + x.to_string() + "@" + std::to_string(params.N) + ": recursion " +
                        a.to_string() + ", closed form " + b.to_string();
            return r;
        }
    }
    r.ok = true;
    r.message = params.name() + ": boundary divisor matches on " + std::to_string(lhs.support.size()) + " cusps";
    return r;
}

}  // namespace eiscong
