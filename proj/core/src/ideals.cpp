#include "eiscong/ideals.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace eiscong {

namespace {

using Elem = FiniteField::Elem;

std::int64_t centered(std::uint64_t c, std::uint64_t l) {
    return c <= l / 2 ? static_cast<std::int64_t>(c) : static_cast<std::int64_t>(c) - static_cast<std::int64_t>(l);
}

// " + 3q", " - q", " - 2"; empty for 0.
std::string signed_term(std::int64_t c, const std::string& sym) {
    if (c == 0) return "";
    std::string out = c < 0 ? " - " : " + ";
    std::uint64_t mag = static_cast<std::uint64_t>(c < 0 ? -c : c);
    if (sym.empty()) return out + std::to_string(mag);
    return out + (mag == 1 ? sym : std::to_string(mag) + sym);
}

std::string poly_text(const std::vector<std::uint64_t>& c, std::uint64_t l, const std::string& v) {
    std::string s;
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::string sym = j == 0 ? "" : (j == 1 ? v : v + "^" + std::to_string(j));
        s += signed_term(centered(c[j], l), sym);
    }
    if (s.empty()) return "0";
    if (s.rfind(" + ", 0) == 0) return s.substr(3);
    return "-" + s.substr(3);
}

std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t l) {
    for (std::uint64_t x = 0; x < l; ++x)
        if (mulmod(x, x, l) == a % l) return x;
    return std::nullopt;
}

std::string t_text(const std::vector<std::vector<std::uint64_t>>& co, std::uint64_t l, const std::string& v) {
    std::size_t d = co.size() - 1;
    std::string T = "T_" + v;
    auto nonzero = [](const std::vector<std::uint64_t>& c) {
        return std::any_of(c.begin(), c.end(), [](std::uint64_t x) { return x != 0; });
    };
    if (d == 1) {
        std::string s = T;
        std::vector<std::uint64_t> c0 = co[0];
        c0.resize(2, 0);
        s += signed_term(centered(c0[0], l), "");
        s += signed_term(centered(c0[1], l), v);
        return s;
    }
    bool middle_zero = true;
    for (std::size_t i = 1; i < d; ++i) middle_zero = middle_zero && !nonzero(co[i]);
    if (d == 2 && middle_zero) {
        std::vector<std::uint64_t> p = co[0];
        p.resize(3, 0);
        auto x = sqrt_mod(p[0], l), y = sqrt_mod(p[2], l);
        if (x && y && *x != 0 && *y != 0) {
            std::int64_t cx = centered(*x, l);
            std::uint64_t yy = *y;
            if (mulmod(mulmod(2, *x, l), yy, l) != p[1]) yy = (l - yy) % l;
            if (mulmod(mulmod(2, *x, l), yy, l) == p[1]) {
                std::int64_t cy = centered(yy, l);
                if (cx < 0) {
                    cx = -cx;
                    cy = -cy;
                }
                return T + "^2 + (" + std::to_string(cx) + signed_term(cy, v) + ")^2";
            }
        }
    }
    std::string s = T + "^" + std::to_string(d);
    for (std::size_t i = d; i-- > 0;) {
        if (!nonzero(co[i])) continue;
        std::string tp = i == 0 ? "" : (i == 1 ? T : T + "^" + std::to_string(i));
        std::size_t terms = std::count_if(co[i].begin(), co[i].end(), [](std::uint64_t x) { return x != 0; });
        if (terms == 1) {
            std::size_t j = 0;
            while (co[i][j] == 0) ++j;
            std::string sym = j == 0 ? "" : (j == 1 ? v : v + "^" + std::to_string(j));
            std::int64_t c = centered(co[i][j], l);
            std::uint64_t mag = static_cast<std::uint64_t>(c < 0 ? -c : c);
            std::string body = sym + tp;
            s += std::string(c < 0 ? " - " : " + ") + (mag == 1 && !body.empty() ? "" : std::to_string(mag)) + body;
        } else {
            s += " + (" + poly_text(co[i], l, v) + ")" + tp;
        }
    }
    return s;
}

const char* const kVariables[] = {"r", "s", "q", "t", "u", "w", "x", "y", "z"};

std::string variable_name(std::size_t i) {
    if (i < std::size(kVariables)) return kVariables[i];
    return "r" + std::to_string(i);
}

std::uint64_t pow_u(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

Int cuspidal_order(const EisensteinParams& params) {
    std::uint64_t m = lcm_u(params.f, params.phi.order());
    CycElement b = beta_tilde(params).embed(canonical_conductor(m));
    return ideal_index(numerator_ideal(b));
}

std::set<std::uint64_t> s1_set(std::uint64_t N) {
    std::set<std::uint64_t> out;
    for (auto q : factor(N).primes())
        for (auto r : factor(q * q - 1).primes()) out.insert(r);
    return out;
}

std::set<std::uint64_t> s2_set(std::uint64_t N, std::uint64_t p) {
    if (!is_prime(p)) throw DomainError("s2_set: " + std::to_string(p) + " is not prime");
    if (N % (p * p) != 0) throw DomainError("s2_set: " + std::to_string(p) + "^2 does not divide " + std::to_string(N));
    std::set<std::uint64_t> out;
    for (auto& phi : primitive_characters(p)) {
        if (phi.is_trivial()) continue;
        DirichletCharacter xi = xi_character(phi);
        CycElement x = CycElement(static_cast<long>(6 * p)) * bernoulli_B2(xi.inverse());
        Rational n = x.norm();
        for (auto& r : prime_divisors(abs(n.get_num()))) out.insert(r.get_ui());
    }
    return out;
}

CandidateReport candidate_characteristics(std::uint64_t N, std::uint64_t p) {
    if (!is_p_good(N, p)) throw DomainError(std::to_string(N) + " is not " + std::to_string(p) + "-good");
    CandidateReport r;
    r.N = N;
    r.p = p;
    r.S1 = s1_set(N);
    r.S2 = s2_set(N, p);
    for (std::uint64_t b : {std::uint64_t{2}, std::uint64_t{3}, p}) r.provenance[b].push_back("6p");
    for (auto s : r.S1) r.provenance[s].push_back("S1");
    for (auto s : r.S2) r.provenance[s].push_back("S2");
    for (auto& [q, src] : r.provenance) {
        src.erase(std::unique(src.begin(), src.end()), src.end());
        r.all.insert(q);
    }
    return r;
}

std::string CandidateReport::to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto q : all) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(q);
    }
    return s + "}";
}

std::string CandidateReport::to_json() const {
    nlohmann::ordered_json j;
    j["level"] = N;
    j["p"] = p;
    j["S1"] = std::vector<std::uint64_t>(S1.begin(), S1.end());
    j["S2"] = std::vector<std::uint64_t>(S2.begin(), S2.end());
    j["candidates"] = nlohmann::ordered_json::array();
    for (auto& [q, src] : provenance) j["candidates"].push_back({{"prime", q}, {"sources", src}});
    return j.dump(2);
}

ResidualCharacter ResidualCharacter::make(const DirichletCharacter& phi, std::uint64_t l) {
    if (!is_prime(l)) throw DomainError("residual character: " + std::to_string(l) + " is not prime");
    std::uint64_t k = phi.order();
    while (k % l == 0) k /= l;
    unsigned r = k == 1 ? 1 : static_cast<unsigned>(multiplicative_order(l % k, k));
    auto F = FiniteField::get(l, r);
    auto roots = finite_field_roots(cyclotomic_polynomial(k), F);
    if (roots.empty()) throw std::logic_error("residual character: no root of unity of order " + std::to_string(k));
    return make(phi, F, roots.front());
}

ResidualCharacter ResidualCharacter::make(const DirichletCharacter& phi, const FFPtr& F, const Elem& zeta_k) {
    ResidualCharacter e;
    e.phi = phi;
    e.l = F->q();
    e.field = F;
    e.zeta = zeta_k;
    std::uint64_t k = phi.order();
    if (!F->is_zero(F->sub(F->pow(zeta_k, Int(static_cast<unsigned long>(k))), F->one())))
        throw DomainError("residual character: image of zeta_" + std::to_string(k) + " is not a k-th root of unity");
    std::uint64_t o = 1;
    for (auto d : divisors(k))
        if (F->pow(zeta_k, Int(static_cast<unsigned long>(d))) == F->one()) {
            o = d;
            break;
        }
    e.order = o;
    return e;
}

unsigned ResidualCharacter::residue_degree() const { return field->degree_of(zeta); }

Elem ResidualCharacter::value(std::int64_t n) const {
    auto ex = phi.exponent(n);
    if (!ex) return field->zero();
    return field->pow(zeta, Int(static_cast<long>(*ex)));
}

Elem ResidualCharacter::inverse_value(std::int64_t n) const {
    Elem v = value(n);
    if (field->is_zero(v)) return v;
    return field->inv(v);
}

std::string IdealDescriptor::residue_field() const { return "F_" + std::to_string(pow_u(l, residue_degree)); }

std::string IdealDescriptor::to_text() const {
    std::string s = "⟨" + std::to_string(l);
    for (auto& u : u_generators) s += ", " + u.text;
    for (auto& t : t_generators) {
        s += ", {" + t.text + "}_{primes " + t.variable + " ≡ ";
        for (std::size_t i = 0; i < t.residues.size(); ++i) s += (i ? ", " : "") + std::to_string(t.residues[i]);
        s += " (mod " + std::to_string(f) + ")}";
    }
    return s + "⟩";
}

std::string IdealDescriptor::to_json() const {
    nlohmann::ordered_json j;
    j["residual_characteristic"] = l;
    j["level"] = N;
    j["character"] = character;
    j["M"] = M;
    j["L"] = L;
    j["residue_field"] = residue_field();
    j["residue_degree"] = residue_degree;
    j["zeta_image"] = zeta_image;
    auto gens = nlohmann::ordered_json::array();
    gens.push_back({{"kind", "l"}, {"text", std::to_string(l)}});
    for (auto& u : u_generators) gens.push_back({{"kind", "U"}, {"prime", u.prime}, {"text", u.text}});
    for (auto& t : t_generators) {
        nlohmann::ordered_json g;
        g["kind"] = "T";
        g["variable"] = t.variable;
        g["residues"] = t.residues;
        g["degree"] = t.degree;
        g["coefficients"] = t.coefficients;
        g["text"] = t.text;
        gens.push_back(std::move(g));
    }
    j["generators"] = std::move(gens);
    j["text"] = to_text();
    return j.dump(2);
}

IdealDescriptor descriptor(const EisensteinParams& params, std::uint64_t l, bool merge_classes) {
    return descriptor(params, ResidualCharacter::make(params.phi, l), merge_classes);
}

IdealDescriptor descriptor(const EisensteinParams& params, const ResidualCharacter& eps, bool merge_classes) {
    std::uint64_t l = eps.l, f = params.f;
    if (!is_prime(l)) throw DomainError("descriptor: " + std::to_string(l) + " is not prime");
    if ((6 * f) % l == 0)
        throw UnsupportedCharacteristic("descriptor: residual characteristic " + std::to_string(l) + " divides 6f = " +
                                        std::to_string(6 * f));
    if (eps.phi != params.phi) throw DomainError("descriptor: residual character does not reduce the series character");
    const FiniteField& F = *eps.field;
    IdealDescriptor D;
    D.l = l;
    D.N = params.N;
    D.f = f;
    D.M = params.M;
    D.L = params.L;
    D.character = params.phi.label();
    D.residue_degree = eps.residue_degree();
    D.zeta_image = "zeta_" + std::to_string(params.phi.order()) + " -> " + F.to_string(eps.zeta);

    for (auto p : factor(f).primes()) D.u_generators.push_back({p, std::nullopt, "U_" + std::to_string(p)});
    std::vector<std::uint64_t> others;
    for (auto q : factor(params.M * params.L).primes())
        if (f % q != 0) others.push_back(q);
    for (auto q : others) {
        Elem v = params.M % q == 0 ? F.mul(F.from_int(Int(static_cast<unsigned long>(q))), eps.inverse_value(static_cast<std::int64_t>(q)))
                                   : eps.value(static_cast<std::int64_t>(q));
        std::string text = "U_" + std::to_string(q);
        if (F.in_prime_field(v))
            text += signed_term(-centered(v[0], l), "");
        else
            text += " - (" + F.to_string(v) + ")";
        D.u_generators.push_back({q, v, text});
    }

    struct Group {
        std::vector<std::vector<std::uint64_t>> key;
        std::vector<std::uint64_t> residues;
    };
    std::vector<Group> groups;
    for (std::uint64_t a = 1; a < f; ++a) {
        if (gcd_u(a, f) != 1) continue;
        Elem z = eps.value(static_cast<std::int64_t>(a));
        unsigned d = F.degree_of(z);
        // prod_j (T - z_j - var * z_j^{-1}) over the Frobenius conjugates z_j of z.
        std::vector<std::vector<Elem>> poly{{F.one()}};
        Elem zj = z;
        for (unsigned j = 0; j < d; ++j, zj = F.frobenius(zj)) {
            std::vector<std::vector<Elem>> next(poly.size() + 1);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                auto& dst_up = next[i + 1];
                if (dst_up.size() < poly[i].size()) dst_up.resize(poly[i].size(), F.zero());
                for (std::size_t k = 0; k < poly[i].size(); ++k) dst_up[k] = F.add(dst_up[k], poly[i][k]);
                auto& dst = next[i];
                if (dst.size() < poly[i].size() + 1) dst.resize(poly[i].size() + 1, F.zero());
                Elem c0 = F.neg(zj), c1 = F.neg(F.inv(zj));
                for (std::size_t k = 0; k < poly[i].size(); ++k) {
                    dst[k] = F.add(dst[k], F.mul(poly[i][k], c0));
                    dst[k + 1] = F.add(dst[k + 1], F.mul(poly[i][k], c1));
                }
            }
            poly = std::move(next);
        }
        std::vector<std::vector<std::uint64_t>> key(poly.size());
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (auto& c : poly[i]) {
                if (!F.in_prime_field(c) && !F.is_zero(c)) throw std::logic_error("descriptor: minimal polynomial not over F_l");
                key[i].push_back(c[0]);
            }
        for (auto& row : key)
            while (!row.empty() && row.back() == 0) row.pop_back();
        auto it = merge_classes ? std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.key == key; })
                                : groups.end();
        if (it == groups.end())
            groups.push_back({key, {a}});
        else
            it->residues.push_back(a);
    }
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.key.size() < b.key.size(); });
    for (std::size_t i = 0; i < groups.size(); ++i) {
        TGenerator t;
        t.variable = variable_name(i);
        t.residues = groups[i].residues;
        t.degree = static_cast<unsigned>(groups[i].key.size() - 1);
        t.coefficients = groups[i].key;
        t.text = t_text(groups[i].key, l, t.variable);
        D.t_generators.push_back(std::move(t));
    }
    return D;
}

}  // namespace eiscong
