#include "eiscong/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

namespace eiscong {

namespace {

using Elem = FiniteField::Elem;
using Poly = std::vector<Elem>;

std::mutex g_ff_mutex;
std::map<std::pair<std::uint64_t, unsigned>, FFPtr> g_ff_memo;

void ptrim(const FiniteField& F, Poly& p) {
    while (!p.empty() && F.is_zero(p.back())) p.pop_back();
}

int pdeg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly pmonic(const FiniteField& F, Poly p) {
    ptrim(F, p);
    if (p.empty()) return p;
    Elem li = F.inv(p.back());
    for (auto& c : p) c = F.mul(c, li);
    return p;
}

std::pair<Poly, Poly> pdivmod(const FiniteField& F, Poly a, const Poly& b0) {
    Poly b = b0;
    ptrim(F, b);
    ptrim(F, a);
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    Elem li = F.inv(b.back());
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, F.zero());
    while (a.size() >= b.size()) {
        Elem t = F.mul(a.back(), li);
        std::size_t shift = a.size() - b.size();
        q[shift] = t;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = F.sub(a[shift + j], F.mul(t, b[j]));
        a.pop_back();
        ptrim(F, a);
    }
    ptrim(F, q);
    return {q, a};
}

Poly pmod(const FiniteField& F, const Poly& a, const Poly& b) { return pdivmod(F, a, b).second; }

Poly pmul(const FiniteField& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    ptrim(F, r);
    return r;
}

Poly psub(const FiniteField& F, Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), F.zero());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    ptrim(F, a);
    return a;
}

Poly pgcd(const FiniteField& F, Poly a, Poly b) {
    ptrim(F, a);
    ptrim(F, b);
    while (!b.empty()) {
        Poly r = pmod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(F, a);
}

Poly ppowmod(const FiniteField& F, Poly base, const Int& e, const Poly& m) {
    Poly r{F.one()};
    r = pmod(F, r, m);
    base = pmod(F, base, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = pmod(F, pmul(F, r, r), m);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = pmod(F, pmul(F, r, base), m);
    }
    return r;
}

Poly px(const FiniteField& F) { return Poly{F.zero(), F.one()}; }

Poly lift_poly(const FiniteField& F, const std::vector<Int>& poly) {
    Poly p;
    for (auto& c : poly) p.push_back(F.from_int(c));
    ptrim(F, p);
    return p;
}

bool rabin_irreducible(const FiniteField& Fq, const Poly& f, unsigned r) {
    Int q(static_cast<unsigned long>(Fq.q()));
    std::vector<Poly> frob{px(Fq)};
    for (unsigned i = 1; i <= r; ++i) frob.push_back(ppowmod(Fq, frob.back(), q, f));
    if (!psub(Fq, frob[r], px(Fq)).empty()) return false;
    for (auto& [s, e] : factor(r).factors) {
        Poly g = pgcd(Fq, f, psub(Fq, frob[r / s], px(Fq)));
        if (pdeg(g) > 0) return false;
    }
    return true;
}

void split_roots(const FiniteField& F, const Poly& h, std::vector<Elem>& out, std::mt19937_64& rng) {
    int d = pdeg(h);
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(F.neg(F.mul(h[0], F.inv(h[1]))));
        return;
    }
    Int Q = F.size();
    while (true) {
        Poly R;
        for (int i = 0; i < d; ++i) {
            Elem c(F.r());
            for (auto& v : c) v = rng() % F.q();
            R.push_back(c);
        }
        ptrim(F, R);
        if (pdeg(R) < 1) continue;
        Poly w;
        if (F.q() == 2) {
            Poly t = R;
            w = R;
            for (unsigned i = 1; i < F.r(); ++i) {
                t = pmod(F, pmul(F, t, t), h);
                if (w.size() < t.size()) w.resize(t.size(), F.zero());
                for (std::size_t k = 0; k < t.size(); ++k) w[k] = F.add(w[k], t[k]);
                ptrim(F, w);
            }
        } else {
            w = psub(F, ppowmod(F, R, (Q - 1) / 2, h), Poly{F.one()});
        }
        Poly g = pgcd(F, h, w);
        int dg = pdeg(g);
        if (dg > 0 && dg < d) {
            split_roots(F, g, out, rng);
            split_roots(F, pdivmod(F, h, g).first, out, rng);
            return;
        }
    }
}

}  // namespace

std::vector<std::uint64_t> smallest_irreducible(std::uint64_t q, unsigned r) {
    if (!is_prime(q) || q >= (1ULL << 31)) throw DomainError("finite field characteristic must be a prime below 2^31");
    if (r == 0) throw DomainError("extension degree must be positive");
    if (r == 1) return {0, 1};
    auto Fq = FiniteField::get(q, 1);
    for (std::uint64_t idx = 0;; ++idx) {
        std::vector<std::uint64_t> c(r + 1, 0);
        std::uint64_t t = idx;
        for (unsigned i = 0; i < r; ++i) {
            c[i] = t % q;
            t /= q;
        }
        if (t) throw std::logic_error("no irreducible polynomial found");
        c[r] = 1;
        if (c[0] == 0) continue;
        Poly f;
        for (auto v : c) f.push_back(Elem{v});
        if (rabin_irreducible(*Fq, f, r)) return c;
    }
}

FiniteField::FiniteField(std::uint64_t q, unsigned r) : q_(q), r_(r), g_(smallest_irreducible(q, r)) {}

FFPtr FiniteField::get(std::uint64_t q, unsigned r) {
    auto key = std::make_pair(q, r);
    {
        std::lock_guard<std::mutex> lk(g_ff_mutex);
        auto it = g_ff_memo.find(key);
        if (it != g_ff_memo.end()) return it->second;
    }
    auto F = std::make_shared<const FiniteField>(q, r);
    std::lock_guard<std::mutex> lk(g_ff_mutex);
    return g_ff_memo.emplace(key, F).first->second;
}

Int FiniteField::size() const {
    Int s;
    mpz_ui_pow_ui(s.get_mpz_t(), q_, r_);
    return s;
}

Elem FiniteField::one() const {
    Elem e(r_, 0);
    e[0] = 1 % q_;
    return e;
}

Elem FiniteField::generator() const {
    if (r_ == 1) return one();
    Elem e(r_, 0);
    e[1] = 1;
    return e;
}

Elem FiniteField::from_int(const Int& v) const {
    Elem e(r_, 0);
    e[0] = mpz_fdiv_ui(v.get_mpz_t(), q_);
    return e;
}

Elem FiniteField::from_rational(const Rational& v) const {
    std::uint64_t d = mpz_fdiv_ui(v.get_den_mpz_t(), q_);
    if (d == 0) throw UnsupportedPrime("denominator divisible by " + std::to_string(q_));
    Elem e(r_, 0);
    e[0] = mulmod(mpz_fdiv_ui(v.get_num_mpz_t(), q_), invmod(d, q_), q_);
    return e;
}

Elem FiniteField::add(const Elem& a, const Elem& b) const {
    Elem c(r_);
    for (unsigned i = 0; i < r_; ++i) {
        c[i] = a[i] + b[i];
        if (c[i] >= q_) c[i] -= q_;
    }
    return c;
}

Elem FiniteField::sub(const Elem& a, const Elem& b) const {
    Elem c(r_);
    for (unsigned i = 0; i < r_; ++i) c[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + q_ - b[i];
    return c;
}

Elem FiniteField::neg(const Elem& a) const { return sub(zero(), a); }

Elem FiniteField::mul(const Elem& a, const Elem& b) const {
    if (r_ == 1) return Elem{a[0] * b[0] % q_};
    std::vector<std::uint64_t> p(2 * r_ - 1, 0);
    for (unsigned i = 0; i < r_; ++i) {
        if (!a[i]) continue;
        for (unsigned j = 0; j < r_; ++j) p[i + j] = (p[i + j] + a[i] * b[j]) % q_;
    }
    for (std::size_t i = p.size(); i-- > r_;) {
        std::uint64_t t = p[i];
        if (!t) continue;
        for (unsigned j = 0; j < r_; ++j) {
            std::uint64_t s = t * g_[j] % q_;
            std::size_t k = i - r_ + j;
            p[k] = p[k] >= s ? p[k] - s : p[k] + q_ - s;
        }
    }
    p.resize(r_);
    return p;
}

Elem FiniteField::pow(const Elem& a, const Int& e) const {
    Elem r = one();
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (std::size_t i = bits; i-- > 0;) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

Elem FiniteField::inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("finite field inverse of zero");
    return pow(a, size() - 2);
}

bool FiniteField::is_zero(const Elem& a) const {
    for (auto v : a)
        if (v) return false;
    return true;
}

unsigned FiniteField::degree_of(const Elem& a) const {
    Elem cur = a;
    for (unsigned d = 1; d <= r_; ++d) {
        cur = frobenius(cur);
        if (r_ % d == 0 && cur == a) return d;
    }
    return r_;
}

std::string FiniteField::to_string(const Elem& a) const {
    if (r_ == 1) return std::to_string(a[0]);
    std::ostringstream os;
    bool first = true;
    for (unsigned i = r_; i-- > 0;) {
        if (!a[i]) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || a[i] != 1) os << a[i];
        if (i > 0) {
            if (a[i] != 1) os << '*';
            os << 'x';
            if (i > 1) os << '^' << i;
        }
    }
    if (first) os << '0';
    return os.str();
}

Elem FiniteField::element_at(std::uint64_t idx) const {
    Elem e(r_, 0);
    for (unsigned i = 0; i < r_; ++i) {
        e[i] = idx % q_;
        idx /= q_;
    }
    return e;
}

bool FiniteField::less(const Elem& a, const Elem& b) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::vector<Elem> finite_field_roots(const std::vector<Int>& poly, std::uint64_t q, unsigned r) {
    return finite_field_roots(poly, FiniteField::get(q, r));
}

std::vector<Elem> finite_field_roots(const std::vector<Int>& poly, const FFPtr& Fp) {
    const FiniteField& F = *Fp;
    Poly P = lift_poly(F, poly);
    if (P.empty()) throw DomainError("finite_field_roots: polynomial vanishes mod q");
    std::vector<Elem> out;
    if (pdeg(P) == 0) return out;
    Int Q = F.size();
    if (Q <= 65536) {
        std::uint64_t n = Q.get_ui();
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            Elem x = F.element_at(idx);
            Elem acc = F.zero();
            for (std::size_t i = P.size(); i-- > 0;) acc = F.add(F.mul(acc, x), P[i]);
            if (F.is_zero(acc)) out.push_back(x);
        }
        return out;
    }
    P = pmonic(F, P);
    Poly xq = px(F);
    Int q(static_cast<unsigned long>(F.q()));
    for (unsigned i = 0; i < F.r(); ++i) xq = ppowmod(F, xq, q, P);
    Poly h = pgcd(F, P, psub(F, xq, px(F)));
    std::mt19937_64 rng(0x5eed);
    split_roots(F, h, out, rng);
    std::sort(out.begin(), out.end(), FiniteField::less);
    return out;
}

std::vector<unsigned> factor_degrees_mod(const std::vector<Int>& poly, std::uint64_t q) {
    auto Fp = FiniteField::get(q, 1);
    const FiniteField& F = *Fp;
    Poly f = lift_poly(F, poly);
    if (pdeg(f) < static_cast<int>(poly.size()) - 1) throw UnsupportedPrime("leading coefficient divisible by " + std::to_string(q));
    f = pmonic(F, f);
    std::vector<unsigned> out;
    Poly xp = px(F);
    Int qi(static_cast<unsigned long>(q));
    for (unsigned d = 1; pdeg(f) > 0; ++d) {
        if (pdeg(f) < 2 * static_cast<int>(d)) {
            out.push_back(static_cast<unsigned>(pdeg(f)));
            break;
        }
        xp = ppowmod(F, xp, qi, f);
        Poly G = pgcd(F, f, psub(F, xp, px(F)));
        if (pdeg(G) > 0) {
            out.push_back(d);
            while (true) {
                Poly G2 = pgcd(F, f, G);
                if (pdeg(G2) <= 0) break;
                f = pdivmod(F, f, G2).first;
            }
            if (pdeg(f) > 0) xp = pmod(F, xp, f);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Elem Embedding::reduce(const CycElement& x) const {
    const FiniteField& F = *field;
    std::uint64_t c = x.conductor();
    if (m % c != 0) throw DomainError("embedding: element field not contained in Q(zeta_" + std::to_string(m) + ")");
    Elem zp = F.pow(zeta, Int(static_cast<unsigned long>(m / c)));
    std::uint64_t d = mpz_fdiv_ui(x.denominator().get_mpz_t(), F.q());
    if (d == 0) throw UnsupportedPrime("denominator divisible by " + std::to_string(F.q()));
    Elem acc = F.zero();
    const auto& num = x.numerators();
    for (std::size_t i = num.size(); i-- > 0;) acc = F.add(F.mul(acc, zp), F.from_int(num[i]));
    Elem di = F.from_int(Int(static_cast<unsigned long>(invmod(d, F.q()))));
    return F.mul(acc, di);
}

Elem Embedding::reduce_poly(const std::vector<Rational>& coeffs) const {
    const FiniteField& F = *field;
    Elem acc = F.zero();
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = F.add(F.mul(acc, root), F.from_rational(coeffs[i]));
    return acc;
}

std::vector<Embedding> reduction_embeddings(std::uint64_t m, const std::vector<Int>& g, std::uint64_t q) {
    if (!is_prime(q)) throw DomainError("reduction prime must be prime");
    m = canonical_conductor(m);
    if (g.size() < 2 || g.back() != 1) throw DomainError("field polynomial must be monic of positive degree");
    // Over a ramified q, zeta_m reduces to a root of Phi_{m'} with m' the prime-to-q part of m.
    std::uint64_t mq = m;
    while (mq % q == 0) mq /= q;
    unsigned rz = mq == 1 ? 1 : static_cast<unsigned>(multiplicative_order(q % mq, mq));
    std::vector<unsigned> cands;
    for (auto d : factor_degrees_mod(g, q)) cands.push_back(static_cast<unsigned>(lcm_u(rz, d)));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    auto phi = cyclotomic_polynomial(mq);
    std::vector<Embedding> out;
    for (unsigned r : cands) {
        auto F = FiniteField::get(q, r);
        auto zs = finite_field_roots(phi, F);
        auto bs = finite_field_roots(g, F);
        for (auto& z : zs) {
            unsigned dz = F->degree_of(z);
            for (auto& b : bs) {
                if (lcm_u(dz, F->degree_of(b)) != r) continue;
                bool canonical = true;
                Elem fz = z, fb = b;
                for (unsigned i = 1; i < r && canonical; ++i) {
                    fz = F->frobenius(fz);
                    fb = F->frobenius(fb);
                    if (FiniteField::less(fz, z) || (fz == z && FiniteField::less(fb, b))) canonical = false;
                }
                if (canonical) out.push_back(Embedding{F, m, z, g, b});
            }
        }
    }
    return out;
}

}  // namespace eiscong
