#include "eiscong/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>
#include <sstream>

namespace eiscong {

namespace {

std::mutex g_poly_mutex;
std::map<std::uint64_t, std::vector<Int>> g_poly_memo;

std::mutex g_field_mutex;
std::map<std::uint64_t, FieldPtr> g_field_memo;

// Exact quotient of a by monic b.
std::vector<Int> divide_monic(std::vector<Int> a, const std::vector<Int>& b) {
    std::size_t db = b.size() - 1;
    std::vector<Int> q(a.size() - db);
    for (std::size_t i = a.size(); i-- > db;) {
        Int t = a[i];
        q[i - db] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= t * b[j];
    }
    return q;
}

using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qmod(QPoly a, const QPoly& b) {
    trim(a);
    std::size_t db = b.size() - 1;
    Rational lead = b.back();
    while (a.size() >= b.size()) {
        Rational t = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= t * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    trim(a);
    std::size_t db = b.size() - 1;
    Rational lead = b.back();
    QPoly q(a.size() >= b.size() ? a.size() - db : 1, Rational(0));
    while (a.size() >= b.size()) {
        Rational t = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        q[shift] = t;
        for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= t * b[j];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly qsub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

Rational qpow(Rational b, std::size_t e) {
    Rational r = 1;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// res(A, B) = lc(A)^deg B * prod_{A(a)=0} B(a)
Rational resultant(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    if (a.empty() || b.empty()) return 0;
    Rational acc = 1;
    while (true) {
        std::size_t da = a.size() - 1, db = b.size() - 1;
        if (db == 0) return acc * qpow(b[0], da);
        if (da == 0) return acc * qpow(a[0], db);
        QPoly r = qmod(a, b);
        if (r.empty()) return 0;
        std::size_t dr = r.size() - 1;
        if ((da * db) % 2 == 1) acc = -acc;
        acc *= qpow(b.back(), da - dr);
        a = std::move(b);
        b = std::move(r);
    }
}

Int ramanujan_sum(std::uint64_t m, std::uint64_t i) {
    std::uint64_t g = std::gcd(i % m == 0 ? m : i % m, m);
    std::uint64_t q = m / g;
    int mu = 1;
    for (auto& [p, e] : factor(q).factors) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return Int(mu) * Int(static_cast<unsigned long>(euler_phi(m) / euler_phi(q)));
}

bool fits_i64(const Int& v) { return v.fits_slong_p(); }

}  // namespace

std::uint64_t canonical_conductor(std::uint64_t m) {
    if (m == 0) throw DomainError("cyclotomic conductor must be positive");
    return (m % 4 == 2) ? m / 2 : m;
}

std::vector<Int> cyclotomic_polynomial(std::uint64_t m) {
    if (m == 0) throw DomainError("cyclotomic_polynomial: m must be positive");
    {
        std::lock_guard<std::mutex> lk(g_poly_mutex);
        auto it = g_poly_memo.find(m);
        if (it != g_poly_memo.end()) return it->second;
    }
    std::vector<Int> p(m + 1, Int(0));
    p[0] = -1;
    p[m] = 1;
    for (auto d : divisors(m)) {
        if (d == m) continue;
        p = divide_monic(p, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lk(g_poly_mutex);
    g_poly_memo.emplace(m, p);
    return p;
}

CyclotomicField::CyclotomicField(std::uint64_t m) : m_(m) {
    phi_ = cyclotomic_polynomial(m);
    deg_ = phi_.size() - 1;
    for (std::size_t j = 0; j < deg_; ++j)
        if (phi_[j] != 0) tail_.emplace_back(j, phi_[j]);
}

FieldPtr CyclotomicField::get(std::uint64_t m) {
    m = canonical_conductor(m);
    {
        std::lock_guard<std::mutex> lk(g_field_mutex);
        auto it = g_field_memo.find(m);
        if (it != g_field_memo.end()) return it->second;
    }
    if (euler_phi(m) > kElementDegreeCap)
        throw DomainError("cyclotomic field Q(zeta_" + std::to_string(m) + ") exceeds the degree cap");
    auto f = std::make_shared<const CyclotomicField>(m);
    std::lock_guard<std::mutex> lk(g_field_mutex);
    return g_field_memo.emplace(m, f).first->second;
}

void CyclotomicField::reduce(std::vector<Int>& poly) const {
    for (std::size_t i = poly.size(); i-- > deg_;) {
        if (poly[i] == 0) continue;
        Int t = poly[i];
        std::size_t base = i - deg_;
        for (auto& [j, c] : tail_) poly[base + j] -= t * c;
    }
    poly.resize(deg_, Int(0));
}

CycElement::CycElement() : CycElement(Int(0)) {}
CycElement::CycElement(long v) : CycElement(Int(v)) {}
CycElement::CycElement(const Int& v) : field_(CyclotomicField::get(1)), den_(1), num_{v} {}
CycElement::CycElement(const Rational& v)
    : field_(CyclotomicField::get(1)), den_(v.get_den()), num_{v.get_num()} {}

CycElement::CycElement(FieldPtr f, std::vector<Int> num, Int den)
    : field_(std::move(f)), den_(std::move(den)), num_(std::move(num)) {
    normalize();
}

void CycElement::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    if (den_ == 0) throw DomainError("CycElement: zero denominator");
    Int g = den_;
    for (auto& c : num_) {
        if (g == 1) break;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    bool zero = true;
    for (auto& c : num_)
        if (c != 0) zero = false;
    if (zero) {
        den_ = 1;
        return;
    }
    if (g != 1) {
        den_ /= g;
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
}

CycElement CycElement::zero(std::uint64_t m) {
    auto f = CyclotomicField::get(m);
    return CycElement(f, std::vector<Int>(f->degree(), Int(0)), 1);
}

CycElement CycElement::zeta(std::uint64_t m, std::int64_t j) {
    std::vector<Int> c(m, Int(0));
    c[mod_floor(j, static_cast<std::int64_t>(m))] = 1;
    return from_cyclic(m, std::move(c));
}

CycElement CycElement::from_cyclic(std::uint64_t m, std::vector<Int> counts, const Int& den) {
    if (counts.size() != m) throw DomainError("from_cyclic: length must equal m");
    if (m % 4 == 2) {
        std::uint64_t h = m / 2;
        std::uint64_t step = (h + 1) / 2;
        std::vector<Int> folded(h, Int(0));
        for (std::uint64_t j = 0; j < m; ++j) {
            if (counts[j] == 0) continue;
            std::uint64_t idx = (j % h) * step % h;
            if (j % 2) folded[idx] -= counts[j];
            else folded[idx] += counts[j];
        }
        counts = std::move(folded);
        m = h;
    }
    auto f = CyclotomicField::get(m);
    f->reduce(counts);
    return CycElement(f, std::move(counts), den);
}

CycElement CycElement::from_coeffs(std::uint64_t m, const std::vector<Rational>& coeffs) {
    auto f = CyclotomicField::get(m);
    Int den = 1;
    for (auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Int> num;
    num.reserve(std::max(coeffs.size(), f->degree()));
    for (auto& c : coeffs) num.push_back(Int(c.get_num() * (den / c.get_den())));
    if (num.size() < f->degree()) num.resize(f->degree(), Int(0));
    f->reduce(num);
    return CycElement(f, std::move(num), den);
}

Rational CycElement::coeff(std::size_t i) const {
    Rational r(num_.at(i), den_);
    r.canonicalize();
    return r;
}

std::vector<Rational> CycElement::coeffs() const {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coeff(i));
    return out;
}

bool CycElement::is_zero() const {
    for (auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool CycElement::is_rational() const {
    for (std::size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

Rational CycElement::to_rational() const {
    if (!is_rational()) throw DomainError("element is not rational");
    return coeff(0);
}

CycElement CycElement::embed(std::uint64_t m) const {
    std::uint64_t mc = canonical_conductor(m);
    std::uint64_t a = conductor();
    if (mc % a != 0) throw DomainError("embed: Q(zeta_" + std::to_string(a) + ") is not contained in Q(zeta_" + std::to_string(m) + ")");
    if (mc == a) return *this;
    std::uint64_t step = mc / a;
    std::vector<Int> c(mc, Int(0));
    for (std::size_t i = 0; i < num_.size(); ++i) c[i * step] = num_[i];
    return from_cyclic(mc, std::move(c), den_);
}

void CycElement::unify(CycElement& a, CycElement& b) {
    if (a.field_ == b.field_) return;
    std::uint64_t m = lcm_u(a.conductor(), b.conductor());
    if (a.conductor() != m) a = a.embed(m);
    if (b.conductor() != m) b = b.embed(m);
}

CycElement CycElement::operator-() const {
    CycElement r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
}

CycElement& CycElement::operator+=(const CycElement& o) {
    CycElement b = o;
    unify(*this, b);
    if (den_ == b.den_) {
        for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += b.num_[i];
    } else {
        Int l;
        mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), b.den_.get_mpz_t());
        Int fa = l / den_, fb = l / b.den_;
        for (std::size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * fa + b.num_[i] * fb;
        den_ = l;
    }
    normalize();
    return *this;
}

CycElement& CycElement::operator-=(const CycElement& o) { return *this += -o; }

CycElement& CycElement::operator*=(const CycElement& o) {
    CycElement b = o;
    unify(*this, b);
    std::size_t n = num_.size();
    if (b.is_rational()) {
        for (auto& c : num_) c *= b.num_[0];
        den_ *= b.den_;
        normalize();
        return *this;
    }
    if (is_rational()) {
        Int s = num_[0];
        Int d = den_ * b.den_;
        num_ = b.num_;
        for (auto& c : num_) c *= s;
        den_ = d;
        normalize();
        return *this;
    }
    std::vector<Int> prod(2 * n - 1, Int(0));
    bool small = true;
    long ma = 0, mb = 0;
    for (std::size_t i = 0; i < n && small; ++i) {
        if (!fits_i64(num_[i]) || !fits_i64(b.num_[i])) small = false;
        else {
            ma = std::max(ma, std::labs(num_[i].get_si()));
            mb = std::max(mb, std::labs(b.num_[i].get_si()));
        }
    }
    if (small && ma < (1L << 40) && mb < (1L << 40) && n < (1u << 20)) {
        std::vector<__int128> acc(2 * n - 1, 0);
        std::vector<long> av(n), bv(n);
        for (std::size_t i = 0; i < n; ++i) {
            av[i] = num_[i].get_si();
            bv[i] = b.num_[i].get_si();
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (av[i] == 0) continue;
            __int128 x = av[i];
            for (std::size_t j = 0; j < n; ++j) acc[i + j] += x * bv[j];
        }
        for (std::size_t k = 0; k < acc.size(); ++k) {
            __int128 v = acc[k];
            bool neg = v < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
            Int hi(static_cast<unsigned long>(u >> 64));
            Int lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
            Int r = (hi << 64) + lo;
            prod[k] = neg ? Int(-r) : r;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (num_[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) mpz_addmul(prod[i + j].get_mpz_t(), num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
        }
    }
    field_->reduce(prod);
    num_ = std::move(prod);
    den_ *= b.den_;
    normalize();
    return *this;
}

CycElement& CycElement::operator/=(const CycElement& o) { return *this *= o.inverse(); }

bool operator==(const CycElement& a, const CycElement& b) {
    if (a.field_ == b.field_) return a.den_ == b.den_ && a.num_ == b.num_;
    CycElement x = a, y = b;
    CycElement::unify(x, y);
    return x.den_ == y.den_ && x.num_ == y.num_;
}

CycElement CycElement::galois(std::int64_t a) const {
    std::uint64_t m = conductor();
    std::int64_t am = mod_floor(a, static_cast<std::int64_t>(m));
    if (std::gcd(static_cast<std::uint64_t>(am), m) != 1 && m > 1) throw DomainError("galois: exponent not a unit");
    if (m == 1) return *this;
    std::vector<Int> c(m, Int(0));
    for (std::size_t i = 0; i < num_.size(); ++i) c[(i * am) % m] += num_[i];
    return from_cyclic(m, std::move(c), den_);
}

CycElement CycElement::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (is_rational()) {
        Rational r = to_rational();
        return CycElement(Rational(1) / r).embed(conductor());
    }
    QPoly a, b;
    for (auto& c : num_) a.push_back(Rational(c));
    for (auto& c : field_->modulus()) b.push_back(Rational(c));
    trim(a);
    // s*a + t*b = g; track s only.
    QPoly r0 = b, r1 = a, s0{}, s1{Rational(1)};
    while (!r1.empty() && r1.size() > 1) {
        auto [q, r] = qdivmod(r0, r1);
        QPoly s2 = qsub(s0, qmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw std::domain_error("inverse: element is a zero divisor");
    Rational c = r1[0];
    std::vector<Rational> coeffs;
    for (auto& v : s1) coeffs.push_back(v / c);
    CycElement out = from_coeffs(conductor(), coeffs);
    for (auto& n : out.num_) n *= den_;
    out.normalize();
    return out;
}

CycElement CycElement::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    CycElement r = CycElement(1).embed(conductor());
    CycElement b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

Rational CycElement::norm() const {
    std::size_t n = degree();
    if (n == 1) return qpow(coeff(0), 1);
    QPoly a, b;
    for (auto& c : field_->modulus()) a.push_back(Rational(c));
    for (auto& c : num_) b.push_back(Rational(c));
    Rational r = resultant(a, b);
    Rational dn = qpow(Rational(den_), n);
    return r / dn;
}

Rational CycElement::trace() const {
    std::uint64_t m = conductor();
    Rational t = 0;
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        t += Rational(num_[i] * ramanujan_sum(m, i == 0 ? m : i));
    }
    return t / Rational(den_);
}

std::complex<double> CycElement::approx() const {
    std::complex<double> s = 0;
    double m = static_cast<double>(conductor());
    double d = den_.get_d();
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        double ang = 2 * std::numbers::pi * static_cast<double>(i) / m;
        s += num_[i].get_d() / d * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

std::string CycElement::to_string(const std::string& var) const {
    std::ostringstream os;
    std::string z = var.empty() ? "z" + std::to_string(conductor()) : var;
    if (is_rational()) {
        os << coeff(0).get_str();
        return os.str();
    }
    std::ostringstream body;
    bool first = true;
    for (std::size_t i = 0; i < num_.size(); ++i) {
        const Int& c = num_[i];
        if (c == 0) continue;
        Int a = abs(c);
        if (first) {
            if (c < 0) body << '-';
        } else {
            body << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            body << a.get_str();
            continue;
        }
        if (a != 1) body << a.get_str() << '*';
        body << z;
        if (i > 1) body << '^' << i;
    }
    if (den_ == 1) return body.str();
    os << '(' << body.str() << ")/" << den_.get_str();
    return os.str();
}

Int integer_determinant(std::vector<std::vector<Int>> a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<std::vector<Int>> multiplication_matrix(const CycElement& x) {
    if (!x.is_integral()) throw DomainError("multiplication_matrix: element must be integral");
    std::size_t n = x.degree();
    std::vector<std::vector<Int>> rows;
    CycElement cur = x;
    CycElement z = CycElement::zeta(x.conductor());
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back(cur.numerators());
        cur *= z;
    }
    return rows;
}

}  // namespace eiscong
