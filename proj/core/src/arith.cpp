#include "eiscong/arith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace eiscong {

std::vector<std::uint64_t> Factorization::primes() const {
    std::vector<std::uint64_t> out;
    for (auto& [p, e] : factors) out.push_back(p);
    return out;
}

unsigned Factorization::exponent(std::uint64_t p) const {
    for (auto& [q, e] : factors)
        if (q == p) return e;
    return 0;
}

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm_u(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1) throw DomainError("invmod: not invertible");
    return static_cast<std::uint64_t>(mod_floor(t, static_cast<std::int64_t>(m)));
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

std::uint64_t rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void split(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = rho(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace

Factorization factor(std::uint64_t n) {
    if (n == 0) throw DomainError("factor: n must be positive");
    Factorization f;
    f.value = n;
    std::vector<std::uint64_t> ps;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p < 1000000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            ps.push_back(p);
            m /= p;
        }
    }
    if (m > 1) split(m, ps);
    std::sort(ps.begin(), ps.end());
    for (auto p : ps) {
        if (!f.factors.empty() && f.factors.back().first == p)
            ++f.factors.back().second;
        else
            f.factors.emplace_back(p, 1);
    }
    return f;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
    if (n == 0 || p < 2) throw DomainError("valuation: bad arguments");
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw DomainError("euler_phi: n must be positive");
    std::uint64_t r = n;
    for (auto& [p, e] : factor(n).factors) r = r / p * (p - 1);
    return r;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> ds{1};
    for (auto& [p, e] : factor(n).factors) {
        std::size_t k = ds.size();
        std::uint64_t pk = 1;
        for (unsigned i = 0; i < e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < k; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

bool is_squarefree(std::uint64_t n) {
    for (auto& [p, e] : factor(n).factors)
        if (e > 1) return false;
    return true;
}

bool is_p_good(std::uint64_t N, std::uint64_t p) {
    if (p == 2 || !is_prime(p)) throw DomainError("is_p_good: p must be an odd prime");
    if (N == 0 || N % (p * p) != 0) return false;
    std::uint64_t rest = N / (p * p);
    if (rest % p == 0 || !is_squarefree(rest)) return false;
    for (auto& [q, e] : factor(rest).factors)
        if (q % p != 1 && q % p != p - 1) return false;
    return true;
}

std::uint64_t sturm_bound(std::uint64_t N) {
    if (N == 0) throw DomainError("sturm_bound: N must be positive");
    Rational b(N, 6);
    for (auto& [p, e] : factor(N).factors) b *= Rational(p + 1, p);
    b.canonicalize();
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    return c.get_ui();
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (std::gcd(a % m, m) != 1) throw DomainError("multiplicative_order: not a unit");
    std::uint64_t ord = euler_phi(m);
    for (auto& [p, e] : factor(ord).factors) {
        while (ord % p == 0 && powmod(a, ord / p, m) == 1) ord /= p;
    }
    return ord;
}

namespace {

Int rho_big(const Int& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        auto f = [&](const Int& v) -> Int { return Int((v * v + c) % n); };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            Int diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) return d;
    }
}

void split_big(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (n.fits_ulong_p()) {
        for (auto& [p, e] : factor(n.get_ui()).factors) out.emplace_back(static_cast<unsigned long>(p));
        return;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        out.push_back(n);
        return;
    }
    Int d = rho_big(n);
    split_big(d, out);
    split_big(Int(n / d), out);
}

}  // namespace

std::vector<Int> prime_divisors(const Int& n) {
    if (n == 0) throw DomainError("prime_divisors: zero");
    Int m = abs(n);
    std::vector<Int> out;
    for (unsigned long p = 2; p < 100000 && Int(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) m /= p;
        }
    }
    if (m > 1) split_big(m, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(const Factorization& f) {
    if (f.factors.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [p, e] : f.factors) {
        if (!first) os << '*';
        first = false;
        os << p;
        if (e > 1) os << '^' << e;
    }
    return os.str();
}

}  // namespace eiscong
