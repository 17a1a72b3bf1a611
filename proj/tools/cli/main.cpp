#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eiscong/ideals.hpp"
#include "eiscong/scanner.hpp"
#include "json.hpp"

using namespace eiscong;
using ojson = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    std::uint64_t level = 0;
    std::optional<std::uint64_t> p, M, L, l;
    std::string character;
    std::optional<std::size_t> prec, bound;
    bool json = false, offline = false;
    std::string endpoint = FetchOptions{}.endpoint;
    std::string cache_dir, data_dir;
    std::vector<std::string> data_files;
};

std::string big(const Int& v) { return v.get_str(); }

std::uint64_t resolve_p(const Config& c) {
    std::uint64_t p = c.p ? *c.p : square_part_prime(c.level);
    if (p == 0) throw UsageError("level " + std::to_string(c.level) + " is not of the form p^2 N'; pass --p");
    if (!is_p_good(c.level, p))
        throw UsageError("level " + std::to_string(c.level) + " is not " + std::to_string(p) +
                         "-good: need N = p^2 N' with N' squarefree, prime to p, and every prime of N' = +-1 mod p");
    return p;
}

EisensteinParams resolve_series(const Config& c) {
    if (c.character.empty()) throw UsageError("--char is required");
    DirichletCharacter phi;
    try {
        phi = DirichletCharacter::from_label(c.character);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--char: ") + e.what());
    }
    std::uint64_t f = phi.modulus();
    if (c.level % (f * f) != 0)
        throw UsageError("level " + std::to_string(c.level) + " is not divisible by the square of the conductor " + std::to_string(f));
    std::uint64_t rest = c.level / (f * f);
    std::uint64_t M = 0, L = 0;
    if (c.M && c.L) {
        M = *c.M;
        L = *c.L;
    } else if (c.M || c.L) {
        std::uint64_t given = c.M ? *c.M : *c.L;
        if (given == 0 || rest % given != 0)
            throw UsageError(std::string(c.M ? "--M" : "--L") + " must divide N/f^2 = " + std::to_string(rest));
        M = c.M ? given : rest / given;
        L = rest / M;
    } else if (rest == 1) {
        M = L = 1;
    } else {
        throw UsageError("--M or --L is required when N/f^2 = " + std::to_string(rest) + " > 1");
    }
    try {
        return EisensteinParams::make(phi, c.level, M, L);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

// c*sqrt(d) when beta^2 is rational, with sqrt(d) the Gauss sum of the quadratic character of discriminant d or 4d.
std::optional<std::string> quadratic_form(const CycElement& beta) {
    if (beta.is_zero()) return std::string("0");
    if (beta.is_rational()) return beta.to_rational().get_str();
    CycElement sq = beta * beta;
    if (!sq.is_rational()) return std::nullopt;
    Rational r = sq.to_rational();
    Int n = r.get_num() * r.get_den();
    Int d = n < 0 ? Int(-1) : Int(1), rem = abs(n);
    for (unsigned long q = 2; q * q <= rem; ++q) {
        unsigned e = 0;
        while (rem % q == 0) {
            rem /= q;
            ++e;
        }
        if (e % 2) d *= q;
    }
    d *= rem;
    if (!d.fits_slong_p()) return std::nullopt;
    long dl = d.get_si();
    long disc = (((dl % 4) + 4) % 4 == 1) ? dl : 4 * dl;
    CycElement root;
    bool found = false;
    for (auto& chi : primitive_characters(static_cast<std::uint64_t>(std::labs(disc)))) {
        if (chi.order() != 2 || chi.is_even() != (disc > 0)) continue;
        root = gauss_sum(chi);
        if (disc != dl) root /= CycElement(2);
        found = true;
        break;
    }
    if (!found) return std::nullopt;
    CycElement c = beta / root;
    if (!c.is_rational()) return std::nullopt;
    return c.to_rational().get_str() + "*sqrt(" + std::to_string(dl) + ")";
}

std::string factor_text(const Int& n, ojson& j) {
    Int rem = abs(n);
    std::string s;
    j = ojson::array();
    for (unsigned long q = 2; q < 100000 && q * q <= rem; ++q) {
        unsigned e = 0;
        while (rem % q == 0) {
            rem /= q;
            ++e;
        }
        if (!e) continue;
        s += (s.empty() ? "" : " * ") + std::to_string(q) + (e > 1 ? "^" + std::to_string(e) : "");
        j.push_back({q, e});
    }
    if (rem > 1) {
        bool prime = mpz_probab_prime_p(rem.get_mpz_t(), 30) > 0;
        s += (s.empty() ? "" : " * ") + big(rem) + (prime ? "" : " (composite)");
        j.push_back({big(rem), 1});
    }
    return s.empty() ? "1" : s;
}

std::string series_title(const EisensteinParams& P) {
    auto r = P.refinement_name();
    return P.name() + (r.empty() ? "" : " [" + r + "]");
}

ojson series_json(const EisensteinParams& P) {
    ojson o;
    o["name"] = P.name();
    o["character"] = P.phi.label();
    o["level"] = P.N;
    o["M"] = P.M;
    o["L"] = P.L;
    o["refinement"] = P.refinement_name();
    return o;
}

void emit(const Config& c, const ojson& j, const std::string& text) {
    if (c.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_basis(const Config& c) {
    std::uint64_t p = resolve_p(c);
    auto basis = eisenstein_basis(c.level, p);
    std::uint64_t r = 2;
    while (c.level % r == 0 || !is_prime(r)) ++r;
    auto primes = factor(c.level).factors;
    ojson arr = ojson::array();
    std::string text = std::to_string(basis.size()) + " series at level " + std::to_string(c.level) + ", p = " + std::to_string(p) + "\n";
    for (auto& P : basis) {
        ojson o = series_json(P);
        ojson u = ojson::object();
        std::string line = "  " + series_title(P);
        for (auto& [q, e] : primes) {
            try {
                auto v = expected_U_eigenvalue(P, q).to_string();
                u["U_" + std::to_string(q)] = v;
                line += "  U_" + std::to_string(q) + " = " + v;
            } catch (const DomainError&) {
            }
        }
        auto t = expected_T_eigenvalue(P, r).to_string();
        o["U"] = u;
        o["T_" + std::to_string(r)] = t;
        line += "  T_" + std::to_string(r) + " = " + t + "\n";
        text += line;
        arr.push_back(o);
    }
    ojson j;
    j["level"] = c.level;
    j["p"] = p;
    j["series"] = arr;
    emit(c, j, text);
    return 0;
}

int cmd_qexp(const Config& c) {
    auto P = resolve_series(c);
    std::size_t prec = c.prec ? *c.prec : sturm_bound(c.level) + 1;
    if (prec == 0) throw UsageError("--prec must be positive");
    auto E = build_E(P, prec);
    ojson j = series_json(P);
    j["precision"] = prec;
    j["a0"] = E.a0.to_string();
    ojson co = ojson::array();
    for (std::size_t n = 1; n <= prec; ++n) co.push_back(E[n].to_string());
    j["coefficients"] = co;
    emit(c, j, series_title(P) + "\n" + E.to_string() + "\n");
    return 0;
}

int cmd_beta(const Config& c) {
    auto P = resolve_series(c);
    CycElement b = beta_tilde(P);
    auto closed = quadratic_form(b);
    ojson j = series_json(P);
    j["closed_form"] = closed ? ojson(*closed) : ojson();
    j["conductor"] = b.conductor();
    j["value"] = b.to_string();
    j["denominator"] = big(b.denominator());
    ojson nums = ojson::array();
    for (auto& x : b.numerators()) nums.push_back(big(x));
    j["numerators"] = nums;
    std::string text = series_title(P) + "\n";
    if (closed) text += *closed + "\n";
    text += "cyclotomic: " + b.to_string() + "\n";
    emit(c, j, text);
    return 0;
}

int cmd_order(const Config& c) {
    auto P = resolve_series(c);
    Int o = cuspidal_order(P);
    ojson fj;
    std::string fact = factor_text(o, fj);
    ojson j = series_json(P);
    j["order"] = big(o);
    j["factorization"] = fj;
    emit(c, j, series_title(P) + "\ncuspidal order: " + big(o) + "\n  = " + fact + "\n");
    return 0;
}

std::string set_text(const std::set<std::uint64_t>& s) {
    std::string t = "{";
    for (auto it = s.begin(); it != s.end(); ++it) t += (it == s.begin() ? "" : ", ") + std::to_string(*it);
    return t + "}";
}

int cmd_classify(const Config& c) {
    std::uint64_t p = resolve_p(c);
    auto rep = candidate_characteristics(c.level, p);
    ojson j = ojson::parse(rep.to_json());
    std::string text = rep.to_string() + "\n  S1 = " + set_text(rep.S1) + "\n  S2 = " + set_text(rep.S2) + "\n";
    if (c.l) {
        if (!is_prime(*c.l)) throw UsageError("--l: " + std::to_string(*c.l) + " is not prime");
        std::vector<EisensteinParams> series;
        if (c.character.empty())
            series = eisenstein_basis(c.level, p);
        else
            series.push_back(resolve_series(c));
        ojson ds = ojson::array();
        for (auto& P : series) {
            IdealDescriptor d;
            try {
                d = descriptor(P, *c.l);
            } catch (const UnsupportedCharacteristic& e) {
                throw UsageError(e.what());
            }
            ojson o = series_json(P);
            o["descriptor"] = ojson::parse(d.to_json());
            ds.push_back(o);
            text += series_title(P) + " mod " + std::to_string(*c.l) + ", residue field " + d.residue_field() + "\n  " +
                    d.to_text() + "\n";
        }
        j["descriptors"] = ds;
    }
    emit(c, j, text);
    return 0;
}

DataSources sources(const Config& c) {
    DataSources s;
    s.files = c.data_files;
    s.directories.push_back(c.data_dir.empty() ? default_data_dir() : c.data_dir);
    s.cache_dir = c.cache_dir.empty() ? default_cache_dir() : c.cache_dir;
    return s;
}

int cmd_scan(const Config& c) {
    std::uint64_t p = resolve_p(c);
    auto forms = newforms_for_level(c.level, sources(c));
    std::size_t bound = c.bound ? *c.bound : 0;
    auto res = full_scan(c.level, p, forms, bound);
    if (c.json)
        std::cout << res.to_json() << "\n";
    else
        std::cout << res.to_text();
    return 0;
}

int cmd_fetch(const Config& c) {
    FetchOptions o;
    o.endpoint = c.endpoint;
    o.cache_dir = c.cache_dir;
    o.offline = c.offline;
    auto r = fetch_newforms(c.level, o);
    for (auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    std::string path = cache_path(o.cache_dir.empty() ? default_cache_dir() : o.cache_dir, c.level);
    ojson j;
    j["level"] = c.level;
    j["from_cache"] = r.from_cache;
    j["cache"] = path;
    ojson labels = ojson::array();
    std::string text = "level " + std::to_string(c.level) + ": " + std::to_string(r.records.size()) + " newforms" +
                       (r.from_cache ? " (from cache)" : "") + ", cached at " + path + "\n";
    for (auto& rec : r.records) {
        labels.push_back(rec.label);
        text += "  " + rec.label + "  degree " + std::to_string(rec.degree()) + ", " + std::to_string(rec.precision()) +
                " coefficients\n";
    }
    j["labels"] = labels;
    j["warnings"] = r.warnings;
    emit(c, j, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eiscong: Eisenstein congruences for weight-2 forms on Gamma_0(N)"};
    app.require_subcommand(1);
    Config c;

    auto level = [&](CLI::App* s) { s->add_option("--level", c.level, "level N")->required()->check(CLI::PositiveNumber); };
    auto prime = [&](CLI::App* s) { s->add_option("--p", c.p, "the prime p with N = p^2 N' (inferred when omitted)"); };
    auto selector = [&](CLI::App* s) {
        s->add_option("--char", c.character, "primitive character f.k.e")->required();
        s->add_option("--M", c.M, "critical part M of N/f^2");
        s->add_option("--L", c.L, "ordinary part L of N/f^2");
    };
    auto json = [&](CLI::App* s) { s->add_flag("--json", c.json, "JSON output"); };
    auto data = [&](CLI::App* s) {
        s->add_option("--data", c.data_files, "newform JSON files to use before the bundled data");
        s->add_option("--data-dir", c.data_dir, "directory with newforms_<N>.json (default: bundled data)");
        s->add_option("--cache-dir", c.cache_dir, "newform cache (default: $EISCONG_CACHE)");
    };

    auto* basis = app.add_subcommand("basis", "list the Eisenstein eigenbasis E[phi,M,L]");
    level(basis), prime(basis), json(basis);
    auto* qexp = app.add_subcommand("qexp", "q-expansion of E[phi,M,L]");
    level(qexp), selector(qexp), json(qexp);
    qexp->add_option("--prec", c.prec, "number of coefficients (default: Sturm bound + 1)");
    auto* beta = app.add_subcommand("beta", "the constant beta~ of E[phi,M,L]");
    level(beta), selector(beta), json(beta);
    auto* order = app.add_subcommand("order", "order of the cuspidal group generated by E[phi,M,L]");
    level(order), selector(order), json(order);
    auto* classify = app.add_subcommand("classify", "candidate characteristics and Eisenstein ideals");
    level(classify), prime(classify), json(classify);
    classify->add_option("--l", c.l, "print the ideal descriptors modulo this prime");
    classify->add_option("--char", c.character, "restrict descriptors to one character");
    classify->add_option("--M", c.M, "critical part M of N/f^2");
    classify->add_option("--L", c.L, "ordinary part L of N/f^2");
    auto* scan = app.add_subcommand("scan", "search for Eisenstein congruences among the newforms of level N");
    level(scan), prime(scan), json(scan), data(scan);
    scan->add_option("--bound", c.bound, "number of coefficients compared (default: Sturm bound)");
    auto* fetch = app.add_subcommand("fetch", "download newforms of level N into the cache");
    level(fetch), json(fetch);
    fetch->add_option("--endpoint", c.endpoint, "LMFDB-compatible API root");
    fetch->add_option("--cache-dir", c.cache_dir, "newform cache (default: $EISCONG_CACHE)");
    fetch->add_flag("--offline", c.offline, "serve only from the cache");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*basis) return cmd_basis(c);
        if (*qexp) return cmd_qexp(c);
        if (*beta) return cmd_beta(c);
        if (*order) return cmd_order(c);
        if (*classify) return cmd_classify(c);
        if (*scan) return cmd_scan(c);
        if (*fetch) return cmd_fetch(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
