#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "eiscong/scanner.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <numeric>
#include <tuple>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace eiscong {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::mutex g_cache_mutex;

// 1-based line of each top-level array element.
std::vector<std::size_t> item_lines(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t line = 1;
    int depth = 0;
    bool in_string = false, escape = false, expect = false;
    for (char c : text) {
        if (c == '\n') ++line;
        if (in_string) {
            if (escape)
                escape = false;
            else if (c == '\\')
                escape = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        if (expect && c != ']') {
            out.push_back(line);
            expect = false;
        }
        if (c == '"')
            in_string = true;
        else if (c == '[' || c == '{') {
            if (++depth == 1 && c == '[') expect = true;
        } else if (c == ']' || c == '}')
            --depth;
        else if (c == ',' && depth == 1)
            expect = true;
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    return {line, col};
}

struct FieldError {
    std::string field, message;
};

Int int_of(const json& v, const std::string& field) {
    if (v.is_number_integer()) return v.is_number_unsigned() ? Int(std::to_string(v.get<std::uint64_t>()))
                                                             : Int(std::to_string(v.get<std::int64_t>()));
    throw FieldError{field, "expected an integer"};
}

std::vector<Int> int_list(const json& v, const std::string& field) {
    if (!v.is_array()) throw FieldError{field, "expected a list of integers"};
    std::vector<Int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(int_of(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

using Poly = std::vector<Rational>;

Poly mul_mod(const Poly& a, const Poly& b, const std::vector<Int>& g) {
    std::size_t d = g.size() - 1;
    Poly prod(a.size() + b.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
    for (std::size_t i = prod.size(); i-- > d;) {
        if (prod[i] == 0) continue;
        Rational c = prod[i];
        for (std::size_t j = 0; j < d; ++j) prod[i - d + j] -= c * Rational(g[j]);
        prod[i] = 0;
    }
    prod.resize(d, Rational(0));
    return prod;
}

Poly padded(Poly a, std::size_t d) {
    a.resize(d, Rational(0));
    return a;
}

// nullopt for records outside weight 2, trivial character.
std::optional<NewformRecord> record_from_json(const json& item) {
    if (!item.is_object()) throw FieldError{"", "expected an object"};
    NewformRecord r;
    if (!item.contains("label") || !item["label"].is_string()) throw FieldError{"label", "expected a string"};
    r.label = item["label"].get<std::string>();
    for (const char* key : {"level", "weight", "field_poly", "an"})
        if (!item.contains(key)) throw FieldError{key, "missing"};
    Int level = int_of(item["level"], "level");
    if (level <= 0 || !level.fits_ulong_p()) throw FieldError{"level", "expected a positive integer"};
    r.level = level.get_ui();
    Int weight = int_of(item["weight"], "weight");
    if (weight != 2) return std::nullopt;
    if (item.contains("char_orbit_label") && item["char_orbit_label"] != "a") return std::nullopt;
    {
        auto dot1 = r.label.find('.');
        auto dot2 = dot1 == std::string::npos ? dot1 : r.label.find('.', dot1 + 1);
        auto dot3 = dot2 == std::string::npos ? dot2 : r.label.find('.', dot2 + 1);
        if (dot3 != std::string::npos) {
            if (r.label.substr(0, dot1) != level.get_str()) throw FieldError{"label", "level prefix disagrees with level"};
            if (r.label.substr(dot2 + 1, dot3 - dot2 - 1) != "a") return std::nullopt;
        }
    }
    r.field_poly = int_list(item["field_poly"], "field_poly");
    if (r.field_poly.size() < 2 || r.field_poly.back() != 1)
        throw FieldError{"field_poly", "expected a monic polynomial of positive degree"};
    std::size_t d = r.degree();

    bool has_num = item.contains("hecke_ring_numerators"), has_den = item.contains("hecke_ring_denominators");
    if (has_num != has_den) throw FieldError{has_num ? "hecke_ring_denominators" : "hecke_ring_numerators", "missing"};
    if (has_num) {
        const json& nums = item["hecke_ring_numerators"];
        if (!nums.is_array() || nums.size() != d) throw FieldError{"hecke_ring_numerators", "expected " + std::to_string(d) + " rows"};
        for (std::size_t i = 0; i < d; ++i) {
            auto row = int_list(nums[i], "hecke_ring_numerators[" + std::to_string(i) + "]");
            if (row.size() > d) throw FieldError{"hecke_ring_numerators[" + std::to_string(i) + "]", "too many entries"};
            r.basis_numerators.push_back(row);
        }
        r.basis_denominators = int_list(item["hecke_ring_denominators"], "hecke_ring_denominators");
        if (r.basis_denominators.size() != d) throw FieldError{"hecke_ring_denominators", "expected " + std::to_string(d) + " entries"};
        for (auto& x : r.basis_denominators)
            if (x <= 0) throw FieldError{"hecke_ring_denominators", "entries must be positive"};
    }

    const json& an = item["an"];
    if (!an.is_array() || an.empty()) throw FieldError{"an", "expected a nonempty list"};
    for (std::size_t n = 0; n < an.size(); ++n) {
        std::string field = "an[" + std::to_string(n) + "]";
        auto c = int_list(an[n], field);
        if (c.size() > d) throw FieldError{field, "more than " + std::to_string(d) + " entries"};
        Poly p(d, Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (r.basis_numerators.empty()) {
                p[i] += Rational(c[i]);
                continue;
            }
            for (std::size_t j = 0; j < r.basis_numerators[i].size(); ++j)
                p[j] += Rational(c[i] * r.basis_numerators[i][j], r.basis_denominators[i]);
        }
        for (auto& x : p) x.canonicalize();
        r.coefficients.push_back(std::move(c));
        r.an.push_back(std::move(p));
    }

    Poly one(d, Rational(0));
    one[0] = 1;
    if (r.an[0] != one) throw FieldError{"an[0]", "a_1 must be 1"};
    auto a = [&](std::size_t n) { return r.an[n - 1]; };
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}})
        if (m * n <= r.an.size() && mul_mod(a(m), a(n), r.field_poly) != padded(a(m * n), d))
            throw FieldError{"an[" + std::to_string(m * n - 1) + "]",
                             "a_" + std::to_string(m * n) + " != a_" + std::to_string(m) + " a_" + std::to_string(n)};
    for (std::uint64_t p : {2u, 3u}) {
        if (p * p > r.an.size()) continue;
        Poly sq = mul_mod(a(p), a(p), r.field_poly);
        if (r.level % p != 0) sq[0] -= Rational(static_cast<long>(p));
        if (sq != padded(a(p * p), d))
            throw FieldError{"an[" + std::to_string(p * p - 1) + "]", "a_" + std::to_string(p * p) + " inconsistent with a_" + std::to_string(p)};
    }
    return r;
}

std::vector<NewformRecord> records_from_array(const json& j, const std::function<std::string(std::size_t)>& where) {
    std::vector<NewformRecord> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        try {
            if (auto r = record_from_json(j[i])) out.push_back(std::move(*r));
        } catch (const FieldError& e) {
            std::string label;
            if (j[i].is_object() && j[i].contains("label") && j[i]["label"].is_string()) label = " (" + j[i]["label"].get<std::string>() + ")";
            throw ParseError(where(i) + ": record " + std::to_string(i) + label +
                             (e.field.empty() ? "" : ": field '" + e.field + "'") + ": " + e.message);
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

std::vector<NewformRecord> for_level(std::vector<NewformRecord> v, std::uint64_t level) {
    std::erase_if(v, [&](const NewformRecord& r) { return r.level != level; });
    return v;
}

void write_cache(const std::string& path, const std::string& content) {
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    fs::path p(path);
    fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(static_cast<unsigned long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FetchError(FetchError::Kind::Cache, "cannot write cache file " + tmp.string());
        out << content;
        if (!out) throw FetchError(FetchError::Kind::Cache, "cannot write cache file " + tmp.string());
    }
    fs::rename(tmp, p);
}

struct Endpoint {
    std::string origin, prefix;
};

Endpoint split_endpoint(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw FetchError(FetchError::Kind::Network, "endpoint must start with http:// or https://: " + url);
    auto slash = url.find('/', scheme + 3);
    Endpoint e{url.substr(0, slash), slash == std::string::npos ? "" : url.substr(slash)};
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
    return e;
}

std::string fetch_body(httplib::Client& cli, const std::string& origin, const std::string& path) {
    auto res = cli.Get(path);
    if (!res) throw FetchError(FetchError::Kind::Network, origin + path + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw FetchError(FetchError::Kind::Http, origin + path + ": HTTP " + std::to_string(res->status));
    return res->body;
}

std::string join_set(const std::vector<std::uint64_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "}";
}

}  // namespace

std::vector<NewformRecord> parse_newforms(const std::string& text, const std::string& source) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
    if (!j.is_array()) throw ParseError(source + ":1: top level must be a list");
    auto lines = item_lines(text);
    return records_from_array(j, [&](std::size_t i) {
        return source + ":" + std::to_string(i < lines.size() ? lines[i] : 1);
    });
}

std::vector<NewformRecord> load_newforms(const std::string& path) { return parse_newforms(read_file(path), path); }

std::string newforms_to_json(const std::vector<NewformRecord>& records) {
    auto ints = [](const std::vector<Int>& v) {
        ojson a = ojson::array();
        for (auto& x : v) a.push_back(ojson::parse(x.get_str()));
        return a;
    };
    ojson out = ojson::array();
    for (auto& r : records) {
        ojson o;
        o["label"] = r.label;
        o["level"] = r.level;
        o["weight"] = r.weight;
        o["field_poly"] = ints(r.field_poly);
        if (!r.basis_numerators.empty()) {
            ojson rows = ojson::array();
            for (auto& row : r.basis_numerators) rows.push_back(ints(row));
            o["hecke_ring_numerators"] = rows;
            o["hecke_ring_denominators"] = ints(r.basis_denominators);
        }
        ojson an = ojson::array();
        for (auto& c : r.coefficients) an.push_back(ints(c));
        o["an"] = an;
        out.push_back(o);
    }
    return out.dump();
}

std::string default_cache_dir() {
    if (const char* c = std::getenv("EISCONG_CACHE"); c && *c) return c;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "eiscong").string();
    return (fs::path(env_or("HOME", ".")) / ".cache" / "eiscong").string();
}

std::string cache_path(const std::string& cache_dir, std::uint64_t level) {
    return (fs::path(cache_dir) / ("newforms_" + std::to_string(level) + ".json")).string();
}

std::vector<NewformRecord> parse_remote_payload(const std::string& body, std::uint64_t level) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error&) {
        throw FetchError(FetchError::Kind::Shape, "remote payload is not JSON");
    }
    if (!j.is_object() || !j.contains("data") || !j["data"].is_array())
        throw FetchError(FetchError::Kind::Shape, "remote payload has no \"data\" list");
    json items = json::array();
    for (auto& src : j["data"]) {
        if (!src.is_object() || !src.contains("label") || !src["label"].is_string())
            throw FetchError(FetchError::Kind::Shape, "remote record without a label");
        std::string label = src["label"];
        json item;
        item["label"] = label;
        std::istringstream ls(label);
        std::string lv, wt;
        std::getline(ls, lv, '.');
        std::getline(ls, wt, '.');
        try {
            item["level"] = src.contains("level") ? src["level"] : json(std::stoull(lv));
            item["weight"] = src.contains("weight") ? src["weight"] : json(std::stoull(wt));
        } catch (const std::exception&) {
            throw FetchError(FetchError::Kind::Shape, "remote record " + label + ": unparseable label");
        }
        for (const char* key : {"field_poly", "an", "char_orbit_label"})
            if (src.contains(key)) item[key] = src[key];
        bool power = src.value("hecke_ring_power_basis", false);
        if (!power && src.contains("hecke_ring_numerators")) {
            item["hecke_ring_numerators"] = src["hecke_ring_numerators"];
            item["hecke_ring_denominators"] = src.value("hecke_ring_denominators", json());
        }
        items.push_back(item);
    }
    try {
        auto recs = records_from_array(items, [](std::size_t) { return std::string("remote payload"); });
        return for_level(std::move(recs), level);
    } catch (const ParseError& e) {
        throw FetchError(FetchError::Kind::Shape, e.what());
    }
}

FetchResult fetch_newforms(std::uint64_t level, const FetchOptions& options) {
    std::string dir = options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;
    std::string path = cache_path(dir, level);
    auto cached = [&]() -> std::optional<std::vector<NewformRecord>> {
        if (!fs::exists(path)) return std::nullopt;
        try {
            return load_newforms(path);
        } catch (const ParseError& e) {
            throw FetchError(FetchError::Kind::Cache, std::string("corrupt cache: ") + e.what());
        }
    };
    FetchResult result;
    if (options.offline) {
        auto c = cached();
        if (!c)
            throw FetchError(FetchError::Kind::Cache, "offline: no cached newforms for level " + std::to_string(level) + " in " +
                                                          dir + "; run `eiscong fetch --level " + std::to_string(level) +
                                                          "` with network access");
        result.records = std::move(*c);
        result.from_cache = true;
        return result;
    }

    std::vector<NewformRecord> records;
    try {
        Endpoint ep = split_endpoint(options.endpoint);
        httplib::Client cli(ep.origin);
        cli.set_connection_timeout(options.timeout);
        cli.set_read_timeout(options.timeout);
        cli.set_follow_location(true);
        std::string path_q = ep.prefix + "/api/mf_hecke_nf/?level=" + std::to_string(level) +
                             "&weight=2&char_orbit_index=1&_format=json&_fields=label,level,weight,field_poly,an,"
                             "hecke_ring_power_basis,hecke_ring_numerators,hecke_ring_denominators";
        for (int page = 0; page < 64 && !path_q.empty(); ++page) {
            std::string body = fetch_body(cli, ep.origin, path_q);
            auto recs = parse_remote_payload(body, level);
            records.insert(records.end(), recs.begin(), recs.end());
            path_q.clear();
            json j = json::parse(body);
            if (j.contains("next") && j["next"].is_string()) {
                std::string next = j["next"];
                if (next.rfind("http", 0) == 0) {
                    Endpoint ne = split_endpoint(next);
                    if (ne.origin != ep.origin) throw FetchError(FetchError::Kind::Shape, "next page on a different host: " + next);
                    next = ne.prefix;
                }
                path_q = next;
            }
        }
        if (!path_q.empty()) throw FetchError(FetchError::Kind::Shape, "too many result pages");
    } catch (const FetchError& e) {
        if (e.kind() != FetchError::Kind::Network) throw;
        auto c = cached();
        if (!c) throw;
        result.records = std::move(*c);
        result.from_cache = true;
        result.warnings.push_back(std::string("endpoint unreachable, serving cache ") + path + ": " + e.what());
        return result;
    }
    std::sort(records.begin(), records.end(), [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
    write_cache(path, newforms_to_json(records));
    result.records = std::move(records);
    return result;
}

std::string default_data_dir() {
    if (const char* d = std::getenv("EISCONG_DATA"); d && *d) return d;
#ifdef EISCONG_BUILD_DATA_DIR
    if (fs::is_directory(EISCONG_BUILD_DATA_DIR)) return EISCONG_BUILD_DATA_DIR;
#endif
#ifdef EISCONG_INSTALL_DATA_DIR
    return EISCONG_INSTALL_DATA_DIR;
#else
    return "data/newforms";
#endif
}

std::vector<NewformRecord> newforms_for_level(std::uint64_t level, const DataSources& sources) {
    std::vector<NewformRecord> out;
    for (auto& f : sources.files) {
        auto recs = for_level(load_newforms(f), level);
        out.insert(out.end(), recs.begin(), recs.end());
    }
    if (!out.empty()) return out;
    std::vector<std::string> dirs = sources.directories;
    if (!sources.cache_dir.empty()) dirs.push_back(sources.cache_dir);
    for (auto& d : dirs) {
        std::string p = cache_path(d, level);
        if (fs::exists(p)) return for_level(load_newforms(p), level);
    }
    throw MissingData("no newform data for level " + std::to_string(level) + "; run `eiscong fetch --level " +
                      std::to_string(level) + "` to download and cache it");
}

std::string CongruenceReport::to_string() const {
    std::ostringstream os;
    os << eisenstein.name();
    if (auto r = eisenstein.refinement_name(); !r.empty()) os << " [" << r << "]";
    os << " vs " << newform << " mod " << prime << ": ";
    if (matched)
        os << "congruent through a_" << checked_bound;
    else if (first_mismatch)
        os << "differs at a_" << *first_mismatch;
    else
        os << "no common residue field";
    if (embedding) os << " over F_" << embedding->field->size().get_str() << " (" << zeta_image << ", " << root_image << ")";
    return os.str();
}

CongruenceReport scan(const QExpansion& E, const EisensteinParams& params, const NewformRecord& f, std::uint64_t q,
                      std::size_t B) {
    if (E.level != f.level)
        throw DomainError("scan: level " + std::to_string(E.level) + " of the series differs from level " +
                          std::to_string(f.level) + " of " + f.label);
    if (B == 0) throw DomainError("scan: bound must be positive");
    if (B > E.precision)
        throw PrecisionError("scan: bound " + std::to_string(B) + " exceeds the series precision " + std::to_string(E.precision));
    if (B > f.precision())
        throw PrecisionError("scan: bound " + std::to_string(B) + " exceeds the " + std::to_string(f.precision()) +
                             " coefficients of " + f.label);
    std::uint64_t m = canonical_conductor(lcm_u(params.phi.order(), E.coefficient_conductor()));
    CongruenceReport rep;
    rep.eisenstein = params;
    rep.newform = f.label;
    rep.prime = q;
    rep.checked_bound = B;
    const Embedding* best = nullptr;
    std::size_t best_n = 0;
    auto embs = reduction_embeddings(m, f.field_poly, q);
    for (auto& emb : embs) {
        std::size_t n = 1;
        for (; n <= B; ++n)
            if (emb.reduce(E[n]) != emb.reduce_poly(f.an[n - 1])) break;
        if (n > best_n) {
            best_n = n;
            best = &emb;
        }
        if (n > B) break;
    }
    if (best) {
        const FiniteField& F = *best->field;
        rep.embedding = *best;
        rep.residue_degree = F.r();
        std::uint64_t k = params.phi.order();
        rep.zeta_image = "zeta_" + std::to_string(k) + " -> " + F.to_string(best->reduce(CycElement::zeta(k)));
        rep.root_image = "x -> " + F.to_string(best->root);
        rep.matched = best_n > B;
        if (!rep.matched) rep.first_mismatch = best_n;
    }
    return rep;
}

FullScanResult full_scan(std::uint64_t N, std::uint64_t p, const std::vector<NewformRecord>& newforms, std::size_t bound) {
    if (!is_p_good(N, p))
        throw DomainError("level " + std::to_string(N) + " is not " + std::to_string(p) + "-good");
    FullScanResult res;
    res.N = N;
    res.p = p;
    res.bound = bound ? bound : sturm_bound(N);
    res.candidates = candidate_characteristics(N, p);
    for (auto l : res.candidates.all)
        if ((6 * p) % l != 0) res.primes.push_back(l);
    auto forms = for_level(newforms, N);
    if (forms.empty())
        throw MissingData("no newform data for level " + std::to_string(N) + "; run `eiscong fetch --level " +
                          std::to_string(N) + "` to download and cache it");
    for (auto& params : eisenstein_basis(N, p)) {
        QExpansion E = build_E(params, res.bound);
        std::optional<Int> order;
        for (auto& f : forms)
            for (auto l : res.primes) {
                CongruenceReport rep;
                try {
                    rep = scan(E, params, f, l, res.bound);
                } catch (const UnsupportedPrime& e) {
                    res.skipped.push_back({params.name(), f.label, l, e.what()});
                    continue;
                }
                res.reports.push_back(rep);
                if (!rep.matched) continue;
                const Embedding& emb = *rep.embedding;
                auto eps = ResidualCharacter::make(params.phi, emb.field, emb.reduce(CycElement::zeta(params.phi.order())));
                if (!order) order = cuspidal_order(params);
                res.hits.push_back({rep, descriptor(params, eps), *order % l == 0});
            }
    }
    for (auto& h : res.hits) {
        for (auto& o : res.hits) {
            if (&o == &h || o.report.eisenstein.phi != h.report.eisenstein.phi || o.report.newform != h.report.newform ||
                o.report.prime != h.report.prime || o.descriptor.to_text() != h.descriptor.to_text())
                continue;
            ++h.same_ideal;
            if (o.report.eisenstein.M > h.report.eisenstein.M) h.largest_M = false;
        }
    }
    return res;
}

std::vector<std::vector<std::size_t>> FullScanResult::congruence_classes() const {
    auto key = [](const ScanHit& h) {
        const auto& P = h.report.eisenstein;
        std::vector<std::int64_t> best;
        std::int64_t k = static_cast<std::int64_t>(P.phi.order());
        for (std::int64_t j = 1; j <= k; ++j)
            if (std::gcd(j, k) == 1) {
                auto e = P.phi.pow(j).generator_exponents();
                if (best.empty() || e < best) best = e;
            }
        return std::make_tuple(k, best, P.M, P.L, h.report.newform, h.report.prime);
    };
    std::vector<std::vector<std::size_t>> out;
    std::vector<decltype(key(hits[0]))> keys;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        auto k = key(hits[i]);
        auto it = std::find(keys.begin(), keys.end(), k);
        if (it == keys.end()) {
            keys.push_back(k);
            out.push_back({i});
        } else
            out[static_cast<std::size_t>(it - keys.begin())].push_back(i);
    }
    return out;
}

std::string FullScanResult::to_text() const {
    std::ostringstream os;
    os << "level " << N << ", p = " << p << ", bound " << bound << "\n";
    os << "candidate characteristics: " << candidates.to_string() << "\n";
    os << "scanned primes: " << join_set(primes) << "\n";
    for (auto& r : reports) os << "  " << r.to_string() << "\n";
    for (auto& s : skipped) os << "  skipped " << s.eisenstein << " vs " << s.newform << " mod " << s.prime << ": " << s.reason << "\n";
    auto classes = congruence_classes();
    os << hits.size() << (hits.size() == 1 ? " congruence" : " congruences") << " in " << classes.size()
       << (classes.size() == 1 ? " Galois class" : " Galois classes") << "\n";
    for (auto& h : hits) {
        os << "  " << h.report.eisenstein.name();
        if (auto r = h.report.eisenstein.refinement_name(); !r.empty()) os << " [" << r << "]";
        os << " == " << h.report.newform << " mod " << h.report.prime << ", residue field " << h.descriptor.residue_field()
           << "\n    " << h.descriptor.to_text() << "\n    " << h.report.prime << " divides the cuspidal order: "
           << (h.order_divisible ? "yes" : "no") << "\n";
        if (h.same_ideal > 1 && h.largest_M)
            os << "    largest M among the " << h.same_ideal << " series congruent modulo this ideal\n";
    }
    return os.str();
}

namespace {

ojson report_json(const CongruenceReport& r) {
    ojson o;
    o["eisenstein"] = r.eisenstein.name();
    o["character"] = r.eisenstein.phi.label();
    o["M"] = r.eisenstein.M;
    o["L"] = r.eisenstein.L;
    o["refinement"] = r.eisenstein.refinement_name();
    o["newform"] = r.newform;
    o["prime"] = r.prime;
    o["residue_degree"] = r.residue_degree;
    o["embedding"] = r.embedding ? ojson{{"zeta", r.zeta_image}, {"root", r.root_image}} : ojson();
    o["checked_bound"] = r.checked_bound;
    o["matched"] = r.matched;
    o["first_mismatch"] = r.first_mismatch ? ojson(*r.first_mismatch) : ojson();
    return o;
}

}  // namespace

std::string FullScanResult::to_json() const {
    ojson o;
    o["level"] = N;
    o["p"] = p;
    o["bound"] = bound;
    o["candidates"] = ojson::parse(candidates.to_json());
    o["primes"] = primes;
    ojson reps = ojson::array();
    for (auto& r : reports) reps.push_back(report_json(r));
    o["reports"] = reps;
    ojson hs = ojson::array();
    for (auto& h : hits) {
        ojson x;
        x["report"] = report_json(h.report);
        x["descriptor"] = ojson::parse(h.descriptor.to_json());
        x["order_divisible"] = h.order_divisible;
        x["largest_M"] = h.largest_M;
        x["same_ideal"] = h.same_ideal;
        hs.push_back(x);
    }
    o["hits"] = hs;
    ojson sk = ojson::array();
    for (auto& s : skipped) sk.push_back({{"eisenstein", s.eisenstein}, {"newform", s.newform}, {"prime", s.prime}, {"reason", s.reason}});
    o["skipped"] = sk;
    return o.dump(2);
}

}  // namespace eiscong
