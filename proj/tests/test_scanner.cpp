#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "eiscong/scanner.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace eiscong;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Poly = std::vector<Rational>;

std::string fixture(std::uint64_t N) { return std::string(EISCONG_TEST_DATA) + "/newforms/newforms_" + std::to_string(N) + ".json"; }

const NewformRecord& find(const std::vector<NewformRecord>& v, const std::string& label) {
    for (auto& r : v)
        if (r.label == label) return r;
    throw std::runtime_error("missing " + label);
}

EisensteinParams series(const char* chr, std::uint64_t N, std::uint64_t M, std::uint64_t L) {
    return EisensteinParams::make(DirichletCharacter::from_label(chr), N, M, L);
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("eiscong_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) {
    std::string s = slurp(fs::path(EISCONG_GOLDEN_DIR) / name);
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

Poly mul(const Poly& a, const Poly& b, const std::vector<Int>& g) {
    std::size_t d = g.size() - 1;
    Poly c(2 * d, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    for (std::size_t i = c.size(); i-- > d;)
        for (std::size_t j = 0; j < d; ++j) c[i - d + j] -= c[i] * Rational(g[j]);
    c.resize(d);
    return c;
}

Poly sub_int(Poly a, long v) {
    a[0] -= v;
    return a;
}

const char* kRecord = R"({"label":"11.2.a.a","level":11,"weight":2,"field_poly":[0,1],"an":[[1],[-2],[-1],[2],[1],[2]]})";

}  // namespace

TEST_CASE("load bundled fixtures") {
    auto f121 = load_newforms(fixture(121));
    CHECK(f121.size() == 4);
    auto& d = find(f121, "121.2.a.d");
    CHECK(d.field_poly == std::vector<Int>{0, 1});
    CHECK(d.an[1] == Poly{Rational(2)});
    CHECK(d.an[2] == Poly{Rational(-1)});
    CHECK(d.precision() >= sturm_bound(121));

    auto f725 = load_newforms(fixture(725));
    CHECK(f725.size() == 12);
    auto& b = find(f725, "725.2.a.b");
    CHECK(b.field_poly == std::vector<Int>{-2, 0, 1});
    CHECK(b.an[1] == Poly{Rational(1), Rational(1)});
    for (auto& r : f725) CHECK(r.precision() >= sturm_bound(725));
    CHECK(load_newforms(fixture(234)).size() == 5);
}

TEST_CASE("Hecke-basis conversion") {
    auto f725 = load_newforms(fixture(725));
    for (const char* label : {"725.2.a.l", "725.2.a.g"}) {
        auto& r = find(f725, label);
        REQUIRE_FALSE(r.basis_numerators.empty());
        // a_mn = a_m a_n for coprime m, n and a_{p^2} = a_p^2 - p for p not dividing the level.
        for (std::size_t m = 2; m <= 14; ++m)
            for (std::size_t n = m + 1; m * n <= r.precision(); ++n)
                if (std::gcd(m, n) == 1) CHECK(mul(r.an[m - 1], r.an[n - 1], r.field_poly) == r.an[m * n - 1]);
        for (long p : {2, 3, 7, 11, 13})
            CHECK(sub_int(mul(r.an[p - 1], r.an[p - 1], r.field_poly), p) == r.an[p * p - 1]);
    }
}

TEST_CASE("serialization round trip") {
    for (std::uint64_t N : {121u, 234u, 725u}) {
        auto text = slurp(fixture(N));
        auto recs = load_newforms(fixture(N));
        CHECK(json::parse(newforms_to_json(recs)) == json::parse(text));
        auto again = parse_newforms(newforms_to_json(recs));
        REQUIRE(again.size() == recs.size());
        for (std::size_t i = 0; i < recs.size(); ++i) CHECK(again[i].an == recs[i].an);
    }
}

TEST_CASE("ingestion errors and filters") {
    CHECK(parse_newforms("").empty());
    CHECK(parse_newforms("  \n").empty());
    CHECK(parse_newforms("[]").empty());
    CHECK(parse_newforms(std::string("[") + kRecord + "]").size() == 1);

    auto message = [](const std::string& text) {
        try {
            parse_newforms(text, "f.json");
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[\n{\"label\": 1,\n") .find("f.json:") == 0);
    std::string bad_a1 = std::string("[\n") + kRecord + ",\n" +
                         R"({"label":"11.2.a.b","level":11,"weight":2,"field_poly":[0,1],"an":[[2],[-2]]})" + "\n]";
    auto m = message(bad_a1);
    CHECK(m.find("f.json:3") == 0);
    CHECK(m.find("an[0]") != std::string::npos);
    CHECK(message(R"([{"label":"x","level":11,"weight":2,"field_poly":[0,1],"an":[[1.0]]}])").find("expected an integer") !=
          std::string::npos);
    CHECK(message(R"([{"label":"x","level":11,"weight":2,"field_poly":[0,2],"an":[[1]]}])").find("field_poly") !=
          std::string::npos);
    CHECK(message(R"([{"label":"x","level":11,"weight":2,"field_poly":[0,1]}])").find("'an': missing") !=
          std::string::npos);
    CHECK(message(R"([{"label":"x","level":11,"weight":2,"field_poly":[0,1],"an":[[1],[-2],[-1],[2],[1],[3]]}])")
              .find("a_6 != a_2 a_3") != std::string::npos);
    CHECK(message(R"([{"label":"12.2.a.a","level":11,"weight":2,"field_poly":[0,1],"an":[[1]]}])").find("label") !=
          std::string::npos);
    CHECK(message(R"({"label":"x"})").find("top level") != std::string::npos);

    auto filtered = parse_newforms(std::string("[") + kRecord + "," +
                                   R"({"label":"11.4.a.a","level":11,"weight":4,"field_poly":[0,1],"an":[[1]]},)" +
                                   R"({"label":"11.2.b.a","level":11,"weight":2,"field_poly":[0,1],"an":[[1]]}])");
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].label == "11.2.a.a");

    auto dir = scratch("empty");
    spit(dir / "empty.json", "");
    CHECK(load_newforms((dir / "empty.json").string()).empty());
    CHECK_THROWS_AS(load_newforms((dir / "absent.json").string()), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("scan examples") {
    auto f121 = load_newforms(fixture(121));
    auto P = series("11.2.1", 121, 1, 1);
    auto E = build_E(P, 22);
    auto rep = scan(E, P, find(f121, "121.2.a.d"), 5, 22);
    CHECK(rep.matched);
    CHECK(rep.checked_bound == 22);
    REQUIRE(rep.embedding);
    CHECK(E[2].to_rational() == -3);
    CHECK(rep.embedding->reduce(E[2])[0] == 2);
    CHECK_FALSE(scan(E, P, find(f121, "121.2.a.a"), 5, 22).matched);

    auto f725 = load_newforms(fixture(725));
    auto Q = series("5.2.1", 725, 1, 29);
    CHECK(Q.refinement_name() == "ord_29");
    auto r2 = scan(build_E(Q, 150), Q, find(f725, "725.2.a.b"), 7, 150);
    CHECK(r2.matched);
    CHECK(r2.root_image == "x -> 3");

    auto f234 = load_newforms(fixture(234));
    auto C = series("3.2.1", 234, 26, 1);
    CHECK(C.refinement_name() == "crit_2,crit_13");
    auto EC = build_E(C, 84);
    for (auto& f : f234) {
        auto r = scan(EC, C, f, 7, 84);
        CHECK_FALSE(r.matched);
        CHECK(r.first_mismatch.has_value());
    }
    CHECK(scan(build_E(series("3.2.1", 234, 13, 2), 84), series("3.2.1", 234, 13, 2), find(f234, "234.2.a.b"), 7, 84).matched);

    CHECK_THROWS_AS(scan(E, P, find(f121, "121.2.a.d"), 5, 23), PrecisionError);
    CHECK_THROWS_AS(scan(build_E(P, 100), P, find(f121, "121.2.a.d"), 5, 100), PrecisionError);
    CHECK_THROWS_AS(scan(E, P, find(f725, "725.2.a.b"), 5, 22), DomainError);
}

TEST_CASE("full scan at level 121") {
    auto res = full_scan(121, 11, load_newforms(fixture(121)));
    CHECK(res.bound == 22);
    CHECK(res.primes == std::vector<std::uint64_t>{5});
    REQUIRE(res.hits.size() == 5);
    auto classes = res.congruence_classes();
    REQUIRE(classes.size() == 2);
    std::set<std::uint64_t> orders;
    for (auto& c : classes) orders.insert(res.hits[c[0]].report.eisenstein.phi.order());
    CHECK(orders == std::set<std::uint64_t>{2, 10});
    for (auto& h : res.hits) {
        CHECK(h.report.newform == "121.2.a.d");
        CHECK(h.order_divisible);
        CHECK(h.descriptor.residue_field() == "F_5");
        CHECK(h.descriptor.to_text() == golden("descriptor_121_5.txt"));
    }
    CHECK(res.skipped.empty());
}

TEST_CASE("full scan at level 725") {
    auto res = full_scan(725, 5, load_newforms(fixture(725)));
    CHECK(res.bound == 150);
    REQUIRE(res.hits.size() == 6);
    int quad = 0, quartic = 0;
    for (auto& h : res.hits) {
        CHECK(h.order_divisible);
        CHECK(h.report.prime == 7);
        if (h.report.eisenstein.phi.order() == 2) {
            ++quad;
            CHECK(h.report.newform == "725.2.a.b");
            CHECK(h.report.root_image == "x -> 3");
            CHECK(h.descriptor.residue_field() == "F_7");
            CHECK(h.descriptor.to_text() == golden("descriptor_725_7_F7.txt"));
        } else {
            ++quartic;
            CHECK(h.report.newform == "725.2.a.l");
            CHECK(h.report.residue_degree == 2);
            CHECK(h.descriptor.residue_field() == "F_49");
            CHECK(h.descriptor.to_text() == golden("descriptor_725_7_F49.txt"));
        }
    }
    CHECK(quad == 2);
    CHECK(quartic == 4);
    CHECK(res.congruence_classes().size() == 4);
}

TEST_CASE("full scan at level 234") {
    auto res = full_scan(234, 3, load_newforms(fixture(234)));
    CHECK(res.bound == 84);
    REQUIRE(res.hits.size() == 1);
    auto& h = res.hits[0];
    CHECK(h.report.eisenstein.M == 13);
    CHECK(h.report.eisenstein.L == 2);
    CHECK(h.report.newform == "234.2.a.b");
    CHECK(h.order_divisible);
    CHECK(h.descriptor.to_text() == golden("descriptor_234_7.txt"));
    CHECK(res.reports.size() == 20);
    auto j = nlohmann::ordered_json::parse(res.to_json());
    CHECK(j.dump(2) == res.to_json());
    CHECK(j["hits"][0]["descriptor"]["text"] == h.descriptor.to_text());
}

TEST_CASE("hits are Hecke consistent") {
    for (auto [N, p] : {std::pair<std::uint64_t, std::uint64_t>{121, 11}, {725, 5}, {234, 3}}) {
        auto forms = load_newforms(fixture(N));
        auto res = full_scan(N, p, forms);
        for (auto& h : res.hits) {
            const auto& emb = *h.report.embedding;
            const auto& F = *emb.field;
            const auto& f = find(forms, h.report.newform);
            const auto& P = h.report.eisenstein;
            auto eps = ResidualCharacter::make(P.phi, emb.field, emb.reduce(CycElement::zeta(P.phi.order())));
            for (std::uint64_t r = 2; r <= res.bound; ++r) {
                if (!is_prime(r)) continue;
                auto ar = emb.reduce_poly(f.an[r - 1]);
                auto ri = static_cast<std::int64_t>(r);
                if (N % r != 0) {
                    auto expect = F.add(eps.value(ri), F.mul(F.from_int(Int(static_cast<unsigned long>(r))), eps.inverse_value(ri)));
                    CHECK(ar == expect);
                } else if (r == p) {
                    CHECK(F.is_zero(ar));
                } else {
                    // U_r acts by eps(r) or r eps^{-1}(r).
                    auto u1 = eps.value(ri);
                    auto u2 = F.mul(F.from_int(Int(static_cast<unsigned long>(r))), eps.inverse_value(ri));
                    CHECK((ar == u1 || ar == u2));
                    for (auto& u : h.descriptor.u_generators)
                        if (u.prime == r) CHECK(ar == *u.value);
                }
            }
        }
    }
}

TEST_CASE("hits are stable under Galois conjugation") {
    auto forms = load_newforms(fixture(725));
    auto res = full_scan(725, 5, forms);
    for (auto& h : res.hits) {
        const auto& P = h.report.eisenstein;
        auto conj = EisensteinParams::make(P.phi.pow(-1), P.N, P.M, P.L);
        bool found = false;
        for (auto& g : res.hits)
            if (g.report.eisenstein.phi == conj.phi && g.report.eisenstein.M == P.M && g.report.newform == h.report.newform)
                found = true;
        CHECK(found);
    }
}

TEST_CASE("full scan errors") {
    CHECK_THROWS_AS(full_scan(10, 3, {}), DomainError);
    CHECK_THROWS_AS(full_scan(121, 11, {}), MissingData);
    try {
        full_scan(121, 11, load_newforms(fixture(725)));
    } catch (const MissingData& e) {
        CHECK(std::string(e.what()).find("eiscong fetch --level 121") != std::string::npos);
    }
    CHECK_THROWS_AS(newforms_for_level(99, DataSources{}), MissingData);
    DataSources src;
    src.directories.push_back(std::string(EISCONG_TEST_DATA) + "/newforms");
    CHECK(newforms_for_level(234, src).size() == 5);
    src.files.push_back(fixture(121));
    CHECK(newforms_for_level(121, src).size() == 4);
}

namespace {

// Serves the level-121 fixture in the remote shape, split over two pages.
struct FakeRemote {
    httplib::Server svr;
    std::thread th;
    int port = 0;
    int hits = 0;

    FakeRemote() {
        json recs = json::parse(slurp(fixture(121)));
        json page1 = {{"data", json::array()}, {"next", "/good/api/mf_hecke_nf/?level=121&_offset=2"}};
        json page2 = {{"data", json::array()}, {"next", nullptr}};
        for (std::size_t i = 0; i < recs.size(); ++i) {
            json item = {{"label", recs[i]["label"]}, {"field_poly", recs[i]["field_poly"]}, {"an", recs[i]["an"]},
                         {"hecke_ring_power_basis", true}};
            (i < 2 ? page1 : page2)["data"].push_back(item);
        }
        page2["data"].push_back({{"label", "121.4.a.a"}, {"field_poly", {0, 1}}, {"an", {{1}}}});
        svr.Get("/good/api/mf_hecke_nf/", [=, this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            bool second = req.has_param("_offset");
            res.set_content((second ? page2 : page1).dump(), "application/json");
        });
        svr.Get("/bad/api/mf_hecke_nf/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"data": [{"label": "121.2.a.a", "field_poly": "x"}]})", "application/json");
        });
        svr.Get("/junk/api/mf_hecke_nf/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("<html>", "text/html");
        });
        svr.Get("/err/api/mf_hecke_nf/", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
        port = svr.bind_to_any_port("127.0.0.1");
        th = std::thread([this] { svr.listen_after_bind(); });
        svr.wait_until_ready();
    }
    ~FakeRemote() {
        svr.stop();
        th.join();
    }
    std::string url(const std::string& prefix) const { return "http://127.0.0.1:" + std::to_string(port) + prefix; }
};

FetchError::Kind kind_of(std::uint64_t level, const FetchOptions& o) {
    try {
        fetch_newforms(level, o);
    } catch (const FetchError& e) {
        return e.kind();
    }
    FAIL("no error");
    return FetchError::Kind::Cache;
}

}  // namespace

TEST_CASE("fetch, cache and offline mode") {
    FakeRemote remote;
    auto dir = scratch("cache");
    FetchOptions o;
    o.cache_dir = dir.string();
    o.endpoint = remote.url("/good");
    o.timeout = std::chrono::seconds(5);

    auto r = fetch_newforms(121, o);
    CHECK_FALSE(r.from_cache);
    CHECK(remote.hits == 2);
    REQUIRE(r.records.size() == 4);
    auto bundled = load_newforms(fixture(121));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r.records[i].label == bundled[i].label);
        CHECK(r.records[i].an == bundled[i].an);
    }
    CHECK(fs::exists(cache_path(o.cache_dir, 121)));

    o.offline = true;
    auto c = fetch_newforms(121, o);
    CHECK(c.from_cache);
    CHECK(c.records.size() == 4);
    CHECK(remote.hits == 2);
    CHECK(kind_of(725, o) == FetchError::Kind::Cache);
    try {
        fetch_newforms(725, o);
    } catch (const FetchError& e) {
        CHECK(std::string(e.what()).find("eiscong fetch --level 725") != std::string::npos);
    }
    o.offline = false;

    FetchOptions down = o;
    down.endpoint = "http://127.0.0.1:1";
    auto w = fetch_newforms(121, down);
    CHECK(w.from_cache);
    CHECK(w.records.size() == 4);
    CHECK_FALSE(w.warnings.empty());
    CHECK(kind_of(725, down) == FetchError::Kind::Network);

    o.endpoint = remote.url("/bad");
    CHECK(kind_of(122, o) == FetchError::Kind::Shape);
    o.endpoint = remote.url("/junk");
    CHECK(kind_of(122, o) == FetchError::Kind::Shape);
    o.endpoint = remote.url("/err");
    CHECK(kind_of(122, o) == FetchError::Kind::Http);
    CHECK_FALSE(fs::exists(cache_path(o.cache_dir, 122)));

    DataSources src;
    src.cache_dir = o.cache_dir;
    CHECK(newforms_for_level(121, src).size() == 4);
    fs::remove_all(dir);
}

TEST_CASE("cache directory") {
    ::setenv("EISCONG_CACHE", "/tmp/eiscong-cache-test", 1);
    CHECK(default_cache_dir() == "/tmp/eiscong-cache-test");
    CHECK(cache_path("/a", 121) == "/a/newforms_121.json");
    ::unsetenv("EISCONG_CACHE");
    CHECK_FALSE(default_cache_dir().empty());
}

TEST_CASE("scan at level 234 modulo 2 and 3") {
    auto forms = load_newforms(fixture(234));
    auto phi = DirichletCharacter::from_label("3.2.1");
    std::set<std::string> got;
    for (auto [M, L] : {std::pair{1, 26}, {2, 13}, {13, 2}, {26, 1}}) {
        auto P = EisensteinParams::make(phi, 234, M, L);
        auto E = build_E(P, 85);
        for (auto& f : forms)
            for (std::uint64_t q : {2u, 3u})
                if (scan(E, P, f, q, 84).matched) got.insert(P.refinement_name() + " " + f.label + " " + std::to_string(q));
    }
    std::set<std::string> want = {
        "ord_2,ord_13 234.2.a.a 2",   "ord_2,ord_13 234.2.a.c 2",   "ord_2,ord_13 234.2.a.d 2",
        "ord_2,crit_13 234.2.a.a 2",  "ord_2,crit_13 234.2.a.c 2",  "ord_2,crit_13 234.2.a.d 2",
        "crit_2,ord_13 234.2.a.e 3",  "crit_2,crit_13 234.2.a.e 3",
    };
    CHECK(got == want);
}

TEST_CASE("full_scan marks the largest M per ideal") {
    auto r725 = full_scan(725, 5, load_newforms(fixture(725)));
    REQUIRE(r725.hits.size() == 6);
    for (auto& h : r725.hits) {
        CHECK(h.same_ideal == 2);
        CHECK(h.largest_M == (h.report.eisenstein.M == 29));
    }
    auto r234 = full_scan(234, 3, load_newforms(fixture(234)));
    REQUIRE(r234.hits.size() == 1);
    CHECK(r234.hits[0].same_ideal == 1);
    CHECK(r234.hits[0].largest_M);
    auto j = json::parse(r725.to_json());
    CHECK(j["hits"][1]["largest_M"] == true);
    CHECK(r725.to_text().find("largest M among the 2 series") != std::string::npos);
}
