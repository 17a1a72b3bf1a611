#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eiscong/eisenstein.hpp"
#include "eiscong/finite_field.hpp"
#include "eiscong/ideals.hpp"

namespace eiscong {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrecisionError : public DomainError {
public:
    using DomainError::DomainError;
};

class FetchError : public std::runtime_error {
public:
    enum class Kind { Network, Http, Shape, Cache };
    FetchError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class MissingData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NewformRecord {
    std::string label;
    std::uint64_t level = 0;
    unsigned weight = 2;
    std::vector<Int> field_poly;              // ascending, monic
    std::vector<std::vector<Rational>> an;    // an[n - 1], power basis in a root of field_poly
    // As ingested: coefficients in the Hecke-ring basis beta_i = basis_numerators[i](x) / basis_denominators[i].
    std::vector<std::vector<Int>> coefficients;
    std::vector<std::vector<Int>> basis_numerators;
    std::vector<Int> basis_denominators;

    unsigned degree() const { return static_cast<unsigned>(field_poly.size() - 1); }
    std::size_t precision() const { return an.size(); }
};

std::vector<NewformRecord> parse_newforms(const std::string& text, const std::string& source = "<input>");
std::vector<NewformRecord> load_newforms(const std::string& path);
std::string newforms_to_json(const std::vector<NewformRecord>& records);

struct FetchOptions {
    std::string endpoint = "https://www.lmfdb.org";
    std::string cache_dir;  // empty: default_cache_dir()
    bool offline = false;
    std::chrono::seconds timeout{30};
};

struct FetchResult {
    std::vector<NewformRecord> records;
    bool from_cache = false;
    std::vector<std::string> warnings;
};

// $EISCONG_CACHE, else $XDG_CACHE_HOME/eiscong, else ~/.cache/eiscong.
std::string default_cache_dir();
std::string cache_path(const std::string& cache_dir, std::uint64_t level);

// Maps one page of an LMFDB mf_hecke_nf response ({"data": [...]}) to records.
std::vector<NewformRecord> parse_remote_payload(const std::string& body, std::uint64_t level);
FetchResult fetch_newforms(std::uint64_t level, const FetchOptions& options = {});

struct DataSources {
    std::vector<std::string> files;        // explicit fixture files, searched first
    std::vector<std::string> directories;  // containing newforms_<N>.json
    std::string cache_dir;
};

// Bundled data directory, overridable by $EISCONG_DATA.
std::string default_data_dir();
std::vector<NewformRecord> newforms_for_level(std::uint64_t level, const DataSources& sources);

struct CongruenceReport {
    EisensteinParams eisenstein;
    std::string newform;
    std::uint64_t prime = 0;
    unsigned residue_degree = 0;
    std::optional<Embedding> embedding;
    std::string zeta_image, root_image;
    std::size_t checked_bound = 0;
    bool matched = false;
    std::optional<std::size_t> first_mismatch;

    std::string to_string() const;
};

// Every embedding pair is tried in the order of reduction_embeddings; a match reports the first that works,
// a failure the pair agreeing longest.
CongruenceReport scan(const QExpansion& E, const EisensteinParams& params, const NewformRecord& f, std::uint64_t q,
                      std::size_t B);

struct ScanHit {
    CongruenceReport report;
    IdealDescriptor descriptor;
    bool order_divisible = false;  // l | cuspidal_order(params)
    // Among hits with the same character, newform, prime and ideal: whether M is the largest, and how many there are.
    bool largest_M = true;
    std::size_t same_ideal = 1;
};

struct ScanSkip {
    std::string eisenstein, newform;
    std::uint64_t prime = 0;
    std::string reason;
};

struct FullScanResult {
    std::uint64_t N = 0, p = 0;
    std::size_t bound = 0;
    CandidateReport candidates;
    std::vector<std::uint64_t> primes;  // candidates prime to 6p
    std::vector<CongruenceReport> reports;
    std::vector<ScanHit> hits;
    std::vector<ScanSkip> skipped;

    // Hit indices grouped by Galois orbit of the character, M, L, newform and prime.
    std::vector<std::vector<std::size_t>> congruence_classes() const;
    std::string to_text() const;
    std::string to_json() const;
};

// bound 0 selects sturm_bound(N).
FullScanResult full_scan(std::uint64_t N, std::uint64_t p, const std::vector<NewformRecord>& newforms,
                         std::size_t bound = 0);

}  // namespace eiscong
