#pragma once
// Family-level assemblies: Selberg's {A, B}, the LSV sets, {A, B, C, C′},
// central-cover lifts and product decompositions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lieexp/lsv.hpp"
#include "lieexp/spectra.hpp"

namespace lieexp::expanders {

using matgrp::GroupEnum;
using matgrp::Mat;
using matgrp::ProjMatrix;
using spectra::SpectralReport;
using spectra::Verdict;

struct Options {
    std::size_t cap = matgrp::kDefaultCap;
    spectra::SpectralOptions spectral{};
    unsigned reseeds = 8;  // lsv_family: further seeds tried after a degenerate or OTHER result
};

struct FamilyResult {
    std::string family;  // selberg | lsv | abcc | cover | product
    std::uint64_t p = 0, q = 0;
    unsigned d = 0, e = 0;
    std::uint64_t seed = 0;
    std::string classification;
    std::uint64_t order = 0;
    SpectralReport report;
    std::vector<Verdict> verdicts;  // family-level checks; report.verdicts holds the bound checks
    nlohmann::json provenance;
    double runtime_ms = 0;

    bool all_pass() const;
    nlohmann::json to_json() const;
    /// family,p,q,d,e,seed,n,k,classification,lambda,bound,verdict,runtime_ms
    std::string csv_row() const;
    static std::string csv_header();
};

/// Cay(PSL₂(p), {A, B}). p = 2 → UnsupportedConfig.
FamilyResult selberg_family(std::uint32_t p, const Options& opt = {});

/// Everything an LSV instance needs before spectra: algebra data, the set S,
/// the enumerated group and its Cayley graph.
struct LsvConstruction {
    lsv::AlgebraSpec spec;
    lsv::GenSetS genset;
    GroupEnum group;
    spectra::CayleyGraph graph;
    matgrp::Classification classification;
    double runtime_ms = 0;
};

/// Re-seeds (seed, seed + 1, ...) on OTHER or a singular b.
LsvConstruction lsv_construct(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed, const Options& opt = {});
LsvConstruction lsv_construct(const lsv::AlgebraSpec& spec, const Options& opt = {});

/// Verdicts and spectra of a construction.
FamilyResult lsv_analyze(LsvConstruction c, const Options& opt = {});
/// Cay(⟨S⟩, S) for the LSV set S.
FamilyResult lsv_family(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed, const Options& opt = {});

/// Rebuilds an lsv result from its serialized AlgebraSpec.
FamilyResult lsv_from_provenance(const nlohmann::json& provenance, const Options& opt = {});

/// Cay(⟨A, B, C, C′⟩, {A, B, C, C′}) with the double-coset containment check.
FamilyResult abcc_family(std::uint32_t p, unsigned e, std::uint64_t seed, const Options& opt = {});

/// det-1 preimage of a projective class with lexicographically smallest codes.
Mat sl_lift(const ProjMatrix& m);

/// Lifts {A, B} (or `gens`) from PSL₂(p) to SL₂(p) and checks that the
/// quotient spectrum sits inside the cover spectrum as a multiset.
FamilyResult lift_cover(std::uint32_t p, const Options& opt = {});
FamilyResult lift_cover(const std::vector<ProjMatrix>& gens, const Options& opt = {});

/// Multiset containment within tol: every value of `small` matched to a
/// distinct value of `big`.
bool multiset_contained(std::vector<double> small, std::vector<double> big, double tol);

/// Generators of the upper (or lower) triangular subgroup of PSL₂(F):
/// the unipotent (1 1; 0 1) or its transpose, and diag(g, g⁻¹) for a primitive g.
std::vector<ProjMatrix> borel_gens(const ff::FieldRef& F, bool lower = false);

/// G = G₁·…·G_ℓ check for G_i = ⟨factor_gens[i]⟩, and Cay(G, ∪ S_i).
FamilyResult product_expander(const GroupEnum& G, const std::vector<std::vector<ProjMatrix>>& factor_gens,
                              const Options& opt = {});

struct SurveyRow {
    std::string family;
    std::uint64_t p = 0, q = 0;
    unsigned d = 2, e = 1;
    std::uint64_t seed = 1;
};

struct SurveyEntry {
    SurveyRow row;
    std::optional<FamilyResult> result;
    std::string error;
    bool unsupported = false;
};

/// Expands {"rows": [...], "selberg": {"p": [...]}, "lsv": {"q": [...], "d": 2,
/// "e": [...], "max_ell": N, "seed": s}, "abcc": {...}, "cover": {"p": [...]}}.
std::vector<SurveyRow> survey_rows(const nlohmann::json& config);
SurveyEntry run_row(const SurveyRow& row, const Options& opt = {});
/// Runs every row on `jobs` threads; a failing row records its error and the
/// run continues. Output order follows `rows`.
std::vector<SurveyEntry> survey(const std::vector<SurveyRow>& rows, const Options& opt = {}, unsigned jobs = 1);

}  // namespace lieexp::expanders
