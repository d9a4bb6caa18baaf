#pragma once
// Cayley graphs of enumerated matrix groups and their spectral and
// combinatorial invariants. Δ = A/k throughout.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lieexp/eigensolver.hpp"
#include "lieexp/matgrp.hpp"

namespace lieexp::spectra {

using matgrp::GroupEnum;
using matgrp::Mat;
using matgrp::ProjMatrix;

/// k-regular graph as sorted adjacency rows (multi-edges repeat).
struct CayleyGraph {
    std::size_t n = 0, k = 0;
    std::vector<std::uint32_t> adj;  // n·k
    std::vector<Mat> connection;     // group elements labelling the edges; empty for plain graphs

    std::span<const std::uint32_t> row(std::size_t i) const { return {adj.data() + i * k, k}; }

    /// Validates length, range, symmetry (with multiplicity); sorts rows.
    static CayleyGraph from_adjacency(std::size_t n, std::size_t k, std::vector<std::uint32_t> adj);
    /// Parses "# n k" followed by "u v" lines. Throws InvalidArgument naming
    /// the broken invariant (format, range, regularity, symmetry).
    static CayleyGraph from_edge_list(std::istream& in);

    bool connected() const;
    /// 2-colouring, or nullopt when not bipartite.
    std::optional<std::vector<int>> bipartition() const;
    void matvec(std::span<const double> x, std::span<double> y) const;
};

/// Edges x ~ x·s for s ∈ S ∪ S⁻¹ taken as a set: an involution gives one edge.
/// Two equal generators are rejected. Throws InvalidArgument when S does not
/// generate G (message carries the reached fraction).
CayleyGraph cayley_graph(const GroupEnum& G, const std::vector<Mat>& S);
CayleyGraph cayley_graph(const GroupEnum& G, const std::vector<ProjMatrix>& S);
/// Edges x ~ x·c for every c of an explicit connection multiset, which must
/// be closed under inversion with multiplicity.
CayleyGraph cayley_graph_multiset(const GroupEnum& G, const std::vector<Mat>& connection);

void write_edge_list(const CayleyGraph& g, std::ostream& out);

struct TrivialEigen {
    double value = 1.0;
    std::vector<double> vector;  // unit norm
};

/// Eigenvectors pulled back from characters of G → F*/(F*)^m, m = gcd(dim, |F|−1).
/// When every generator has the same class the image is cyclic, generated by
/// that class, and each of its characters gives an eigenvector. Otherwise only
/// the constant vector is reported.
std::vector<TrivialEigen> trivial_eigendata(const GroupEnum& G, const CayleyGraph& g, const std::vector<Mat>& S);
std::vector<TrivialEigen> trivial_eigendata(const GroupEnum& G, const CayleyGraph& g,
                                            const std::vector<ProjMatrix>& S);
/// Plain graphs: the constant vector, and the sign vector when bipartite.
std::vector<TrivialEigen> trivial_eigendata(const CayleyGraph& g);

struct Verdict {
    std::string name;
    double value = 0, bound = 0;
    bool pass = false;
};

struct SpectralReport {
    std::size_t n = 0, k = 0;
    std::string method;           // dense | iterative
    std::vector<double> spectrum;  // descending, dense path only
    double lambda2 = 0;           // largest eigenvalue below 1 − tol (iterative: of the deflated operator)
    double lambda_min = 0;
    double residual = 0;          // iterative path
    std::size_t matvecs = 0;
    std::vector<double> trivial;  // detected trivial eigenvalues, with multiplicity
    double lambda_x = 0;          // largest |λ| among nontrivial eigenvalues
    double nontrivial_max = 0, nontrivial_min = 0;
    std::vector<Verdict> verdicts;
    double tol = 1e-8;
    double runtime_ms = 0;

    nlohmann::json to_json() const;
    bool all_pass() const;
};

inline constexpr std::size_t kDenseCap = 5000;

/// Full spectrum of Δ. Throws InvalidArgument above `dense_cap`.
SpectralReport full_spectrum_dense(const CayleyGraph& g, std::size_t dense_cap = kDenseCap);

struct Extremes {
    double lambda2 = 0, lambda_min = 0, residual = 0;
    std::size_t matvecs = 0;
};

/// Extreme eigenvalues of Δ on the orthogonal complement of `deflate`.
/// Throws NonConvergence with the residual.
Extremes lambda_extremes_iterative(const CayleyGraph& g, const std::vector<std::vector<double>>& deflate,
                                   double tol = 1e-7, const eigen::LanczosOptions& base = {});

struct SpectralOptions {
    std::size_t dense_cap = kDenseCap;
    double tol = 1e-8;            // eigenvalue comparisons
    double lanczos_tol = 1e-7;    // residual target on the iterative path
    eigen::LanczosOptions lanczos{};
};

/// Dense when n ≤ dense_cap, else iterative with the trivial vectors deflated.
/// Fills trivial, lambda_x and nontrivial_max/min; no verdicts.
SpectralReport analyze(const CayleyGraph& g, const std::vector<TrivialEigen>& trivial, const SpectralOptions& opt = {});

/// Removes one copy of each trivial value from the dense spectrum (matched
/// within tol) and returns max |λ| of the rest. Throws InternalError when a
/// trivial value is missing.
double lambda_nontrivial(SpectralReport& report, const std::vector<double>& trivial_values);

/// 2√q/(q+1).
double ramanujan_bound(std::uint64_t q);
/// d·q^{(d−1)/2} / ((q^d − 1)/(q − 1)).
double general_bound(std::uint64_t q, unsigned d);
inline constexpr double kUniformBound = 19.0 / 20.0;

/// Appends the Ramanujan (d = 2), general-d and 19/20 verdicts.
void add_bound_verdicts(SpectralReport& report, std::uint64_t q, unsigned d);

struct Expansion {
    double value = 0;
    std::vector<std::uint32_t> witness;
};

/// min |∂A|/|A| over 0 < |A| ≤ n/2 (outer vertex boundary). n ≤ 24.
Expansion vertex_expansion_bruteforce(const CayleyGraph& g);
/// min |E(A, Ā)|/(k|A|) over 0 < |A| ≤ n/2. n ≤ 24.
Expansion edge_expansion_bruteforce(const CayleyGraph& g);

/// ((1−λ₂)/2, √(2(1−λ₂))).
std::pair<double, double> cheeger_bounds(double lambda2);

/// TV distance between the lazy walk ((I+Δ)/2)^t started at `start` and uniform.
double mixing_tv(const CayleyGraph& g, std::size_t t, std::uint32_t start = 0);
/// Same for t = 0..t_max.
std::vector<double> mixing_profile(const CayleyGraph& g, std::size_t t_max, std::uint32_t start = 0);

void write_spectrum_csv(const SpectralReport& r, std::ostream& out);

}  // namespace lieexp::spectra
