#pragma once
// Split cyclic algebra construction and the generators b_u = u b u⁻¹.
//
// A(K) = ⊕ K ξ_i z^j with z ξ = φ(ξ) z, z^d = 1 + y is realized on the
// K-vector space L = F_{q^{de}} (gcd(d,e) = 1):
//   u ∈ F_{q^d} acts by multiplication, z acts by v ↦ c·τ(v)
// where τ ∈ Gal(L/K) restricts to the q-Frobenius on F_{q^d} and
// N_{L/K}(c) = 1 + y. Matrices are written in the K-basis ξ_i = τ^i(ξ₀).

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "lieexp/ff.hpp"
#include "lieexp/matgrp.hpp"

namespace lieexp::lsv {

using ff::Elem;
using ff::FieldRef;
using matgrp::Mat;
using matgrp::ProjMatrix;

struct AlgebraSpec {
    std::uint64_t q = 0;
    unsigned d = 0, e = 0;
    std::uint64_t seed = 0;

    FieldRef Fq;        // F_q
    ff::Poly ideal;     // g(y) over F_q, R/I = F_q[y]/(g)
    FieldRef K;         // residue field F_{q^e}
    Elem y;             // class of y in K
    FieldRef L0;        // F_{q^d} over F_q
    Elem xi0;           // normal basis generator of L0/F_q
    FieldRef L;         // F_{q^{de}} as a degree-d extension of K
    std::shared_ptr<const ff::Embedding> embed_L0;  // L0 → L
    unsigned t = 1;     // e·t ≡ 1 (mod d); τ = (x ↦ x^{|K|})^t
    Elem c;             // N_{L/K}(c) = 1 + y

    std::vector<Elem> basis;  // ξ_i = τ^i(ξ₀) in L
    Mat coord_inv;            // native K-coordinates → ξ-coordinates

    Elem tau(const Elem& x) const;
    /// Matrix over K of a K-linear map on L, given by its values on ξ_j.
    Mat matrix_of(const std::vector<Elem>& images) const;
};

/// Builds and verifies all algebra data. gcd(d,e) ≠ 1 → UnsupportedConfig.
AlgebraSpec build_spec(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed);

/// Multiplication by u ∈ L0* on L, in the ξ basis.
Mat rep_torus(const AlgebraSpec& spec, const Elem& u);
/// v ↦ c·τ(v).
Mat rep_z(const AlgebraSpec& spec);
/// 1 + z⁻¹ = I + Z^{d-1}/(1+y), projectivized.
ProjMatrix gen_b(const AlgebraSpec& spec);

struct GenSetS {
    std::vector<Elem> coset_reps;      // u ∈ L0*/F_q*
    std::vector<ProjMatrix> S;         // b_u in coset_reps order; S[0] = C
    std::vector<ProjMatrix> T;         // torus image
    std::vector<ProjMatrix> T1;        // det-class-trivial part of T
    std::vector<std::vector<std::size_t>> orbits;  // of S under T1 conjugation
    ProjMatrix C;
    std::optional<ProjMatrix> C_prime;
};

GenSetS gens_S(const AlgebraSpec& spec);

/// E_d = {cos(2πk/d)}, deduplicated, descending.
std::vector<double> trivial_eigs(unsigned d);

struct AbccGens {
    AlgebraSpec spec;
    GenSetS genset;
    std::vector<ProjMatrix> gens;  // A, B, C[, C′]
};

/// A = (1 1; 0 1), B = (0 1; -1 0) over the prime field inside K = F_{p^e},
/// and C, C′ from the d = 2 construction with q = p.
AbccGens abcc_gens(std::uint32_t p, unsigned e, std::uint64_t seed = 1);

/// A and B of the given field as projective matrices.
ProjMatrix unipotent_A(const FieldRef& F);
ProjMatrix weyl_B(const FieldRef& F);

nlohmann::json spec_to_json(const AlgebraSpec& spec, const GenSetS* genset = nullptr);
/// Rebuilds from serialized fields and elements, without any re-search.
AlgebraSpec spec_from_json(const nlohmann::json& j);

}  // namespace lieexp::lsv
