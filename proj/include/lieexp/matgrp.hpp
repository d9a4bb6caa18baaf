#pragma once
// Matrices over finite fields, projective classes, and BFS enumeration of
// finitely generated matrix groups.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lieexp/ff.hpp"

namespace lieexp::matgrp {

using ff::Code;
using ff::Elem;
using ff::FieldRef;

/// Square matrix over a finite field, entries stored row-major as codes.
class Mat {
public:
    Mat() = default;
    Mat(FieldRef field, unsigned dim);
    Mat(FieldRef field, unsigned dim, std::vector<Code> codes);

    static Mat identity(const FieldRef& field, unsigned dim);
    static Mat scalar(const FieldRef& field, unsigned dim, Code c);
    /// Row-major list of entries.
    static Mat from_elems(unsigned dim, const std::vector<Elem>& entries);

    unsigned dim() const { return d_; }
    const FieldRef& field() const { return f_; }
    const std::vector<Code>& codes() const { return a_; }
    Code code(unsigned i, unsigned j) const { return a_[i * d_ + j]; }
    Elem at(unsigned i, unsigned j) const { return f_->elem(code(i, j)); }
    void set(unsigned i, unsigned j, Code c) { a_[i * d_ + j] = c; }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(Code c) const;
    Mat pow(std::uint64_t n) const;
    Elem det() const;
    /// Throws InvalidArgument if singular.
    Mat inverse() const;
    bool is_invertible() const { return !det().is_zero(); }

    bool operator==(const Mat& o) const { return f_.get() == o.f_.get() && d_ == o.d_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

private:
    void check(const Mat& o) const;
    FieldRef f_;
    unsigned d_ = 0;
    std::vector<Code> a_;
};

/// Element of PGL_d: canonical representative whose first nonzero entry
/// (row-major) equals 1.
class ProjMatrix {
public:
    ProjMatrix() = default;
    /// Canonicalizes; throws on singular input.
    explicit ProjMatrix(const Mat& m);

    const Mat& mat() const { return m_; }
    unsigned dim() const { return m_.dim(); }
    const FieldRef& field() const { return m_.field(); }

    ProjMatrix operator*(const ProjMatrix& o) const { return ProjMatrix(m_ * o.m_); }
    ProjMatrix inverse() const { return ProjMatrix(m_.inverse()); }
    bool operator==(const ProjMatrix& o) const { return m_ == o.m_; }
    bool operator!=(const ProjMatrix& o) const { return !(m_ == o.m_); }
    bool is_identity() const { return m_ == Mat::identity(m_.field(), m_.dim()); }

private:
    Mat m_;
};

ProjMatrix proj_canonical(const Mat& m);

/// In-place canonicalization of a row-major code block (first nonzero → 1).
void canonicalize_codes(const ff::Field& F, std::span<Code> entries);
/// out = a·b on row-major code blocks.
void mul_codes(const ff::Field& F, unsigned d, const Code* a, const Code* b, Code* out);

/// BFS-enumerated group. Element 0 is the identity.
class GroupEnum {
public:
    GroupEnum(FieldRef field, unsigned dim, bool projective);

    const FieldRef& field() const { return f_; }
    unsigned dim() const { return d_; }
    bool projective() const { return projective_; }
    bool complete() const { return complete_; }
    std::size_t size() const { return n_; }
    const std::vector<Mat>& generators() const { return gens_; }

    std::span<const Code> codes(std::size_t i) const { return {data_.data() + i * d_ * d_, d_ * d_}; }
    Mat element(std::size_t i) const;
    ProjMatrix proj_element(std::size_t i) const;
    std::optional<std::uint32_t> index_of(const Mat& m) const;
    std::optional<std::uint32_t> index_of_codes(std::span<const Code> c) const;
    /// Index of element(i) · m (m in the group's normal form convention).
    std::optional<std::uint32_t> right_mul(std::size_t i, const Mat& m) const;

    /// Normal form used for membership: canonical if projective, else verbatim.
    Mat normalize(const Mat& m) const;

    nlohmann::json to_json() const;

private:
    friend GroupEnum generate_group(const std::vector<Mat>&, std::size_t, bool);
    std::uint32_t insert(std::span<const Code> c, bool& inserted);
    std::uint64_t hash(std::span<const Code> c) const;
    void rehash(std::size_t buckets);

    FieldRef f_;
    unsigned d_;
    bool projective_;
    bool complete_ = false;
    std::size_t n_ = 0;
    std::vector<Mat> gens_;
    std::vector<Code> data_;
    std::vector<std::uint32_t> table_;  // open addressing, stores index + 1
};

inline constexpr std::size_t kDefaultCap = 2'000'000;

/// BFS closure under gens then their inverses (FIFO). Stops with
/// complete() == false when the closure would exceed `cap`.
GroupEnum generate_group(const std::vector<Mat>& gens, std::size_t cap = kDefaultCap, bool projective = true);
GroupEnum generate_group(const std::vector<ProjMatrix>& gens, std::size_t cap = kDefaultCap);

/// |PGL_d(ℓ)|, |PSL_d(ℓ)|, |SL_d(ℓ)|.
std::uint64_t order_pgl(unsigned d, std::uint64_t ell);
std::uint64_t order_psl(unsigned d, std::uint64_t ell);
std::uint64_t order_sl(unsigned d, std::uint64_t ell);

enum class GroupClass { Psl, Pgl, Other };

struct Classification {
    GroupClass tag = GroupClass::Other;
    std::uint64_t order = 0;
    std::string name() const;
};

/// Compares |G| with |PSL_d(ℓ)| and |PGL_d(ℓ)| (PSL preferred when equal).
Classification classify_quotient(const GroupEnum& G, std::uint64_t ell);

/// Class of det(M) in F*/(F*)^m with m = gcd(d, |F| - 1); well defined on
/// projective classes. Returns the discrete log of det modulo m.
std::uint32_t det_class(const Mat& m);
std::uint32_t det_class_modulus(unsigned d, const ff::Field& F);
/// True when det is a square (dimension 2).
bool det_square_class(const ProjMatrix& m);

struct Coverage {
    bool covered = false;
    std::size_t reached = 0;
};

/// |S_1·S_2·…·S_ℓ| via bitsets over element indices.
Coverage product_coverage(const GroupEnum& G, const std::vector<std::vector<std::uint32_t>>& factors);

/// Orbits of S under s ↦ h s h⁻¹, each a sorted list of positions in S;
/// orbits ordered by smallest member. Throws if S is not H-stable.
std::vector<std::vector<std::size_t>> conjugate_orbits(const std::vector<ProjMatrix>& S,
                                                       const std::vector<ProjMatrix>& H);

/// Order of a group element (≤ limit, else 0).
std::uint64_t element_order(const ProjMatrix& m, std::uint64_t limit = 1u << 24);

nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const FieldRef& field, const nlohmann::json& j);

}  // namespace lieexp::matgrp
