#pragma once
// Finite-field towers F_p ⊆ F_q ⊆ F_{q^d} ⊆ ... with exact arithmetic.
//
// Every element of a field of order p^n is stored as a code in [0, p^n): the
// base-p digits of the code are its coordinates over F_p in the tower's
// product basis. Consequently
//   * the coordinates over ANY subfield in the tower are the base-|sub| digits,
//   * a subfield element keeps its code when viewed inside an extension,
//   * addition is digit-wise mod p (XOR for p = 2).
// Multiplication goes through log/exp tables built once per field.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lieexp/error.hpp"

namespace lieexp::ff {

using Code = std::uint32_t;

/// Coefficients low-to-high, each a code of the coefficient field.
using Poly = std::vector<Code>;

class Field;
using FieldRef = std::shared_ptr<const Field>;

/// Largest field for which log/exp tables are built.
inline constexpr std::uint64_t kMaxFieldSize = std::uint64_t{1} << 22;

class Elem;

class Field : public std::enable_shared_from_this<Field> {
public:
    static FieldRef prime(std::uint32_t p);
    /// F = base[x]/(modulus). The modulus must be monic and irreducible over base.
    static FieldRef extension(const FieldRef& base, Poly modulus);

    std::uint32_t characteristic() const { return p_; }
    std::uint64_t size() const { return size_; }
    /// Degree over the immediate base (1 for a prime field).
    unsigned degree() const { return static_cast<unsigned>(modulus_.empty() ? 1 : modulus_.size() - 1); }
    unsigned absolute_degree() const { return abs_degree_; }
    bool is_prime() const { return base_ == nullptr; }
    const FieldRef& base() const { return base_; }
    const Poly& modulus() const { return modulus_; }

    /// True when `sub` is this field or one of its tower ancestors.
    bool has_subfield(const Field& sub) const;
    /// Degree of this field over the tower ancestor `sub`.
    unsigned degree_over(const Field& sub) const;

    Code add(Code a, Code b) const {
        if (p_ == 2) return a ^ b;
        if (abs_degree_ == 1) {
            Code s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_digits(a, b);
    }
    Code neg(Code a) const;
    Code sub(Code a, Code b) const { return add(a, neg(b)); }
    Code mul(Code a, Code b) const {
        if (a == 0 || b == 0) return 0;
        std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
        if (s >= size_ - 1) s -= size_ - 1;
        return exp_[s];
    }
    Code inv(Code a) const;
    Code div(Code a, Code b) const { return mul(a, inv(b)); }
    Code pow(Code a, std::uint64_t n) const;
    Code scalar(std::uint64_t n) const;  // n·1

    /// Primitive element: generator of the multiplicative group.
    Code generator() const { return exp_.size() > 1 ? exp_[1] : 1; }
    std::uint32_t log(Code a) const;
    Code exp(std::uint64_t k) const { return exp_[k % (size_ - 1)]; }
    /// Class of x in base[x]/(modulus); for a prime field, 1.
    Code adjoined() const;

    /// Coordinates over the ancestor `over`, length degree_over(over).
    std::vector<Code> coords(Code x, const Field& over) const;
    Code from_coords(const std::vector<Code>& c, const Field& over) const;

    Elem elem(Code c) const;
    Elem zero_elem() const;
    Elem one_elem() const;

    /// Short human description, e.g. "F_2^3 / F_2".
    std::string describe() const;

private:
    Field() = default;
    Code add_digits(Code a, Code b) const;
    Code mul_slow(Code a, Code b) const;
    void build_tables();

    std::uint32_t p_ = 0;
    std::uint64_t size_ = 0;
    unsigned abs_degree_ = 1;
    FieldRef base_;
    Poly modulus_;
    std::vector<Code> exp_;
    std::vector<std::uint32_t> log_;
};

/// Field element carrying its field. Mixed-field arithmetic throws.
class Elem {
public:
    Elem() = default;
    Elem(FieldRef f, Code c);

    const FieldRef& field() const { return f_; }
    Code code() const { return c_; }
    bool is_zero() const { return c_ == 0; }
    bool is_one() const { return c_ == 1; }

    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator-() const;
    Elem operator*(const Elem& o) const;
    Elem operator/(const Elem& o) const;
    Elem inv() const;
    Elem pow(std::uint64_t n) const;

    bool operator==(const Elem& o) const { return f_.get() == o.f_.get() && c_ == o.c_; }
    bool operator!=(const Elem& o) const { return !(*this == o); }

private:
    void check(const Elem& o) const;
    FieldRef f_;
    Code c_ = 0;
};

// ---------------------------------------------------------------------------
// polynomials over a field (codes)

namespace poly {
void trim(Poly& a);
int deg(const Poly& a);
Poly add(const Field& F, const Poly& a, const Poly& b);
Poly sub(const Field& F, const Poly& a, const Poly& b);
Poly mul(const Field& F, const Poly& a, const Poly& b);
Poly mod(const Field& F, Poly a, const Poly& m);
Poly gcd(const Field& F, Poly a, Poly b);
Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Field& F, const Poly& a, std::uint64_t n, const Poly& m);
Code eval(const Field& F, const Poly& a, Code x);
}  // namespace poly

/// Rabin's test: g is irreducible of degree n iff x^{Q^n} ≡ x (mod g) and
/// gcd(x^{Q^{n/r}} - x, g) = 1 for every prime r | n.
bool is_irreducible(const Field& F, const Poly& g);

/// Seeded random search for a monic irreducible of the given degree.
/// degree 1 returns `base` itself.
FieldRef make_extension(const FieldRef& base, unsigned degree, std::uint64_t seed);

/// x ↦ x^{|base|}; `base` must lie in x's tower.
Elem frobenius(const Elem& x, const Field& base);

/// Galois norm and trace of x from its field down to `base`, returned as base elements.
Elem norm(const Elem& x, const FieldRef& base);
Elem trace(const Elem& x, const FieldRef& base);

/// ξ₀ whose Frobenius orbit over `base` is a basis of `top`.
Elem find_normal_basis_generator(const FieldRef& top, const FieldRef& base, std::uint64_t seed);

/// c ∈ top with N_{top/base}(c) = a (a ≠ 0, a ∈ base).
Elem solve_norm_equation(const FieldRef& top, const FieldRef& base, const Elem& a, std::uint64_t seed);

/// Monic irreducible g over F_q of degree e with g(0) ≠ 0 and g(-1) ≠ 0.
Poly irreducible_ideal_poly(const FieldRef& Fq, unsigned e, std::uint64_t seed);

/// Rank over `base` of a list of elements of `top` (coordinates over base).
unsigned rank_over(const std::vector<Elem>& xs, const Field& base);

/// Baby-step giant-step: smallest k ≥ 0 with g^k = a in F*, or -1.
std::int64_t discrete_log(const Field& F, Code g, Code a, std::uint64_t order);

/// Field homomorphism source → target given by the image of the source's
/// adjoined generator (and recursively of its base).
class Embedding {
public:
    Embedding(FieldRef source, FieldRef target);

    const FieldRef& source() const { return src_; }
    const FieldRef& target() const { return tgt_; }
    const Elem& generator_image() const { return gen_image_; }

    Code map(Code x) const;
    Elem operator()(const Elem& x) const;

private:
    FieldRef src_, tgt_;
    std::shared_ptr<const Embedding> base_embed_;  // null when src base is a tower ancestor of tgt
    Elem gen_image_;
    std::vector<Code> powers_;  // gen_image^i in target, i < degree
};

/// {"characteristic": p, "tower": [[modulus codes], ...]} from the prime field up.
nlohmann::json to_json(const Field& F);
FieldRef field_from_json(const nlohmann::json& j);

/// Integer helpers shared across modules.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
bool is_prime(std::uint64_t n);
/// (p, k) with q = p^k, or throws if q is not a prime power.
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q);
std::uint64_t ipow(std::uint64_t b, unsigned e);

}  // namespace lieexp::ff
