#include "lieexp/ff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace lieexp::ff {

// ---------------------------------------------------------------------------
// integer helpers

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
    if (q < 2) throw InvalidArgument("not a prime power: " + std::to_string(q));
    auto f = prime_factors(q);
    if (f.size() != 1) throw InvalidArgument("not a prime power: " + std::to_string(q));
    unsigned k = 0;
    while (q > 1) {
        q /= f[0];
        ++k;
    }
    return {static_cast<std::uint32_t>(f[0]), k};
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// ---------------------------------------------------------------------------
// Field

FieldRef Field::prime(std::uint32_t p) {
    if (!ff::is_prime(p)) throw InvalidArgument("characteristic must be prime, got " + std::to_string(p));
    if (p > kMaxFieldSize) throw UnsupportedConfig("prime too large for table arithmetic");
    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = p;
    f->size_ = p;
    f->abs_degree_ = 1;
    f->build_tables();
    return f;
}

FieldRef Field::extension(const FieldRef& base, Poly modulus) {
    if (!base) throw InvalidArgument("extension of null field");
    poly::trim(modulus);
    if (modulus.size() < 2) throw InvalidArgument("modulus must have degree >= 1");
    if (modulus.back() != 1) throw InvalidArgument("modulus must be monic");
    for (Code c : modulus)
        if (c >= base->size()) throw InvalidArgument("modulus coefficient outside base field");
    const unsigned n = static_cast<unsigned>(modulus.size() - 1);
    const long double approx = std::pow(static_cast<long double>(base->size()), n);
    if (approx > static_cast<long double>(kMaxFieldSize))
        throw UnsupportedConfig("field too large for table arithmetic");
    if (!is_irreducible(*base, modulus)) throw InvalidArgument("modulus is not irreducible over base");
    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = base->p_;
    f->size_ = ipow(base->size_, n);
    f->abs_degree_ = base->abs_degree_ * n;
    f->base_ = base;
    f->modulus_ = std::move(modulus);
    f->build_tables();
    return f;
}

bool Field::has_subfield(const Field& sub) const {
    for (const Field* f = this; f; f = f->base_.get())
        if (f == &sub) return true;
    return false;
}

unsigned Field::degree_over(const Field& sub) const {
    if (!has_subfield(sub)) throw InvalidArgument("field " + sub.describe() + " is not in the tower of " + describe());
    return abs_degree_ / sub.abs_degree_;
}

Code Field::add_digits(Code a, Code b) const {
    Code res = 0, mult = 1;
    while (a | b) {
        Code s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        res += s * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return res;
}

Code Field::neg(Code a) const {
    if (p_ == 2 || a == 0) return a;
    if (abs_degree_ == 1) return p_ - a;
    Code res = 0, mult = 1;
    while (a) {
        Code d = a % p_;
        res += (d ? p_ - d : 0) * mult;
        a /= p_;
        mult *= p_;
    }
    return res;
}

Code Field::inv(Code a) const {
    if (a == 0) throw InvalidArgument("inverse of zero");
    if (size_ == 2) return 1;
    std::uint64_t l = log_[a];
    return exp_[l == 0 ? 0 : (size_ - 1 - l)];
}

Code Field::pow(Code a, std::uint64_t n) const {
    if (n == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<unsigned __int128>(log_[a]) * n) % (size_ - 1)];
}

Code Field::scalar(std::uint64_t n) const { return static_cast<Code>(n % p_); }

std::uint32_t Field::log(Code a) const {
    if (a == 0) throw InvalidArgument("log of zero");
    return log_[a];
}

Code Field::adjoined() const { return is_prime() ? 1 : static_cast<Code>(base_->size_); }

std::vector<Code> Field::coords(Code x, const Field& over) const {
    const unsigned n = degree_over(over);
    std::vector<Code> c(n);
    const auto q = static_cast<Code>(over.size_);
    for (unsigned i = 0; i < n; ++i) {
        c[i] = x % q;
        x /= q;
    }
    return c;
}

Code Field::from_coords(const std::vector<Code>& c, const Field& over) const {
    const unsigned n = degree_over(over);
    if (c.size() != n) throw InvalidArgument("coordinate vector has wrong length");
    Code x = 0;
    const auto q = static_cast<Code>(over.size_);
    for (unsigned i = n; i-- > 0;) x = x * q + c[i];
    return x;
}

// Product in base[x]/(modulus) on digit vectors; only used to build tables.
Code Field::mul_slow(Code a, Code b) const {
    if (is_prime()) return static_cast<Code>((std::uint64_t{a} * b) % p_);
    const Field& B = *base_;
    const unsigned n = degree();
    std::vector<Code> x = coords(a, B), y = coords(b, B);
    std::vector<Code> prod(2 * n - 1, 0);
    for (unsigned i = 0; i < n; ++i) {
        if (!x[i]) continue;
        for (unsigned j = 0; j < n; ++j) prod[i + j] = B.add(prod[i + j], B.mul(x[i], y[j]));
    }
    for (unsigned k = 2 * n - 1; k-- > n;) {
        const Code c = prod[k];
        if (!c) continue;
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for (unsigned i = 0; i < n; ++i) prod[k - n + i] = B.sub(prod[k - n + i], B.mul(c, modulus_[i]));
        prod[k] = 0;
    }
    prod.resize(n);
    return from_coords(prod, B);
}

void Field::build_tables() {
    const std::uint64_t order = size_ - 1;
    exp_.assign(order == 0 ? 1 : order, 1);
    log_.assign(size_, 0);
    if (size_ == 2) {
        exp_ = {1};
        return;
    }
    const auto primes = prime_factors(order);
    auto slow_pow = [&](Code a, std::uint64_t e) {
        Code r = 1;
        while (e) {
            if (e & 1) r = mul_slow(r, a);
            a = mul_slow(a, a);
            e >>= 1;
        }
        return r;
    };
    Code g = 0;
    const Code first = is_prime() ? 2 : adjoined();
    for (std::uint64_t c = first; c < size_ + first; ++c) {
        Code cand = static_cast<Code>(c % size_);
        if (cand == 0) continue;
        bool primitive = true;
        for (auto r : primes)
            if (slow_pow(cand, order / r) == 1) {
                primitive = false;
                break;
            }
        if (primitive) {
            g = cand;
            break;
        }
    }
    if (g == 0) throw InternalError("no primitive element found in " + describe());
    Code x = 1;
    for (std::uint64_t k = 0; k < order; ++k) {
        exp_[k] = x;
        log_[x] = static_cast<std::uint32_t>(k);
        x = mul_slow(x, g);
    }
    if (x != 1) throw InternalError("multiplicative order mismatch in " + describe());
}

Elem Field::elem(Code c) const {
    if (c >= size_) throw InvalidArgument("code out of range for " + describe());
    return Elem(shared_from_this(), c);
}
Elem Field::zero_elem() const { return elem(0); }
Elem Field::one_elem() const { return elem(1); }

std::string Field::describe() const {
    std::ostringstream os;
    os << "F_" << p_;
    if (abs_degree_ > 1) os << "^" << abs_degree_;
    if (base_) {
        os << " / F_" << p_;
        if (base_->abs_degree_ > 1) os << "^" << base_->abs_degree_;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Elem

Elem::Elem(FieldRef f, Code c) : f_(std::move(f)), c_(c) {
    if (!f_) throw InvalidArgument("element without field");
}

void Elem::check(const Elem& o) const {
    if (!f_ || f_.get() != o.f_.get())
        throw InvalidArgument("mixed-field arithmetic without an explicit embedding");
}

Elem Elem::operator+(const Elem& o) const {
    check(o);
    return {f_, f_->add(c_, o.c_)};
}
Elem Elem::operator-(const Elem& o) const {
    check(o);
    return {f_, f_->sub(c_, o.c_)};
}
Elem Elem::operator-() const { return {f_, f_->neg(c_)}; }
Elem Elem::operator*(const Elem& o) const {
    check(o);
    return {f_, f_->mul(c_, o.c_)};
}
Elem Elem::operator/(const Elem& o) const {
    check(o);
    return {f_, f_->div(c_, o.c_)};
}
Elem Elem::inv() const { return {f_, f_->inv(c_)}; }
Elem Elem::pow(std::uint64_t n) const { return {f_, f_->pow(c_, n)}; }

// ---------------------------------------------------------------------------
// polynomials

namespace poly {

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Poly& a) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i]) return static_cast<int>(i);
    return -1;
}

Poly add(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Poly sub(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Poly mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

Poly mod(const Field& F, Poly a, const Poly& m) {
    const int dm = deg(m);
    if (dm < 0) throw InvalidArgument("polynomial division by zero");
    trim(a);
    const Code lead_inv = F.inv(m[dm]);
    for (int k = deg(a); k >= dm; k = deg(a)) {
        const Code c = F.mul(a[k], lead_inv);
        for (int i = 0; i <= dm; ++i) a[k - dm + i] = F.sub(a[k - dm + i], F.mul(c, m[i]));
        trim(a);
    }
    return a;
}

Poly gcd(const Field& F, Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Code li = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, li);
    }
    return a;
}

Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

Poly powmod(const Field& F, const Poly& a, std::uint64_t n, const Poly& m) {
    Poly r{1}, base = mod(F, a, m);
    r = mod(F, r, m);
    while (n) {
        if (n & 1) r = mulmod(F, r, base, m);
        base = mulmod(F, base, base, m);
        n >>= 1;
    }
    return r;
}

Code eval(const Field& F, const Poly& a, Code x) {
    Code r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
    return r;
}

}  // namespace poly

namespace {

// x^{Q^k} mod g by k successive Q-th powers.
Poly frobenius_power_of_x(const Field& F, const Poly& g, unsigned k) {
    Poly x = poly::mod(F, Poly{0, 1}, g);
    for (unsigned i = 0; i < k; ++i) x = poly::powmod(F, x, F.size(), g);
    return x;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

}  // namespace

bool is_irreducible(const Field& F, const Poly& g_in) {
    Poly g = g_in;
    poly::trim(g);
    const int n = poly::deg(g);
    if (n < 1) return false;
    if (n == 1) return true;
    const Poly x{0, 1};
    if (frobenius_power_of_x(F, g, static_cast<unsigned>(n)) != poly::mod(F, x, g)) return false;
    for (auto r : prime_factors(static_cast<std::uint64_t>(n))) {
        Poly h = poly::sub(F, frobenius_power_of_x(F, g, static_cast<unsigned>(n / r)), x);
        if (poly::deg(poly::gcd(F, h, g)) != 0) return false;
    }
    return true;
}

FieldRef make_extension(const FieldRef& base, unsigned degree, std::uint64_t seed) {
    if (degree == 0) throw InvalidArgument("extension degree must be >= 1");
    if (degree == 1) return base;
    std::mt19937_64 rng(seed);
    const std::uint64_t Q = base->size();
    for (;;) {
        Poly g(degree + 1);
        for (unsigned i = 0; i < degree; ++i) g[i] = static_cast<Code>(draw(rng, Q));
        g[degree] = 1;
        if (g[0] == 0) continue;
        if (is_irreducible(*base, g)) return Field::extension(base, std::move(g));
    }
}

Elem frobenius(const Elem& x, const Field& base) {
    const Field& F = *x.field();
    if (!F.has_subfield(base)) throw InvalidArgument("frobenius: base is not in the element's tower");
    return x.pow(base.size());
}

namespace {

Elem as_base_elem(const Elem& x, const FieldRef& base) {
    if (x.code() >= base->size()) throw InternalError("value does not lie in the requested subfield");
    return base->elem(x.code());
}

}  // namespace

Elem norm(const Elem& x, const FieldRef& base) {
    const unsigned n = x.field()->degree_over(*base);
    Elem acc = x.field()->one_elem(), y = x;
    for (unsigned i = 0; i < n; ++i) {
        acc = acc * y;
        y = y.pow(base->size());
    }
    return as_base_elem(acc, base);
}

Elem trace(const Elem& x, const FieldRef& base) {
    const unsigned n = x.field()->degree_over(*base);
    Elem acc = x.field()->zero_elem(), y = x;
    for (unsigned i = 0; i < n; ++i) {
        acc = acc + y;
        y = y.pow(base->size());
    }
    return as_base_elem(acc, base);
}

unsigned rank_over(const std::vector<Elem>& xs, const Field& base) {
    if (xs.empty()) return 0;
    const Field& top = *xs.front().field();
    const unsigned n = top.degree_over(base);
    std::vector<std::vector<Code>> rows;
    for (const auto& x : xs) {
        if (x.field().get() != &top) throw InvalidArgument("rank_over: elements from different fields");
        rows.push_back(top.coords(x.code(), base));
    }
    unsigned rank = 0;
    for (unsigned col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        const Code li = base.inv(rows[rank][col]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const Code f = base.mul(rows[r][col], li);
            for (unsigned c = 0; c < n; ++c) rows[r][c] = base.sub(rows[r][c], base.mul(f, rows[rank][c]));
        }
        ++rank;
    }
    return rank;
}

Elem find_normal_basis_generator(const FieldRef& top, const FieldRef& base, std::uint64_t seed) {
    const unsigned d = top->degree_over(*base);
    auto is_normal = [&](Code c) {
        std::vector<Elem> orbit;
        Elem x = top->elem(c);
        for (unsigned i = 0; i < d; ++i) {
            orbit.push_back(x);
            x = frobenius(x, *base);
        }
        return rank_over(orbit, *base) == d;
    };
    if (d == 1) return top->one_elem();
    std::mt19937_64 rng(seed);
    const std::uint64_t attempts = 10 * top->size();
    for (std::uint64_t i = 0; i < attempts; ++i) {
        const auto c = static_cast<Code>(1 + draw(rng, top->size() - 1));
        if (is_normal(c)) return top->elem(c);
    }
    for (Code c = 1; c < top->size(); ++c)
        if (is_normal(c)) return top->elem(c);
    throw InternalError("no normal basis generator found");
}

std::int64_t discrete_log(const Field& F, Code g, Code a, std::uint64_t order) {
    if (a == 0) return -1;
    const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
    std::unordered_map<Code, std::uint64_t> baby;
    Code x = 1;
    for (std::uint64_t j = 0; j < m; ++j) {
        baby.emplace(x, j);
        x = F.mul(x, g);
    }
    const Code giant = F.inv(F.pow(g, m));
    Code y = a;
    for (std::uint64_t i = 0; i <= m; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) return static_cast<std::int64_t>((i * m + it->second) % order);
        y = F.mul(y, giant);
    }
    return -1;
}

Elem solve_norm_equation(const FieldRef& top, const FieldRef& base, const Elem& a, std::uint64_t /*seed*/) {
    if (a.field().get() != base.get()) throw InvalidArgument("norm equation: right-hand side not in base field");
    if (a.is_zero()) throw InvalidArgument("norm equation: zero has no nonzero norm preimage");
    const Elem g = top->elem(top->generator());
    const Elem ng = norm(g, base);
    const std::uint64_t order = base->size() - 1;
    const std::int64_t k = discrete_log(*base, ng.code(), a.code(), order);
    if (k < 0) throw InternalError("norm of a primitive element does not generate the base group");
    Elem c = g.pow(static_cast<std::uint64_t>(k));
    if (norm(c, base) != a) throw InternalError("norm equation verification failed");
    return c;
}

Poly irreducible_ideal_poly(const FieldRef& Fq, unsigned e, std::uint64_t seed) {
    if (e == 0) throw InvalidArgument("ideal degree must be >= 1");
    if (e == 1 && Fq->size() == 2)
        throw UnsupportedConfig("no degree-1 ideal of F_2[y] avoids both y = 0 and y = -1");
    const Code minus_one = Fq->neg(1);
    std::mt19937_64 rng(seed);
    for (;;) {
        Poly g(e + 1);
        for (unsigned i = 0; i < e; ++i) g[i] = static_cast<Code>(draw(rng, Fq->size()));
        g[e] = 1;
        if (g[0] == 0 || poly::eval(*Fq, g, minus_one) == 0) continue;
        if (is_irreducible(*Fq, g)) return g;
    }
}

// ---------------------------------------------------------------------------
// Embedding

Embedding::Embedding(FieldRef source, FieldRef target) : src_(std::move(source)), tgt_(std::move(target)) {
    if (!src_ || !tgt_) throw InvalidArgument("embedding of null field");
    if (src_->characteristic() != tgt_->characteristic() || tgt_->absolute_degree() % src_->absolute_degree() != 0)
        throw InvalidArgument("no embedding " + src_->describe() + " -> " + tgt_->describe());
    if (tgt_->has_subfield(*src_)) {
        gen_image_ = tgt_->elem(src_->adjoined());
        powers_.clear();
        return;
    }
    if (src_->is_prime()) throw InternalError("prime field outside target tower");
    if (!tgt_->has_subfield(*src_->base())) base_embed_ = std::make_shared<Embedding>(src_->base(), tgt_);
    auto map_base = [&](Code c) { return base_embed_ ? base_embed_->map(c) : c; };
    Poly m;
    for (Code c : src_->modulus()) m.push_back(map_base(c));
    // roots of m lie in the unique subfield of order |src|: powers of gen^{(|T|-1)/(|S|-1)}
    const std::uint64_t step = (tgt_->size() - 1) / (src_->size() - 1);
    bool found = false;
    for (std::uint64_t k = 1; k < src_->size(); ++k) {
        const Code cand = tgt_->exp(k * step);
        if (poly::eval(*tgt_, m, cand) == 0) {
            gen_image_ = tgt_->elem(cand);
            found = true;
            break;
        }
    }
    if (!found) {
        for (Code c = 0; c < tgt_->size() && !found; ++c)
            if (poly::eval(*tgt_, m, c) == 0) {
                gen_image_ = tgt_->elem(c);
                found = true;
            }
    }
    if (!found) throw InternalError("no root of source modulus in target");
    const unsigned n = src_->degree();
    Code x = 1;
    for (unsigned i = 0; i < n; ++i) {
        powers_.push_back(x);
        x = tgt_->mul(x, gen_image_.code());
    }
}

Code Embedding::map(Code x) const {
    if (powers_.empty()) return x;  // tower inclusion keeps codes
    const auto c = src_->coords(x, *src_->base());
    Code r = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i]) continue;
        const Code ci = base_embed_ ? base_embed_->map(c[i]) : c[i];
        r = tgt_->add(r, tgt_->mul(ci, powers_[i]));
    }
    return r;
}

Elem Embedding::operator()(const Elem& x) const {
    if (x.field().get() != src_.get()) throw InvalidArgument("embedding applied to foreign element");
    return tgt_->elem(map(x.code()));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const Field& F) {
    std::vector<const Field*> chain;
    for (const Field* f = &F; f; f = f->base().get()) chain.push_back(f);
    std::reverse(chain.begin(), chain.end());
    nlohmann::json tower = nlohmann::json::array();
    for (std::size_t i = 1; i < chain.size(); ++i) tower.push_back(chain[i]->modulus());
    return {{"characteristic", F.characteristic()}, {"tower", tower}};
}

FieldRef field_from_json(const nlohmann::json& j) {
    FieldRef f = Field::prime(j.at("characteristic").get<std::uint32_t>());
    for (const auto& m : j.at("tower")) f = Field::extension(f, m.get<Poly>());
    return f;
}

}  // namespace lieexp::ff
