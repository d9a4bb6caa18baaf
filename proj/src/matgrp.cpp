#include "lieexp/matgrp.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lieexp::matgrp {

// ---------------------------------------------------------------------------
// Mat

Mat::Mat(FieldRef field, unsigned dim) : f_(std::move(field)), d_(dim), a_(std::size_t{dim} * dim, 0) {
    if (!f_) throw InvalidArgument("matrix without field");
}

Mat::Mat(FieldRef field, unsigned dim, std::vector<Code> codes) : f_(std::move(field)), d_(dim), a_(std::move(codes)) {
    if (!f_) throw InvalidArgument("matrix without field");
    if (a_.size() != std::size_t{dim} * dim) throw InvalidArgument("matrix entry count does not match dimension");
    for (Code c : a_)
        if (c >= f_->size()) throw InvalidArgument("matrix entry outside field");
}

Mat Mat::identity(const FieldRef& field, unsigned dim) { return scalar(field, dim, 1); }

Mat Mat::scalar(const FieldRef& field, unsigned dim, Code c) {
    Mat m(field, dim);
    for (unsigned i = 0; i < dim; ++i) m.set(i, i, c);
    return m;
}

Mat Mat::from_elems(unsigned dim, const std::vector<Elem>& entries) {
    if (entries.empty()) throw InvalidArgument("empty matrix");
    std::vector<Code> c;
    for (const auto& e : entries) {
        if (e.field().get() != entries.front().field().get()) throw InvalidArgument("matrix entries from different fields");
        c.push_back(e.code());
    }
    return Mat(entries.front().field(), dim, std::move(c));
}

void Mat::check(const Mat& o) const {
    if (f_.get() != o.f_.get() || d_ != o.d_) throw InvalidArgument("matrix field or dimension mismatch");
}

void mul_codes(const ff::Field& F, unsigned d, const Code* a, const Code* b, Code* out) {
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            Code s = 0;
            for (unsigned k = 0; k < d; ++k) s = F.add(s, F.mul(a[i * d + k], b[k * d + j]));
            out[i * d + j] = s;
        }
}

Mat Mat::operator*(const Mat& o) const {
    check(o);
    Mat r(f_, d_);
    mul_codes(*f_, d_, a_.data(), o.a_.data(), r.a_.data());
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    check(o);
    Mat r(f_, d_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->add(a_[i], o.a_[i]);
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    check(o);
    Mat r(f_, d_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->sub(a_[i], o.a_[i]);
    return r;
}

Mat Mat::scaled(Code c) const {
    Mat r(f_, d_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->mul(a_[i], c);
    return r;
}

Mat Mat::pow(std::uint64_t n) const {
    Mat r = identity(f_, d_), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

Elem Mat::det() const {
    const ff::Field& F = *f_;
    std::vector<Code> m = a_;
    Code det = 1;
    for (unsigned c = 0; c < d_; ++c) {
        unsigned piv = c;
        while (piv < d_ && m[piv * d_ + c] == 0) ++piv;
        if (piv == d_) return f_->zero_elem();
        if (piv != c) {
            for (unsigned j = 0; j < d_; ++j) std::swap(m[piv * d_ + j], m[c * d_ + j]);
            det = F.neg(det);
        }
        const Code p = m[c * d_ + c];
        det = F.mul(det, p);
        const Code pi = F.inv(p);
        for (unsigned r = c + 1; r < d_; ++r) {
            const Code f = F.mul(m[r * d_ + c], pi);
            if (!f) continue;
            for (unsigned j = c; j < d_; ++j) m[r * d_ + j] = F.sub(m[r * d_ + j], F.mul(f, m[c * d_ + j]));
        }
    }
    return f_->elem(det);
}

Mat Mat::inverse() const {
    const ff::Field& F = *f_;
    std::vector<Code> m = a_;
    Mat inv = identity(f_, d_);
    auto& v = inv.a_;
    for (unsigned c = 0; c < d_; ++c) {
        unsigned piv = c;
        while (piv < d_ && m[piv * d_ + c] == 0) ++piv;
        if (piv == d_) throw InvalidArgument("singular matrix has no inverse");
        for (unsigned j = 0; j < d_; ++j) {
            std::swap(m[piv * d_ + j], m[c * d_ + j]);
            std::swap(v[piv * d_ + j], v[c * d_ + j]);
        }
        const Code pi = F.inv(m[c * d_ + c]);
        for (unsigned j = 0; j < d_; ++j) {
            m[c * d_ + j] = F.mul(m[c * d_ + j], pi);
            v[c * d_ + j] = F.mul(v[c * d_ + j], pi);
        }
        for (unsigned r = 0; r < d_; ++r) {
            if (r == c) continue;
            const Code f = m[r * d_ + c];
            if (!f) continue;
            for (unsigned j = 0; j < d_; ++j) {
                m[r * d_ + j] = F.sub(m[r * d_ + j], F.mul(f, m[c * d_ + j]));
                v[r * d_ + j] = F.sub(v[r * d_ + j], F.mul(f, v[c * d_ + j]));
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// projective classes

void canonicalize_codes(const ff::Field& F, std::span<Code> entries) {
    auto it = std::find_if(entries.begin(), entries.end(), [](Code c) { return c != 0; });
    if (it == entries.end() || *it == 1) return;
    const Code s = F.inv(*it);
    for (; it != entries.end(); ++it) *it = F.mul(*it, s);
}

ProjMatrix::ProjMatrix(const Mat& m) : m_(m) {
    if (!m.is_invertible()) throw InvalidArgument("singular matrix has no projective class");
    std::vector<Code> c = m.codes();
    canonicalize_codes(*m.field(), c);
    m_ = Mat(m.field(), m.dim(), std::move(c));
}

ProjMatrix proj_canonical(const Mat& m) { return ProjMatrix(m); }

// ---------------------------------------------------------------------------
// GroupEnum

GroupEnum::GroupEnum(FieldRef field, unsigned dim, bool projective)
    : f_(std::move(field)), d_(dim), projective_(projective) {}

Mat GroupEnum::element(std::size_t i) const {
    auto c = codes(i);
    return Mat(f_, d_, std::vector<Code>(c.begin(), c.end()));
}

ProjMatrix GroupEnum::proj_element(std::size_t i) const { return ProjMatrix(element(i)); }

Mat GroupEnum::normalize(const Mat& m) const {
    if (m.field().get() != f_.get() || m.dim() != d_) throw InvalidArgument("element from a different matrix space");
    if (!projective_) return m;
    std::vector<Code> c = m.codes();
    canonicalize_codes(*f_, c);
    return Mat(f_, d_, std::move(c));
}

std::uint64_t GroupEnum::hash(std::span<const Code> c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (Code x : c) {
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
    }
    h ^= h >> 33;
    return h;
}

void GroupEnum::rehash(std::size_t buckets) {
    table_.assign(buckets, 0);
    const std::size_t mask = buckets - 1;
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t b = hash(codes(i)) & mask;
        while (table_[b]) b = (b + 1) & mask;
        table_[b] = static_cast<std::uint32_t>(i + 1);
    }
}

std::optional<std::uint32_t> GroupEnum::index_of_codes(std::span<const Code> c) const {
    if (table_.empty()) return std::nullopt;
    const std::size_t mask = table_.size() - 1;
    const std::size_t dd = std::size_t{d_} * d_;
    for (std::size_t b = hash(c) & mask; table_[b]; b = (b + 1) & mask) {
        const std::uint32_t idx = table_[b] - 1;
        if (std::equal(c.begin(), c.end(), data_.begin() + idx * dd)) return idx;
    }
    return std::nullopt;
}

std::uint32_t GroupEnum::insert(std::span<const Code> c, bool& inserted) {
    if (auto found = index_of_codes(c)) {
        inserted = false;
        return *found;
    }
    if (2 * (n_ + 1) > table_.size()) rehash(std::max<std::size_t>(16, table_.size() * 2));
    data_.insert(data_.end(), c.begin(), c.end());
    const std::size_t mask = table_.size() - 1;
    std::size_t b = hash(c) & mask;
    while (table_[b]) b = (b + 1) & mask;
    table_[b] = static_cast<std::uint32_t>(n_ + 1);
    inserted = true;
    return static_cast<std::uint32_t>(n_++);
}

std::optional<std::uint32_t> GroupEnum::index_of(const Mat& m) const {
    Mat nm = normalize(m);
    return index_of_codes(nm.codes());
}

std::optional<std::uint32_t> GroupEnum::right_mul(std::size_t i, const Mat& m) const {
    std::vector<Code> out(std::size_t{d_} * d_);
    mul_codes(*f_, d_, codes(i).data(), m.codes().data(), out.data());
    if (projective_) canonicalize_codes(*f_, out);
    return index_of_codes(out);
}

nlohmann::json GroupEnum::to_json() const {
    nlohmann::json elems = nlohmann::json::array();
    for (std::size_t i = 0; i < n_; ++i) {
        auto c = codes(i);
        elems.push_back(std::vector<Code>(c.begin(), c.end()));
    }
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : gens_) gens.push_back(mat_to_json(g));
    return {{"field", ff::to_json(*f_)}, {"dim", d_},           {"projective", projective_},
            {"complete", complete_},     {"order", n_},         {"generators", gens},
            {"elements", elems}};
}

GroupEnum generate_group(const std::vector<Mat>& gens, std::size_t cap, bool projective) {
    if (gens.empty()) throw InvalidArgument("generate_group needs at least one generator");
    const FieldRef F = gens.front().field();
    const unsigned d = gens.front().dim();
    GroupEnum G(F, d, projective);
    std::vector<Mat> steps;
    for (const auto& g : gens) {
        if (g.field().get() != F.get() || g.dim() != d) throw InvalidArgument("generators from different spaces");
        if (!g.is_invertible()) throw InvalidArgument("singular generator");
        G.gens_.push_back(G.normalize(g));
    }
    steps = G.gens_;
    for (const auto& g : gens) steps.push_back(G.normalize(g.inverse()));

    const std::size_t dd = std::size_t{d} * d;
    bool inserted = false;
    G.insert(Mat::identity(F, d).codes(), inserted);
    std::vector<Code> cur(dd), out(dd);
    for (std::size_t i = 0; i < G.n_; ++i) {
        std::copy_n(G.data_.begin() + i * dd, dd, cur.begin());
        for (const auto& s : steps) {
            mul_codes(*F, d, cur.data(), s.codes().data(), out.data());
            if (projective) canonicalize_codes(*F, out);
            if (G.index_of_codes(out)) continue;
            if (G.n_ >= cap) {
                G.complete_ = false;
                return G;
            }
            G.insert(out, inserted);
        }
    }
    G.complete_ = true;
    return G;
}

GroupEnum generate_group(const std::vector<ProjMatrix>& gens, std::size_t cap) {
    std::vector<Mat> m;
    for (const auto& g : gens) m.push_back(g.mat());
    return generate_group(m, cap, true);
}

// ---------------------------------------------------------------------------
// classification

std::uint64_t order_pgl(unsigned d, std::uint64_t ell) {
    std::uint64_t r = ff::ipow(ell, d * (d - 1) / 2);
    for (unsigned i = 2; i <= d; ++i) r *= ff::ipow(ell, i) - 1;
    return r;
}

std::uint64_t order_psl(unsigned d, std::uint64_t ell) { return order_pgl(d, ell) / std::gcd<std::uint64_t>(d, ell - 1); }

std::uint64_t order_sl(unsigned d, std::uint64_t ell) { return order_pgl(d, ell); }

std::string Classification::name() const {
    switch (tag) {
        case GroupClass::Psl: return "PSL";
        case GroupClass::Pgl: return "PGL";
        default: return "OTHER(" + std::to_string(order) + ")";
    }
}

Classification classify_quotient(const GroupEnum& G, std::uint64_t ell) {
    if (!G.complete()) throw InvalidArgument("classify_quotient needs a complete enumeration");
    if (G.field()->size() != ell) throw InvalidArgument("field order does not match ell");
    Classification c;
    c.order = G.size();
    if (c.order == order_psl(G.dim(), ell))
        c.tag = GroupClass::Psl;
    else if (c.order == order_pgl(G.dim(), ell))
        c.tag = GroupClass::Pgl;
    return c;
}

std::uint32_t det_class_modulus(unsigned d, const ff::Field& F) {
    return static_cast<std::uint32_t>(std::gcd<std::uint64_t>(d, F.size() - 1));
}

std::uint32_t det_class(const Mat& m) {
    const auto mod = det_class_modulus(m.dim(), *m.field());
    const Elem det = m.det();
    if (det.is_zero()) throw InvalidArgument("det_class of singular matrix");
    return m.field()->log(det.code()) % mod;
}

bool det_square_class(const ProjMatrix& m) {
    if (m.dim() != 2) throw InvalidArgument("det_square_class needs dimension 2");
    const auto& F = *m.field();
    if (F.characteristic() == 2) return true;
    return F.log(m.mat().det().code()) % 2 == 0;
}

Coverage product_coverage(const GroupEnum& G, const std::vector<std::vector<std::uint32_t>>& factors) {
    Coverage cov;
    if (factors.empty()) return cov;
    const std::size_t n = G.size();
    std::vector<std::uint8_t> cur(n, 0);
    for (auto i : factors.front()) cur.at(i) = 1;
    const std::size_t dd = std::size_t{G.dim()} * G.dim();
    std::vector<Code> out(dd);
    for (std::size_t f = 1; f < factors.size(); ++f) {
        std::vector<std::uint8_t> next(n, 0);
        for (std::size_t x = 0; x < n; ++x) {
            if (!cur[x]) continue;
            for (auto s : factors[f]) {
                mul_codes(*G.field(), G.dim(), G.codes(x).data(), G.codes(s).data(), out.data());
                if (G.projective()) canonicalize_codes(*G.field(), out);
                auto idx = G.index_of_codes(out);
                if (!idx) throw InvalidArgument("product left the enumerated group");
                next[*idx] = 1;
            }
        }
        cur.swap(next);
    }
    cov.reached = static_cast<std::size_t>(std::count(cur.begin(), cur.end(), 1));
    cov.covered = cov.reached == n;
    return cov;
}

std::vector<std::vector<std::size_t>> conjugate_orbits(const std::vector<ProjMatrix>& S,
                                                       const std::vector<ProjMatrix>& H) {
    std::map<std::vector<Code>, std::size_t> pos;
    for (std::size_t i = 0; i < S.size(); ++i) pos.emplace(S[i].mat().codes(), i);
    std::vector<ProjMatrix> Hinv;
    for (const auto& h : H) Hinv.push_back(h.inverse());
    std::vector<int> seen(S.size(), 0);
    std::vector<std::vector<std::size_t>> orbits;
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> orbit;
        for (std::size_t k = 0; k < H.size(); ++k) {
            ProjMatrix c = H[k] * S[i] * Hinv[k];
            auto it = pos.find(c.mat().codes());
            if (it == pos.end()) throw InvalidArgument("conjugate_orbits: S is not stable under H");
            if (!seen[it->second]) {
                seen[it->second] = 1;
                orbit.push_back(it->second);
            }
        }
        if (orbit.empty()) {  // H empty
            seen[i] = 1;
            orbit.push_back(i);
        }
        std::sort(orbit.begin(), orbit.end());
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

std::uint64_t element_order(const ProjMatrix& m, std::uint64_t limit) {
    ProjMatrix x = m;
    for (std::uint64_t k = 1; k <= limit; ++k) {
        if (x.is_identity()) return k;
        x = x * m;
    }
    return 0;
}

nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned i = 0; i < m.dim(); ++i) {
        std::vector<Code> row;
        for (unsigned j = 0; j < m.dim(); ++j) row.push_back(m.code(i, j));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const FieldRef& field, const nlohmann::json& j) {
    const auto d = static_cast<unsigned>(j.size());
    std::vector<Code> c;
    for (const auto& row : j) {
        if (row.size() != d) throw InvalidArgument("matrix rows must be square");
        for (const auto& x : row) c.push_back(x.get<Code>());
    }
    return Mat(field, d, std::move(c));
}

}  // namespace lieexp::matgrp
