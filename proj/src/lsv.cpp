#include "lieexp/lsv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace lieexp::lsv {

namespace {

// Independent sub-seeds for the separate searches of one build.
std::uint64_t subseed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Fills the derived members and checks every algebra invariant.
void assemble(AlgebraSpec& s) {
    const ff::Field& K = *s.K;
    if (s.y.is_zero()) throw InternalError("y maps to zero in R/I");
    const Elem one_plus_y = K.one_elem() + s.y;
    if (one_plus_y.is_zero()) throw InternalError("1 + y maps to zero in R/I");

    s.embed_L0 = std::make_shared<ff::Embedding>(s.L0, s.L);
    s.t = 1;
    while ((static_cast<std::uint64_t>(s.e) * s.t) % s.d != 1 % s.d) ++s.t;

    const Elem xi_img = (*s.embed_L0)(s.xi0);
    if (s.tau(xi_img) != (*s.embed_L0)(ff::frobenius(s.xi0, *s.Fq)))
        throw InternalError("tau does not restrict to the q-Frobenius on F_{q^d}");

    s.basis.clear();
    Elem x = xi_img;
    for (unsigned i = 0; i < s.d; ++i) {
        s.basis.push_back(x);
        x = s.tau(x);
    }
    if (ff::rank_over(s.basis, K) != s.d) throw InternalError("tau-orbit of xi0 is not a K-basis of L");

    Mat P(s.K, s.d);
    for (unsigned j = 0; j < s.d; ++j) {
        const auto col = s.L->coords(s.basis[j].code(), K);
        for (unsigned i = 0; i < s.d; ++i) P.set(i, j, col[i]);
    }
    s.coord_inv = P.inverse();

    if (ff::norm(s.c, s.K) != one_plus_y) throw InternalError("N(c) != 1 + y");
}

}  // namespace

Elem AlgebraSpec::tau(const Elem& x) const {
    Elem r = x;
    for (unsigned i = 0; i < t; ++i) r = r.pow(K->size());
    return r;
}

Mat AlgebraSpec::matrix_of(const std::vector<Elem>& images) const {
    Mat M(K, d);
    const ff::Field& F = *K;
    for (unsigned j = 0; j < d; ++j) {
        const auto v = L->coords(images[j].code(), F);
        for (unsigned i = 0; i < d; ++i) {
            ff::Code s = 0;
            for (unsigned k = 0; k < d; ++k) s = F.add(s, F.mul(coord_inv.code(i, k), v[k]));
            M.set(i, j, s);
        }
    }
    return M;
}

AlgebraSpec build_spec(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed) {
    if (d < 2) throw UnsupportedConfig("d must be >= 2");
    if (e < 1) throw UnsupportedConfig("e must be >= 1");
    if (std::gcd(d, e) != 1)
        throw UnsupportedConfig("gcd(d, e) = " + std::to_string(std::gcd(d, e)) +
                                " != 1: the split-tensor case is not supported");
    std::pair<std::uint32_t, unsigned> pk;
    try {
        pk = ff::prime_power(q);
    } catch (const InvalidArgument& ex) {
        throw UnsupportedConfig(ex.what());
    }
    AlgebraSpec s;
    s.q = q;
    s.d = d;
    s.e = e;
    s.seed = seed;
    s.Fq = ff::make_extension(ff::Field::prime(pk.first), pk.second, subseed(seed, 0));
    s.ideal = ff::irreducible_ideal_poly(s.Fq, e, subseed(seed, 1));
    if (e == 1) {
        s.K = s.Fq;
        s.y = s.K->elem(s.K->neg(s.ideal[0]));
    } else {
        s.K = ff::Field::extension(s.Fq, s.ideal);
        s.y = s.K->elem(s.K->adjoined());
    }
    s.L0 = ff::make_extension(s.Fq, d, subseed(seed, 2));
    s.xi0 = ff::find_normal_basis_generator(s.L0, s.Fq, subseed(seed, 3));
    s.L = ff::make_extension(s.K, d, subseed(seed, 4));
    const Elem one_plus_y = s.K->one_elem() + s.y;
    s.c = ff::solve_norm_equation(s.L, s.K, one_plus_y, subseed(seed, 5));
    assemble(s);
    return s;
}

Mat rep_torus(const AlgebraSpec& spec, const Elem& u) {
    if (u.field().get() != spec.L0.get()) throw InvalidArgument("rep_torus: u must lie in F_{q^d}");
    if (u.is_zero()) throw InvalidArgument("rep_torus: u must be nonzero");
    const Elem ui = (*spec.embed_L0)(u);
    std::vector<Elem> images;
    for (const auto& b : spec.basis) images.push_back(ui * b);
    return spec.matrix_of(images);
}

Mat rep_z(const AlgebraSpec& spec) {
    std::vector<Elem> images;
    for (const auto& b : spec.basis) images.push_back(spec.c * spec.tau(b));
    return spec.matrix_of(images);
}

ProjMatrix gen_b(const AlgebraSpec& spec) {
    const Mat Z = rep_z(spec);
    const ff::Code inv1y = spec.K->inv(spec.K->add(1, spec.y.code()));
    const Mat b = Mat::identity(spec.K, spec.d) + Z.pow(spec.d - 1).scaled(inv1y);
    if (!b.is_invertible()) throw InternalError("ideal choice degenerate; re-seed");
    return ProjMatrix(b);
}

GenSetS gens_S(const AlgebraSpec& spec) {
    GenSetS out;
    const ff::Field& Fq = *spec.Fq;
    const std::uint64_t m = (ff::ipow(spec.q, spec.d) - 1) / (spec.q - 1);
    const Elem g = spec.L0->elem(spec.L0->generator());
    const ProjMatrix b = gen_b(spec);

    std::map<std::vector<ff::Code>, std::size_t> seen;
    for (std::uint64_t i = 0; i < m; ++i) {
        const Elem u = g.pow(i);
        const Mat Tu = rep_torus(spec, u);
        for (ff::Code c : Tu.codes())
            if (c >= Fq.size()) throw InternalError("torus matrix entry outside F_q");
        const ProjMatrix tp(Tu);
        const ProjMatrix bu = tp * b * tp.inverse();
        if (!seen.emplace(bu.mat().codes(), i).second)
            throw InternalError("duplicate projective class in S: contradicts |S| = (q^d-1)/(q-1)");
        out.coset_reps.push_back(u);
        out.T.push_back(tp);
        out.S.push_back(bu);
    }
    if (spec.d == 2) {
        for (const auto& s : out.S)
            if (!seen.count(s.inverse().mat().codes())) throw InternalError("S is not symmetric for d = 2");
    }
    for (const auto& t : out.T)
        if (matgrp::det_class(t.mat()) == 0) out.T1.push_back(t);
    out.orbits = matgrp::conjugate_orbits(out.S, out.T1);
    out.C = out.S.front();
    if (out.orbits.size() > 1) out.C_prime = out.S[out.orbits[1].front()];
    return out;
}

std::vector<double> trivial_eigs(unsigned d) {
    if (d < 2) throw InvalidArgument("trivial_eigs needs d >= 2");
    std::vector<double> v;
    for (unsigned k = 0; k < d; ++k) {
        const double x = std::cos(2.0 * std::numbers::pi * k / d);
        if (std::none_of(v.begin(), v.end(), [&](double y) { return std::abs(x - y) < 1e-12; })) v.push_back(x);
    }
    for (auto& x : v)
        if (std::abs(x) < 1e-15) x = 0.0;
    std::sort(v.rbegin(), v.rend());
    return v;
}

ProjMatrix unipotent_A(const FieldRef& F) { return ProjMatrix(Mat(F, 2, {1, 1, 0, 1})); }

ProjMatrix weyl_B(const FieldRef& F) { return ProjMatrix(Mat(F, 2, {0, 1, F->neg(1), 0})); }

AbccGens abcc_gens(std::uint32_t p, unsigned e, std::uint64_t seed) {
    if (!ff::is_prime(p)) throw UnsupportedConfig("abcc_gens needs a prime p");
    if (e % 2 == 0) throw UnsupportedConfig("abcc_gens needs odd e");
    if (ff::ipow(p, e) < 4) throw UnsupportedConfig("abcc_gens needs p^e >= 4");
    AbccGens out{build_spec(p, 2, e, seed), {}, {}};
    out.genset = gens_S(out.spec);
    out.gens = {unipotent_A(out.spec.K), weyl_B(out.spec.K), out.genset.C};
    if (out.genset.C_prime) out.gens.push_back(*out.genset.C_prime);
    return out;
}

nlohmann::json spec_to_json(const AlgebraSpec& s, const GenSetS* genset) {
    nlohmann::json j = {
        {"q", s.q},
        {"d", s.d},
        {"e", s.e},
        {"seed", s.seed},
        {"Fq", ff::to_json(*s.Fq)},
        {"ideal", s.ideal},
        {"K", ff::to_json(*s.K)},
        {"y", s.y.code()},
        {"L0_modulus", s.L0->modulus()},
        {"xi0", s.xi0.code()},
        {"L_modulus", s.L->modulus()},
        {"tau_exponent", s.t},
        {"c", s.c.code()},
    };
    if (genset) {
        nlohmann::json S = nlohmann::json::array();
        for (const auto& m : genset->S) S.push_back(matgrp::mat_to_json(m.mat()));
        j["S"] = S;
        j["C"] = matgrp::mat_to_json(genset->C.mat());
        j["C_prime"] = genset->C_prime ? matgrp::mat_to_json(genset->C_prime->mat()) : nlohmann::json(nullptr);
        j["T1_size"] = genset->T1.size();
        j["orbit_count"] = genset->orbits.size();
    }
    return j;
}

AlgebraSpec spec_from_json(const nlohmann::json& j) {
    AlgebraSpec s;
    s.q = j.at("q").get<std::uint64_t>();
    s.d = j.at("d").get<unsigned>();
    s.e = j.at("e").get<unsigned>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.Fq = ff::field_from_json(j.at("Fq"));
    s.ideal = j.at("ideal").get<ff::Poly>();
    s.K = s.e == 1 ? s.Fq : ff::Field::extension(s.Fq, s.ideal);
    s.y = s.K->elem(j.at("y").get<ff::Code>());
    s.L0 = ff::Field::extension(s.Fq, j.at("L0_modulus").get<ff::Poly>());
    s.xi0 = s.L0->elem(j.at("xi0").get<ff::Code>());
    s.L = ff::Field::extension(s.K, j.at("L_modulus").get<ff::Poly>());
    s.c = s.L->elem(j.at("c").get<ff::Code>());
    assemble(s);
    return s;
}

}  // namespace lieexp::lsv
