#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lieexp/ff.hpp"

using namespace lieexp;
using namespace lieexp::ff;

namespace {

// Independent oracle: g is irreducible iff no monic polynomial of degree
// 1..deg(g)/2 divides it (trial division over all candidates).
bool irreducible_by_trial_division(const Field& F, const Poly& g) {
    const int n = poly::deg(g);
    const std::uint64_t Q = F.size();
    for (int k = 1; 2 * k <= n; ++k) {
        const std::uint64_t count = ipow(Q, static_cast<unsigned>(k));
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Poly h(k + 1);
            std::uint64_t r = idx;
            for (int i = 0; i < k; ++i) {
                h[i] = static_cast<Code>(r % Q);
                r /= Q;
            }
            h[k] = 1;
            if (poly::mod(F, g, h).empty()) return false;
        }
    }
    return n >= 1;
}

std::vector<FieldRef> sample_fields() {
    auto F2 = Field::prime(2), F3 = Field::prime(3), F5 = Field::prime(5), F7 = Field::prime(7);
    auto F4 = make_extension(F2, 2, 1);
    auto F9 = make_extension(F3, 2, 2);
    return {F7, make_extension(F2, 3, 3), F9, make_extension(F4, 3, 4), make_extension(F5, 3, 5),
            make_extension(F9, 3, 6)};
}

}  // namespace

TEST(MakeExtension, QuadraticOverF2IsUnique) {
    auto F4 = make_extension(Field::prime(2), 2, 17);
    EXPECT_EQ(F4->size(), 4u);
    EXPECT_EQ(F4->modulus(), (Poly{1, 1, 1}));
}

TEST(MakeExtension, DegreeOneIsIdentityStep) {
    auto F3 = Field::prime(3);
    EXPECT_EQ(make_extension(F3, 1, 9).get(), F3.get());
}

TEST(MakeExtension, CubicOverF2MatchesEnumeration) {
    auto F2 = Field::prime(2);
    // brute force: a monic cubic over F2 is irreducible iff it has no root
    std::set<Poly> irreducible;
    for (Code a = 0; a < 2; ++a)
        for (Code b = 0; b < 2; ++b)
            for (Code c = 0; c < 2; ++c) {
                Poly g{a, b, c, 1};
                bool root = false;
                for (Code x = 0; x < 2; ++x) root |= ((a + b * x + c * x * x + x * x * x) % 2) == 0;
                if (!root) irreducible.insert(g);
            }
    EXPECT_EQ(irreducible, (std::set<Poly>{{1, 1, 0, 1}, {1, 0, 1, 1}}));
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto F8 = make_extension(F2, 3, seed);
        EXPECT_EQ(F8->size(), 8u);
        EXPECT_TRUE(irreducible.count(F8->modulus()));
    }
}

TEST(MakeExtension, DeterministicPerSeed) {
    auto F3 = Field::prime(3);
    EXPECT_EQ(make_extension(F3, 4, 42)->modulus(), make_extension(F3, 4, 42)->modulus());
}

TEST(Irreducibility, RabinAgreesWithTrialDivision) {
    for (std::uint32_t p : {2u, 3u}) {
        auto F = Field::prime(p);
        for (unsigned n = 1; n <= (p == 2 ? 6u : 4u); ++n) {
            const std::uint64_t count = ipow(p, n);
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                Poly g(n + 1);
                std::uint64_t r = idx;
                for (unsigned i = 0; i < n; ++i) {
                    g[i] = static_cast<Code>(r % p);
                    r /= p;
                }
                g[n] = 1;
                EXPECT_EQ(is_irreducible(*F, g), irreducible_by_trial_division(*F, g)) << "p=" << p << " n=" << n;
            }
        }
    }
    auto F4 = make_extension(Field::prime(2), 2, 0);
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
        Poly g{static_cast<Code>(idx % 4), static_cast<Code>(idx / 4 % 4), static_cast<Code>(idx / 16), 1};
        EXPECT_EQ(is_irreducible(*F4, g), irreducible_by_trial_division(*F4, g));
    }
}

TEST(Frobenius, FixesBaseElements) {
    auto F2 = Field::prime(2);
    auto F8 = make_extension(F2, 3, 0);
    EXPECT_EQ(frobenius(F8->elem(1), *F2), F8->elem(1));
    EXPECT_EQ(frobenius(F8->elem(0), *F2), F8->elem(0));
}

TEST(Frobenius, SquaresGeneratorOfF4) {
    auto F2 = Field::prime(2);
    auto F4 = Field::extension(F2, {1, 1, 1});
    const Elem t = F4->elem(F4->adjoined());
    EXPECT_EQ(frobenius(t, *F2), t + F4->one_elem());
}

TEST(Frobenius, OrderEqualsExtensionDegree) {
    auto F3 = Field::prime(3);
    auto F9 = make_extension(F3, 2, 1);
    auto F = make_extension(F9, 3, 2);
    for (Code c = 0; c < F->size(); c += 7) {
        Elem x = F->elem(c), y = x;
        for (int i = 0; i < 3; ++i) y = frobenius(y, *F9);
        EXPECT_EQ(y, x);
    }
}

TEST(Frobenius, ForeignBaseThrows) {
    auto F8 = make_extension(Field::prime(2), 3, 0);
    auto F3 = Field::prime(3);
    EXPECT_THROW(frobenius(F8->elem(3), *F3), InvalidArgument);
}

TEST(NormTrace, SmallValues) {
    auto F2 = Field::prime(2);
    auto F4 = Field::extension(F2, {1, 1, 1});
    const Elem t = F4->elem(F4->adjoined());
    EXPECT_EQ(norm(t, F2), F2->one_elem());
    EXPECT_EQ(trace(t, F2), F2->one_elem());
    EXPECT_EQ(norm(t, F4), t);
    EXPECT_EQ(trace(t, F4), t);
}

TEST(NormTrace, IncompatibleFieldsThrow) {
    auto F4 = make_extension(Field::prime(2), 2, 0);
    EXPECT_THROW(norm(F4->elem(2), Field::prime(3)), InvalidArgument);
}

TEST(NormalBasis, DegreeOneAndF4) {
    auto F2 = Field::prime(2);
    EXPECT_TRUE(find_normal_basis_generator(F2, F2, 0).is_one());
    auto F4 = Field::extension(F2, {1, 1, 1});
    const Elem t = F4->elem(2);
    EXPECT_EQ(rank_over({t, frobenius(t, *F2)}, *F2), 2u);
}

TEST(NormalBasis, F8OrbitIsIndependent) {
    auto F2 = Field::prime(2);
    auto F8 = make_extension(F2, 3, 5);
    const Elem xi = find_normal_basis_generator(F8, F2, 11);
    const Elem x1 = frobenius(xi, *F2), x2 = frobenius(x1, *F2);
    // oracle: no nonzero F2-combination of the orbit vanishes
    for (int mask = 1; mask < 8; ++mask) {
        Elem s = F8->zero_elem();
        if (mask & 1) s = s + xi;
        if (mask & 2) s = s + x1;
        if (mask & 4) s = s + x2;
        EXPECT_FALSE(s.is_zero()) << mask;
    }
}

TEST(NormEquation, TrivialRightHandSide) {
    auto F3 = Field::prime(3);
    auto F9 = make_extension(F3, 2, 0);
    EXPECT_EQ(norm(solve_norm_equation(F9, F3, F3->one_elem(), 0), F3), F3->one_elem());
}

TEST(NormEquation, F9OverF3AgainstExhaustiveScan) {
    auto F3 = Field::prime(3);
    auto F9 = make_extension(F3, 2, 0);
    const Elem two = F3->elem(2);
    int preimages = 0;
    for (Code c = 1; c < 9; ++c) preimages += F9->pow(c, 4) == 2;
    EXPECT_EQ(preimages, 4);  // norm is 4-to-1 onto F3*
    const Elem c = solve_norm_equation(F9, F3, two, 0);
    EXPECT_EQ(c.pow(4).code(), 2u);
    EXPECT_EQ(norm(c, F3), two);
}

TEST(NormEquation, RandomInstances) {
    std::mt19937_64 rng(7);
    auto F5 = Field::prime(5);
    auto F25 = make_extension(F5, 2, 1);
    auto top = make_extension(F25, 3, 2);
    for (int i = 0; i < 20; ++i) {
        const Elem a = F25->elem(static_cast<Code>(1 + rng() % 24));
        EXPECT_EQ(norm(solve_norm_equation(top, F25, a, i), F25), a);
    }
    EXPECT_THROW(solve_norm_equation(top, F25, F25->zero_elem(), 0), InvalidArgument);
}

TEST(IdealPoly, Examples) {
    auto F2 = Field::prime(2), F3 = Field::prime(3);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Poly g = irreducible_ideal_poly(F2, 3, seed);
        EXPECT_EQ(poly::deg(g), 3);
        EXPECT_NE(poly::eval(*F2, g, 0), 0u);
        EXPECT_NE(poly::eval(*F2, g, 1), 0u);
        EXPECT_TRUE(is_irreducible(*F2, g));
    }
    EXPECT_EQ(irreducible_ideal_poly(F3, 1, 0), (Poly{2, 1}));
    EXPECT_THROW(irreducible_ideal_poly(F2, 1, 0), UnsupportedConfig);
}

TEST(FieldProperties, AxiomsOnRandomTriples) {
    std::mt19937_64 rng(2024);
    for (const auto& F : sample_fields()) {
        for (int i = 0; i < 1000; ++i) {
            const Elem a = F->elem(rng() % F->size()), b = F->elem(rng() % F->size()), c = F->elem(rng() % F->size());
            ASSERT_EQ((a + b) + c, a + (b + c));
            ASSERT_EQ((a * b) * c, a * (b * c));
            ASSERT_EQ(a * (b + c), a * b + a * c);
            ASSERT_EQ(a + b, b + a);
            ASSERT_EQ(a * b, b * a);
            ASSERT_EQ(a - a, F->zero_elem());
            ASSERT_EQ(a * F->one_elem(), a);
            if (!a.is_zero()) ASSERT_EQ(a * a.inv(), F->one_elem());
            ASSERT_EQ(a.pow(F->size()), a);
        }
        EXPECT_THROW(F->zero_elem().inv(), InvalidArgument);
    }
}

TEST(FieldProperties, FrobeniusIsAutomorphism) {
    std::mt19937_64 rng(99);
    for (const auto& F : sample_fields()) {
        const Field& base = F->is_prime() ? *F : *F->base();
        for (int i = 0; i < 500; ++i) {
            const Elem a = F->elem(rng() % F->size()), b = F->elem(rng() % F->size());
            ASSERT_EQ(frobenius(a + b, base), frobenius(a, base) + frobenius(b, base));
            ASSERT_EQ(frobenius(a * b, base), frobenius(a, base) * frobenius(b, base));
        }
    }
}

TEST(FieldProperties, NormMultiplicativeTraceAdditive) {
    std::mt19937_64 rng(5);
    for (const auto& F : sample_fields()) {
        if (F->is_prime()) continue;
        const FieldRef& base = F->base();
        for (int i = 0; i < 300; ++i) {
            const Elem a = F->elem(rng() % F->size()), b = F->elem(rng() % F->size());
            ASSERT_EQ(norm(a * b, base), norm(a, base) * norm(b, base));
            ASSERT_EQ(trace(a + b, base), trace(a, base) + trace(b, base));
        }
    }
}

TEST(FieldProperties, NormSurjectiveExhaustive) {
    auto F2 = Field::prime(2), F3 = Field::prime(3), F5 = Field::prime(5), F7 = Field::prime(7);
    auto F8 = make_extension(F2, 3, 1);
    auto F9 = make_extension(F3, 2, 1);
    std::vector<std::pair<FieldRef, FieldRef>> cases = {
        {make_extension(F8, 2, 2), F8},  {make_extension(F8, 3, 3), F8},  {make_extension(F9, 2, 4), F9},
        {make_extension(F5, 3, 5), F5},  {make_extension(F7, 3, 6), F7},  {make_extension(F2, 9, 7), F2},
        {make_extension(F3, 5, 8), F3}};
    for (const auto& [top, base] : cases) {
        ASSERT_LE(top->size(), 512u);
        std::set<Code> image;
        for (Code c = 1; c < top->size(); ++c) image.insert(norm(top->elem(c), base).code());
        EXPECT_EQ(image.size(), base->size() - 1) << top->describe();
        EXPECT_FALSE(image.count(0));
    }
}

TEST(Embedding, HomomorphismAndRoot) {
    auto F2 = Field::prime(2);
    auto Fq = make_extension(F2, 2, 3);       // F4
    auto L0 = make_extension(Fq, 3, 4);       // F64 over F4
    auto K2 = make_extension(Fq, 2, 7);       // F16
    auto L2 = make_extension(K2, 3, 8);       // F4096, contains F64
    Embedding E(L0, L2);
    EXPECT_EQ(poly::eval(*L2, L0->modulus(), E.generator_image().code()), 0u);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const Elem a = L0->elem(rng() % 64), b = L0->elem(rng() % 64);
        EXPECT_EQ(E(a + b), E(a) + E(b));
        EXPECT_EQ(E(a * b), E(a) * E(b));
    }
}

TEST(Embedding, CompositionAgreesWithDirect) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        auto Fp = Field::prime(p);
        auto Fq = make_extension(Fp, p == 2 ? 3 : (p == 3 ? 2 : 1), p);  // |Fq| <= 64, |L| <= 2^22
        ASSERT_LE(Fq->size(), 64u);
        auto Lq = make_extension(Fq, 2, 11);
        auto K = make_extension(Fq, 3, 12);
        auto L = make_extension(K, 2, 13);
        Embedding e1(Fq, Lq), e2(Lq, L), direct(Fq, L);
        for (Code c = 0; c < Fq->size(); ++c) EXPECT_EQ(e2(e1(Fq->elem(c))), direct(Fq->elem(c)));
    }
}

TEST(Embedding, RecursiveBaseEmbedding) {
    // source built on a foreign copy of F4: its base must itself be embedded
    auto F2 = Field::prime(2);
    auto F4a = make_extension(F2, 2, 0);
    auto F4b = Field::extension(F2, {1, 1, 1});
    auto src = make_extension(F4a, 3, 1);
    auto tgt = make_extension(make_extension(F4b, 3, 2), 1, 3);
    Embedding E(src, tgt);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const Elem a = src->elem(rng() % 64), b = src->elem(rng() % 64);
        EXPECT_EQ(E(a * b), E(a) * E(b));
        EXPECT_EQ(E(a + b), E(a) + E(b));
    }
}

TEST(Elem, MixedFieldArithmeticThrows) {
    auto F3 = Field::prime(3), F5 = Field::prime(5);
    EXPECT_THROW(F3->one_elem() + F5->one_elem(), InvalidArgument);
    auto F9 = make_extension(F3, 2, 0);
    EXPECT_THROW(F9->one_elem() * F3->one_elem(), InvalidArgument);
}

TEST(Serialization, FieldJsonRoundTrip) {
    auto F3 = Field::prime(3);
    auto F = make_extension(make_extension(F3, 2, 1), 3, 2);
    auto j = to_json(*F);
    auto G = field_from_json(j);
    EXPECT_EQ(G->size(), F->size());
    EXPECT_EQ(G->modulus(), F->modulus());
    EXPECT_EQ(to_json(*G), j);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        Code a = static_cast<Code>(rng() % F->size()), b = static_cast<Code>(rng() % F->size());
        EXPECT_EQ(F->mul(a, b), G->mul(a, b));
    }
}
