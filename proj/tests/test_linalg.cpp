#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "g2cert/linalg.hpp"

using namespace g2cert;

namespace {

// the two explicit root-subgroup generators of the G2 layer; hardcoded here
// so the linalg suite stays self-contained
Mat x_alpha(const FieldPtr& ctx) {
    return Mat::from_int_rows(ctx, {{1, 1, 0, 0, 0, 0, 0},
                                    {0, 1, 0, 0, 0, 0, 0},
                                    {0, 0, 1, 1, -1, 0, 0},
                                    {0, 0, 0, 1, -2, 0, 0},
                                    {0, 0, 0, 0, 1, 0, 0},
                                    {0, 0, 0, 0, 0, 1, -1},
                                    {0, 0, 0, 0, 0, 0, 1}});
}

Mat random_mat(const FieldPtr& ctx, unsigned n, std::mt19937_64& rng) {
    Mat m(ctx, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            std::vector<uint64_t> c(ctx->degree());
            for (auto& x : c) x = rng() % ctx->ell();
            m.set(i, j, Fq(ctx, c));
        }
    return m;
}

Mat random_invertible(const FieldPtr& ctx, unsigned n, std::mt19937_64& rng) {
    for (;;) {
        Mat m = random_mat(ctx, n, rng);
        if (rank(m) == n) return m;
    }
}

} // namespace

TEST_CASE("rank and kernel") {
    auto f5 = prime_field(5);
    SECTION("identity") {
        Mat id = Mat::identity(f5, 7);
        CHECK(rank(id) == 7);
        CHECK(kernel(id).dim() == 0);
    }
    SECTION("x_alpha - 1 rank profile 4, 1, 0") {
        Mat n = x_alpha(f5) - Mat::identity(f5, 7);
        CHECK(rank(n) == 4);
        CHECK(rank(n * n) == 1);
        CHECK(rank(n * n * n) == 0);
        CHECK(kernel(n).dim() == 3);
    }
    SECTION("rank + dim kernel = n, fuzz") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) {
            Mat m = random_mat(f5, 7, rng);
            CHECK(rank(m) + kernel(m).dim() == 7);
            // kernel really is annihilated
            for (const auto& row : kernel(m).basis()) {
                auto img = m.apply(row);
                for (const auto& x : img) CHECK(x.is_zero());
            }
        }
    }
}

TEST_CASE("char and min polynomials") {
    auto f29 = make_field(29);
    auto f5 = prime_field(5);
    SECTION("identity: ((x-1)^7, x-1)") {
        Mat id = Mat::identity(f5, 7);
        auto [cp, mp] = char_min_poly(id);
        Poly xm1 = Poly::linear_root(f5, Fq(f5, 1));
        Poly expect = Poly::one(f5);
        for (int i = 0; i < 7; ++i) expect = expect * xm1;
        CHECK(cp == expect);
        CHECK(mp == xm1);
    }
    SECTION("order-7 regular element: charpoly = minpoly = x^7 - 1") {
        // eigenvalues are the 7th roots of unity in F_29 (zeta = 25)
        Fq z = zeta(f29);
        std::vector<Fq> diag;
        for (int i = 1; i <= 6; ++i) diag.push_back(z.pow(i));
        diag.push_back(Fq(f29, 1));
        Mat g = Mat::diagonal(f29, diag);
        auto [cp, mp] = char_min_poly(g);
        std::vector<Fq> c(8, Fq(f29, 0));
        c[0] = -Fq(f29, 1);
        c[7] = Fq(f29, 1);
        Poly x7m1(f29, c);
        CHECK(cp == x7m1);
        CHECK(mp == x7m1);
    }
    SECTION("x_alpha: minpoly (x-1)^3") {
        auto [cp, mp] = char_min_poly(x_alpha(f5));
        Poly xm1 = Poly::linear_root(f5, Fq(f5, 1));
        CHECK(mp == xm1 * xm1 * xm1);
        CHECK((cp % mp).is_zero());
    }
    SECTION("minpoly divides charpoly and annihilates, fuzz") {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 15; ++i) {
            Mat m = random_mat(f5, 5, rng);
            auto [cp, mp] = char_min_poly(m);
            CHECK((cp % mp).is_zero());
            CHECK(cp.eval(m).is_zero());
            CHECK(mp.eval(m).is_zero());
            CHECK(cp.degree() == 5);
        }
    }
}

TEST_CASE("jcf signatures") {
    auto f5 = prime_field(5);
    SECTION("diag(-1,-1,-1,-1,1,1,1)") {
        std::vector<Fq> d(4, Fq::from_int(f5, -1));
        d.insert(d.end(), 3, Fq(f5, 1));
        auto sig = jcf_signature(Mat::diagonal(f5, d));
        std::vector<std::pair<Fq, unsigned>> expect;
        for (int i = 0; i < 4; ++i) expect.emplace_back(Fq::from_int(f5, -1), 1);
        for (int i = 0; i < 3; ++i) expect.emplace_back(Fq(f5, 1), 1);
        CHECK(sig == JcfSignature(expect));
        CHECK(sig.centralizer_dim() == 25);
    }
    SECTION("x_alpha: partition 3+2+2") {
        auto sig = jcf_signature(x_alpha(f5));
        Fq one(f5, 1);
        JcfSignature expect({{one, 3}, {one, 2}, {one, 2}});
        CHECK(sig == expect);
        CHECK(sig.centralizer_dim() == 19);
    }
    SECTION("identity") {
        auto sig = jcf_signature(Mat::identity(f5, 7));
        CHECK(sig == JcfSignature(std::vector<std::pair<Fq, unsigned>>(7, {Fq(f5, 1), 1})));
    }
    SECTION("non-split spectrum") {
        // companion of x^2 + x + 1, irreducible over F_5, padded by identity
        Mat m = Mat::identity(f5, 7);
        m.set(0, 0, Fq(f5, 0));
        m.set(0, 1, Fq::from_int(f5, -1));
        m.set(1, 0, Fq(f5, 1));
        m.set(1, 1, Fq::from_int(f5, -1));
        CHECK_THROWS_AS(jcf_signature(m), non_split_spectrum_error);
    }
    SECTION("conjugation invariance, fuzz") {
        std::mt19937_64 rng(5);
        Mat base = x_alpha(f5);
        auto sig = jcf_signature(base);
        for (int i = 0; i < 25; ++i) {
            Mat p = random_invertible(f5, 7, rng);
            CHECK(jcf_signature(p * base * p.inverse()) == sig);
        }
    }
    SECTION("rank-profile consistency") {
        // sum over blocks of max(length - k, 0) = rank((M - lambda)^k)
        auto f29 = make_field(29);
        std::mt19937_64 rng(6);
        Mat m = x_alpha(prime_field(5));
        auto sig = jcf_signature(m);
        Mat n = m - Mat::identity(m.ctx(), 7);
        Mat p = Mat::identity(m.ctx(), 7);
        for (unsigned k = 1; k <= 4; ++k) {
            p = p * n;
            unsigned expect = 0;
            for (const auto& [e, l] : sig.blocks())
                if (l > k) expect += l - k;
            CHECK(rank(p) == expect);
        }
        (void)f29;
        (void)rng;
    }
}

TEST_CASE("commutant") {
    auto f5 = prime_field(5);
    auto f29 = make_field(29);
    SECTION("empty generator set: full matrix algebra") {
        auto c = commutant({}, f5, 7);
        CHECK(c.dim == 49);
    }
    SECTION("regular element: dimension 7") {
        Fq z = zeta(f29);
        std::vector<Fq> diag;
        for (int i = 1; i <= 6; ++i) diag.push_back(z.pow(i));
        diag.push_back(Fq(f29, 1));
        Mat g = Mat::diagonal(f29, diag);
        auto c = commutant({g});
        CHECK(c.dim == 7);
        for (const auto& x : c.basis) CHECK(x * g == g * x);
    }
    SECTION("dimension is conjugation-invariant and >= 1") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 10; ++i) {
            Mat m = random_mat(f5, 5, rng);
            Mat p = random_invertible(f5, 5, rng);
            auto c1 = commutant({m});
            auto c2 = commutant({p * m * p.inverse()});
            CHECK(c1.dim == c2.dim);
            CHECK(c1.dim >= 1);
        }
    }
}

TEST_CASE("invariant forms") {
    auto f5 = prime_field(5);
    SECTION("identity only: dims 28 and 35") {
        Mat id = Mat::identity(f5, 7);
        CHECK(invariant_forms({id}, FormKind::sym2).dim() == 28);
        CHECK(invariant_forms({id}, FormKind::alt3).dim() == 35);
    }
    SECTION("minus identity: alt3 dim 0 by parity") {
        Mat mid = Mat::scalar(f5, 7, Fq::from_int(f5, -1));
        CHECK(invariant_forms({mid}, FormKind::alt3).dim() == 0);
        CHECK(invariant_forms({mid}, FormKind::sym2).dim() == 28);
    }
    SECTION("solutions really are invariant") {
        std::mt19937_64 rng(8);
        Mat m = random_invertible(f5, 4, rng);
        auto forms = invariant_forms({m}, FormKind::alt3);
        for (const auto& coords : forms.basis) {
            CHECK(alt3_transform(m, coords) == coords);
            for (int t = 0; t < 20; ++t) {
                std::vector<Fq> x, y, z;
                for (int j = 0; j < 4; ++j) {
                    x.emplace_back(f5, rng() % 5);
                    y.emplace_back(f5, rng() % 5);
                    z.emplace_back(f5, rng() % 5);
                }
                Fq lhs = alt3_eval(f5, 4, coords, m.apply(x), m.apply(y), m.apply(z));
                CHECK(lhs == alt3_eval(f5, 4, coords, x, y, z));
                // alternating: vanishes on repeated arguments
                CHECK(alt3_eval(f5, 4, coords, x, x, z).is_zero());
            }
        }
    }
}

TEST_CASE("polynomial factorization") {
    auto f5 = prime_field(5);
    std::mt19937_64 rng(9);
    SECTION("splits known product") {
        Poly f = Poly::linear_root(f5, Fq(f5, 1));
        f = f * f * f * Poly::linear_root(f5, Fq(f5, 2));
        auto factors = factor_poly(f, rng);
        REQUIRE(factors.size() == 2);
        // sorted by degree then coefficients
        CHECK(factors[0].first.degree() == 1);
        Poly rebuilt = Poly::one(f5);
        for (const auto& [p, m] : factors)
            for (unsigned i = 0; i < m; ++i) rebuilt = rebuilt * p;
        CHECK(rebuilt == f.monic());
    }
    SECTION("roots of x^7 - 1 over the extension") {
        auto e5 = make_field(5);
        std::vector<Fq> c(8, Fq(e5, 0));
        c[0] = -Fq(e5, 1);
        c[7] = Fq(e5, 1);
        auto [roots, split] = poly_roots(Poly(e5, c), rng);
        CHECK(split);
        CHECK(roots.size() == 7);
    }
    SECTION("irreducible quadratic detected") {
        // x^2 + x + 1 over F_5
        Poly f(f5, {Fq(f5, 1), Fq(f5, 1), Fq(f5, 1)});
        auto [roots, split] = poly_roots(f, rng);
        CHECK_FALSE(split);
        CHECK(roots.empty());
        auto factors = factor_poly(f, rng);
        REQUIRE(factors.size() == 1);
        CHECK(factors[0].first.degree() == 2);
    }
    SECTION("random products round-trip, including extension fields") {
        auto e13 = make_field(13);
        for (int trial = 0; trial < 10; ++trial) {
            Poly f = Poly::one(e13);
            for (int i = 0; i < 4; ++i) {
                std::vector<uint64_t> cv(e13->degree());
                for (auto& x : cv) x = rng() % 13;
                f = f * Poly::linear_root(e13, Fq(e13, cv));
            }
            auto factors = factor_poly(f, rng);
            Poly rebuilt = Poly::one(e13);
            unsigned total = 0;
            for (const auto& [p, m] : factors) {
                total += m * p.degree();
                for (unsigned i = 0; i < m; ++i) rebuilt = rebuilt * p;
            }
            CHECK(total == 4);
            CHECK(rebuilt == f.monic());
        }
    }
}

TEST_CASE("subspaces") {
    auto f5 = prime_field(5);
    std::vector<Fq> e1(4, Fq(f5, 0)), e2(4, Fq(f5, 0));
    e1[0] = Fq(f5, 1);
    e2[1] = Fq(f5, 1);
    auto s = Subspace::span(f5, 4, {e1, e2});
    CHECK(s.dim() == 2);
    CHECK(s.contains(e1));
    std::vector<Fq> v(4, Fq(f5, 2));
    CHECK_FALSE(s.contains(v));
    auto t = Subspace::span(f5, 4, {v});
    CHECK(s.sum(t).dim() == 3);
    CHECK(s.sum(t).contains(s));
    CHECK(Subspace::span(f5, 4, {e2, e1}) == s);  // canonical representation
}
