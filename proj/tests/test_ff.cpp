#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "g2cert/ff.hpp"

using namespace g2cert;

namespace {

Fq random_elt(const FieldPtr& ctx, std::mt19937_64& rng) {
    std::vector<uint64_t> c(ctx->degree());
    for (auto& x : c) x = rng() % ctx->ell();
    return Fq(ctx, c);
}

// independent oracle: smallest monic quadratic divisor of Phi_7 mod ell,
// by exhaustive search over (c0, c1)
std::vector<uint64_t> smallest_quadratic_factor_oracle(uint64_t ell) {
    auto phi = detail::phi7_mod(ell);
    for (uint64_t c0 = 0; c0 < ell; ++c0)
        for (uint64_t c1 = 0; c1 < ell; ++c1) {
            detail::PPoly q{c0, c1, 1};
            auto r = detail::pp_mod(phi, q, ell);
            if (r.empty()) return {c0, c1, 1};
        }
    return {};
}

} // namespace

TEST_CASE("make_field degree and modulus selection") {
    SECTION("l = 29: d = 1, modulus x + 4") {
        auto f = make_field(29);
        CHECK(f->ell() == 29);
        CHECK(f->degree() == 1);
        CHECK(f->modulus() == std::vector<uint64_t>{4, 1});
        CHECK(zeta(f) == Fq(f, 25));
    }
    SECTION("l = 5: d = 6, modulus Phi_7") {
        auto f = make_field(5);
        CHECK(f->degree() == 6);
        CHECK(f->modulus() == std::vector<uint64_t>(7, 1));
    }
    SECTION("l = 13: d = 2, smallest quadratic factor") {
        auto f = make_field(13);
        CHECK(f->degree() == 2);
        CHECK(f->modulus() == smallest_quadratic_factor_oracle(13));
        CHECK(f->modulus() == std::vector<uint64_t>{1, 3, 1});  // x^2 + 3x + 1
    }
    SECTION("l = 11: d = 3") {
        auto f = make_field(11);
        CHECK(f->degree() == 3);
        // verify the modulus divides Phi_7 and is the lex-smallest cubic divisor
        auto phi = detail::phi7_mod(11);
        CHECK(detail::pp_mod(phi, f->modulus(), 11).empty());
        bool found_smaller = false;
        for (uint64_t c0 = 0; c0 < 11 && !found_smaller; ++c0)
            for (uint64_t c1 = 0; c1 < 11 && !found_smaller; ++c1)
                for (uint64_t c2 = 0; c2 < 11; ++c2) {
                    detail::PPoly q{c0, c1, c2, 1};
                    if (q >= f->modulus()) break;
                    if (detail::pp_mod(phi, q, 11).empty()) { found_smaller = true; break; }
                }
        CHECK_FALSE(found_smaller);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(make_field(2), unsupported_characteristic_error);
        CHECK_THROWS_AS(make_field(7), unsupported_characteristic_error);
        CHECK_THROWS_AS(make_field(9), not_prime_error);
        CHECK_THROWS_AS(make_field(1), not_prime_error);
        CHECK_THROWS_AS(prime_field(4), not_prime_error);
    }
}

TEST_CASE("zeta has order 7") {
    for (uint64_t ell : {5ull, 11ull, 13ull, 29ull}) {
        auto f = make_field(ell);
        Fq z = zeta(f);
        CHECK(z != Fq(f, 1));
        CHECK(z.pow(7) == Fq(f, 1));
        // modulus(z) = 0 by construction of the quotient ring
        Fq acc(f, 0);
        Fq zp(f, 1);
        for (uint64_t c : f->modulus()) {
            acc = acc + Fq(f, c) * zp;
            zp = zp * z;
        }
        CHECK(acc.is_zero());
    }
}

TEST_CASE("field arithmetic") {
    auto f29 = make_field(29);
    SECTION("inv(25) = 7 over F_29") {
        CHECK(Fq(f29, 25).inv() == Fq(f29, 7));
        CHECK(Fq(f29, 25) * Fq(f29, 7) == Fq(f29, 1));
    }
    SECTION("division by zero") {
        CHECK_THROWS_AS(Fq(f29, 0).inv(), division_by_zero_error);
    }
    SECTION("context mismatch") {
        auto f5 = make_field(5);
        CHECK_THROWS_AS(Fq(f29, 1) + Fq(f5, 1), context_mismatch_error);
    }
    SECTION("field axioms, fuzz") {
        std::mt19937_64 rng(1);
        for (uint64_t ell : {5ull, 13ull, 29ull}) {
            auto f = make_field(ell);
            mpz_class q = f->card();
            for (int i = 0; i < 50; ++i) {
                Fq a = random_elt(f, rng), b = random_elt(f, rng), c = random_elt(f, rng);
                CHECK(a * (b + c) == a * b + a * c);
                CHECK(a * b == b * a);
                if (!a.is_zero()) CHECK(a * a.inv() == Fq(f, 1));
                CHECK(a.pow(q) == a);  // a^(l^d) = a
            }
        }
    }
}

TEST_CASE("frobenius") {
    SECTION("frobenius(z) = z^5 at l = 5") {
        auto f = make_field(5);
        CHECK(frobenius(zeta(f)) == zeta(f).pow(5));
    }
    SECTION("fixes prime subfield") {
        auto f = make_field(13);
        for (uint64_t c = 0; c < 13; ++c) CHECK(frobenius(Fq(f, c)) == Fq(f, c));
    }
    SECTION("order d, additive and multiplicative") {
        std::mt19937_64 rng(2);
        for (uint64_t ell : {5ull, 11ull, 13ull, 29ull}) {
            auto f = make_field(ell);
            for (int i = 0; i < 30; ++i) {
                Fq a = random_elt(f, rng), b = random_elt(f, rng);
                CHECK(frobenius(a + b) == frobenius(a) + frobenius(b));
                CHECK(frobenius(a * b) == frobenius(a) * frobenius(b));
                CHECK(frobenius(a) == a.pow(static_cast<int64_t>(ell)));
                Fq x = a;
                for (unsigned k = 0; k < f->degree(); ++k) x = frobenius(x);
                CHECK(x == a);
            }
            // only the prime subfield is fixed: frobenius(z) != z when d > 1
            if (f->degree() > 1) CHECK(frobenius(zeta(f)) != zeta(f));
        }
    }
}

TEST_CASE("embed prime field into extension") {
    auto p5 = prime_field(5);
    auto e5 = make_field(5);
    Fq a(p5, 3);
    Fq b = embed(a, e5);
    CHECK(b == Fq(e5, 3));
    CHECK_THROWS_AS(embed(Fq(p5, 1), make_field(13)), context_mismatch_error);
}
