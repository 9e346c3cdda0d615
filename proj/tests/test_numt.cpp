#include <catch2/catch_amalgamated.hpp>

#include "g2cert/numt.hpp"

using namespace g2cert;

TEST_CASE("primality") {
    CHECK(numt::is_prime_u64(2));
    CHECK(numt::is_prime_u64(7));
    CHECK(numt::is_prime_u64(29));
    CHECK(numt::is_prime_u64(1'000'003));
    CHECK_FALSE(numt::is_prime_u64(1));
    CHECK_FALSE(numt::is_prime_u64(0));
    CHECK_FALSE(numt::is_prime_u64(15624));
    CHECK(numt::is_prime(mpz_class("170141183460469231731687303715884105727")));  // 2^127 - 1
}

TEST_CASE("factor small") {
    auto f = numt::factor(15624);
    Factorization expected{{2, 3}, {3, 2}, {7, 1}, {31, 1}};
    CHECK(f == expected);
    CHECK(numt::unfactor(f) == 15624);

    CHECK(numt::factor(1).empty());

    auto g = numt::factor(mpz_class("5859000000"));
    Factorization eg{{2, 6}, {3, 3}, {5, 6}, {7, 1}, {31, 1}};
    CHECK(g == eg);
}

TEST_CASE("factor larger composites") {
    // product of two 10-digit primes exercises the rho path
    mpz_class a("1000000007"), b("1000000009");
    auto f = numt::factor(a * b);
    REQUIRE(f.size() == 2);
    CHECK(f[0].first == a);
    CHECK(f[1].first == b);
}

TEST_CASE("g2 order formula") {
    CHECK(numt::g2_order(3) == 4245696);
    CHECK(numt::g2_order(5) == mpz_class("5859000000"));
    // l = 29 exceeds 64 bits
    CHECK(numt::g2_order(29) == mpz_class(29) * 29 * 29 * 29 * 29 * 29 *
                                    (mpz_class("594823321") - 1) * 840);
}

TEST_CASE("multiplicative order mod 7") {
    CHECK(numt::multiplicative_order(29 % 7, 7) == 1);
    CHECK(numt::multiplicative_order(13 % 7, 7) == 2);
    CHECK(numt::multiplicative_order(11 % 7, 7) == 3);
    CHECK(numt::multiplicative_order(5 % 7, 7) == 6);
    CHECK(numt::multiplicative_order(17 % 7, 7) == 6);
}

TEST_CASE("primitive roots") {
    CHECK(numt::least_primitive_root(5) == 2);
    CHECK(numt::least_primitive_root(7) == 3);
    CHECK(numt::least_primitive_root(29) == 2);
}

TEST_CASE("primes_up_to") {
    auto ps = numt::primes_up_to(30);
    std::vector<uint64_t> expected{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    CHECK(ps == expected);
}
