#ifndef G2CERT_NUMT_HPP
#define G2CERT_NUMT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "g2cert/errors.hpp"

namespace g2cert {

/// A complete prime factorization, primes ascending.
using Factorization = std::vector<std::pair<mpz_class, unsigned>>;

namespace numt {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin for 64-bit inputs (fixed witness set),
/// probabilistic (mpz_probab_prime_p) beyond.
inline bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) {
        uint64_t v = n.get_ui();
        for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
            if (v == p) return true;
            if (v % p == 0) return false;
        }
        uint64_t d = v - 1;
        int s = 0;
        while ((d & 1) == 0) { d >>= 1; ++s; }
        // Sinclair witness set: deterministic below 3.3 * 10^24, in particular for all 64-bit v.
        for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
            uint64_t x = powmod_u64(a, d, v);
            if (x == 1 || x == v - 1) continue;
            bool composite = true;
            for (int r = 1; r < s; ++r) {
                x = mulmod_u64(x, x, v);
                if (x == v - 1) { composite = false; break; }
            }
            if (composite) return false;
        }
        return true;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline bool is_prime_u64(uint64_t n) { return is_prime(mpz_class(static_cast<unsigned long>(n))); }

namespace detail {

inline mpz_class pollard_rho(const mpz_class& n, unsigned long c, unsigned long budget) {
    // Brent's cycle variant; returns a nontrivial factor or 0 on budget exhaustion.
    mpz_class x = 2, y = 2, d = 1, diff, ys;
    unsigned long count = 0;
    auto step = [&](mpz_class& v) { v = (v * v + c) % n; };
    mpz_class prod = 1;
    while (count < budget) {
        x = y;
        unsigned long k = 1u << std::min<unsigned long>(20, count / 1024 + 4);
        for (unsigned long i = 0; i < k && count < budget; ++i) {
            step(y);
            ++count;
            diff = x - y;
            if (diff == 0) continue;
            prod = (prod * diff) % n;
            if ((count & 127) == 0) {
                d = gcd(prod, n);
                if (d != 1 && d != n) return d;
                if (d == n) break;
            }
        }
        d = gcd(prod, n);
        if (d != 1 && d != n) return d;
        if (d == n) {
            // backtrack with fresh constant
            return pollard_rho(n, c + 1, budget - std::min(budget, count));
        }
    }
    return 0;
}

inline void factor_rec(mpz_class n, std::map<mpz_class, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class f = pollard_rho(n, 1, 50'000'000);
    if (f == 0 || f == 1 || f == n)
        throw factorization_failed_error("factorization budget exhausted for " + n.get_str());
    factor_rec(f, out);
    factor_rec(n / f, out);
}

} // namespace detail

/// Complete factorization: trial division to 10^6, then Pollard rho with
/// Miller-Rabin primality checks.  A residual that resists the rho budget
/// raises factorization_failed_error rather than returning a partial answer.
inline Factorization factor(const mpz_class& n) {
    if (n < 1) throw zero_argument_error("factor requires n >= 1");
    std::map<mpz_class, unsigned> acc;
    mpz_class m = n;
    for (uint64_t p = 2; p <= 1'000'000 && mpz_class(m) > 1; p = (p == 2 ? 3 : p + 2)) {
        if (mpz_class(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            ++acc[mpz_class(static_cast<unsigned long>(p))];
            m /= static_cast<unsigned long>(p);
        }
    }
    if (m > 1) {
        if (is_prime(m))
            ++acc[m];
        else
            detail::factor_rec(m, acc);
    }
    return Factorization(acc.begin(), acc.end());
}

inline mpz_class unfactor(const Factorization& f) {
    mpz_class n = 1;
    for (const auto& [p, e] : f)
        for (unsigned i = 0; i < e; ++i) n *= p;
    return n;
}

/// Primes <= bound, by sieve.
inline std::vector<uint64_t> primes_up_to(uint64_t bound) {
    std::vector<uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(bound + 1, true);
    for (uint64_t i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (uint64_t j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return out;
}

/// |G2(l)| = l^6 (l^6 - 1)(l^2 - 1).
inline mpz_class g2_order(uint64_t ell) {
    mpz_class q(static_cast<unsigned long>(ell));
    mpz_class q2 = q * q;
    mpz_class q6 = q2 * q2 * q2;
    return q6 * (q6 - 1) * (q2 - 1);
}

/// Multiplicative order of a modulo m (m small).
inline unsigned multiplicative_order(uint64_t a, uint64_t m) {
    a %= m;
    uint64_t x = a % m;
    unsigned o = 1;
    while (x != 1) {
        x = (x * a) % m;
        ++o;
        if (o > m) throw error("order does not exist: gcd(a,m) != 1");
    }
    return o;
}

/// Least primitive root modulo the odd prime ell.
inline uint64_t least_primitive_root(uint64_t ell) {
    Factorization f = factor(mpz_class(static_cast<unsigned long>(ell - 1)));
    for (uint64_t g = 2; g < ell; ++g) {
        bool ok = true;
        for (const auto& [p, e] : f) {
            uint64_t pe = p.get_ui();
            if (powmod_u64(g, (ell - 1) / pe, ell) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw error("no primitive root found (non-prime modulus?)");
}

} // namespace numt
} // namespace g2cert

#endif
