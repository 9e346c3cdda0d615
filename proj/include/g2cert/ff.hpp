#ifndef G2CERT_FF_HPP
#define G2CERT_FF_HPP

// Arithmetic in F_l and in the extension F_l(zeta_7) = F_{l^d}, where d is
// the multiplicative order of l mod 7.  The extension is realized as
// F_l[x]/(modulus) for a deterministically chosen irreducible factor of the
// 7th cyclotomic polynomial Phi_7, so that serialized data is reproducible
// across runs: the modulus is the lexicographically smallest monic
// irreducible factor, coefficient tuples compared constant-term first.

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "g2cert/errors.hpp"
#include "g2cert/numt.hpp"

namespace g2cert {

class FieldCtx;
using FieldPtr = std::shared_ptr<const FieldCtx>;

namespace detail {

// Dense univariate polynomials over the prime field, coefficients
// constant-term first.  Only used for modulus construction.
using PPoly = std::vector<uint64_t>;

inline void pp_trim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PPoly pp_mul(const PPoly& a, const PPoly& b, uint64_t ell) {
    if (a.empty() || b.empty()) return {};
    PPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + numt::mulmod_u64(a[i], b[j], ell)) % ell;
    pp_trim(c);
    return c;
}

// Remainder of a modulo the monic polynomial m.
inline PPoly pp_mod(PPoly a, const PPoly& m, uint64_t ell) {
    pp_trim(a);
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (size_t j = 0; j < m.size(); ++j) {
                uint64_t sub = numt::mulmod_u64(lead, m[j], ell);
                uint64_t& t = a[shift + j];
                t = (t + ell - sub) % ell;
            }
        }
        a.pop_back();
        pp_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline PPoly pp_powmod(PPoly base, mpz_class e, const PPoly& m, uint64_t ell) {
    PPoly r{1};
    base = pp_mod(std::move(base), m, ell);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pp_mod(pp_mul(r, base, ell), m, ell);
        base = pp_mod(pp_mul(base, base, ell), m, ell);
        e >>= 1;
    }
    return r;
}

inline uint64_t pp_inv_scalar(uint64_t a, uint64_t ell) {
    // extended Euclid on integers
    int64_t t = 0, nt = 1;
    int64_t r = static_cast<int64_t>(ell), nr = static_cast<int64_t>(a % ell);
    while (nr != 0) {
        int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw division_by_zero_error("not invertible mod ell");
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(ell) : t);
}

inline PPoly pp_monic(PPoly f, uint64_t ell) {
    pp_trim(f);
    if (f.empty()) return f;
    uint64_t inv = pp_inv_scalar(f.back(), ell);
    for (auto& c : f) c = numt::mulmod_u64(c, inv, ell);
    return f;
}

inline PPoly pp_gcd(PPoly a, PPoly b, uint64_t ell) {
    pp_trim(a);
    pp_trim(b);
    while (!b.empty()) {
        PPoly r = pp_mod(a, pp_monic(b, ell), ell);
        a = std::move(b);
        b = std::move(r);
    }
    return pp_monic(a, ell);
}

inline PPoly pp_divexact(const PPoly& a, const PPoly& b, uint64_t ell) {
    // quotient of a by monic b, remainder asserted zero
    PPoly rem = a, q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    pp_trim(rem);
    const size_t db = b.size() - 1;
    while (rem.size() >= b.size()) {
        uint64_t lead = rem.back();
        size_t shift = rem.size() - 1 - db;
        q[shift] = lead;
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t sub = numt::mulmod_u64(lead, b[j], ell);
            rem[shift + j] = (rem[shift + j] + ell - sub) % ell;
        }
        pp_trim(rem);
        if (rem.empty()) break;
    }
    if (!rem.empty()) throw error("pp_divexact: nonzero remainder");
    pp_trim(q);
    return q;
}

} // namespace detail

/// Coefficient field context: F_l itself (prime_field) or the splitting
/// field F_l(zeta_7) of x^7 - 1 (make_field).  Immutable after
/// construction; all element operations are pure functions of their
/// arguments, so contexts and elements are safe to share across threads.
class FieldCtx {
public:
    static constexpr unsigned kMaxDegree = 6;

    uint64_t ell() const { return ell_; }
    unsigned degree() const { return d_; }
    /// Monic modulus, d+1 coefficients constant-term first.
    const std::vector<uint64_t>& modulus() const { return modulus_; }
    /// True when the residue class of x represents a primitive 7th root of unity.
    bool has_zeta() const { return has_zeta_; }
    /// Field size l^d.
    mpz_class card() const {
        mpz_class q(static_cast<unsigned long>(ell_));
        mpz_class r = 1;
        for (unsigned i = 0; i < d_; ++i) r *= q;
        return r;
    }

    bool same_as(const FieldCtx& o) const {
        return this == &o || (ell_ == o.ell_ && d_ == o.d_ && modulus_ == o.modulus_);
    }

    // ---- raw element kernels; elements are d consecutive limbs ----

    uint64_t addm(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= ell_ ? s - ell_ : s;
    }
    uint64_t subm(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + ell_ - b; }
    uint64_t mulm(uint64_t a, uint64_t b) const { return numt::mulmod_u64(a, b, ell_); }

    void raw_zero(uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = 0;
    }
    bool raw_is_zero(const uint64_t* a) const {
        for (unsigned i = 0; i < d_; ++i)
            if (a[i]) return false;
        return true;
    }
    void raw_copy(const uint64_t* a, uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = a[i];
    }
    void raw_add(const uint64_t* a, const uint64_t* b, uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = addm(a[i], b[i]);
    }
    void raw_sub(const uint64_t* a, const uint64_t* b, uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = subm(a[i], b[i]);
    }
    void raw_neg(const uint64_t* a, uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = a[i] ? ell_ - a[i] : 0;
    }
    void raw_scal(uint64_t c, const uint64_t* a, uint64_t* o) const {
        for (unsigned i = 0; i < d_; ++i) o[i] = mulm(c, a[i]);
    }

    void raw_mul(const uint64_t* a, const uint64_t* b, uint64_t* o) const {
        if (d_ == 1) {
            o[0] = mulm(a[0], b[0]);
            return;
        }
        uint64_t tmp[2 * kMaxDegree - 1] = {0};
        for (unsigned i = 0; i < d_; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < d_; ++j)
                tmp[i + j] = addm(tmp[i + j], mulm(a[i], b[j]));
        }
        // reduce degree 2d-2 .. d against the monic modulus
        for (unsigned k = 2 * d_ - 2; k >= d_; --k) {
            uint64_t lead = tmp[k];
            if (lead) {
                for (unsigned j = 0; j < d_; ++j)
                    tmp[k - d_ + j] = subm(tmp[k - d_ + j], mulm(lead, modulus_[j]));
            }
            tmp[k] = 0;
            if (k == d_) break;
        }
        for (unsigned i = 0; i < d_; ++i) o[i] = tmp[i];
    }

    /// a^(-1); extended Euclid in F_l[x] (plain modular inverse when d = 1).
    void raw_inv(const uint64_t* a, uint64_t* o) const {
        if (raw_is_zero(a)) throw division_by_zero_error("inverse of zero");
        if (d_ == 1) {
            o[0] = detail::pp_inv_scalar(a[0], ell_);
            return;
        }
        using detail::PPoly;
        PPoly r0(modulus_), r1(a, a + d_), t0{}, t1{1};
        detail::pp_trim(r1);
        while (!r1.empty() && r1.size() > 1) {
            uint64_t lead_inv = detail::pp_inv_scalar(r1.back(), ell_);
            PPoly q;  // quotient r0 / r1
            PPoly rem = r0;
            detail::pp_trim(rem);
            q.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 1, 0);
            while (rem.size() >= r1.size() && !rem.empty()) {
                uint64_t c = mulm(rem.back(), lead_inv);
                size_t shift = rem.size() - r1.size();
                q[shift] = c;
                for (size_t j = 0; j < r1.size(); ++j)
                    rem[shift + j] = subm(rem[shift + j], mulm(c, r1[j]));
                detail::pp_trim(rem);
            }
            PPoly nt = t0;  // t0 - q*t1
            PPoly qt = detail::pp_mul(q, t1, ell_);
            if (nt.size() < qt.size()) nt.resize(qt.size(), 0);
            for (size_t i = 0; i < qt.size(); ++i) nt[i] = subm(nt[i], qt[i]);
            detail::pp_trim(nt);
            r0 = std::move(r1);
            r1 = std::move(rem);
            t0 = std::move(t1);
            t1 = std::move(nt);
        }
        if (r1.empty()) throw division_by_zero_error("element not invertible");
        // r1 is a nonzero constant: o = t1 / r1
        uint64_t cinv = detail::pp_inv_scalar(r1[0], ell_);
        raw_zero(o);
        for (size_t i = 0; i < t1.size() && i < d_; ++i) o[i] = mulm(t1[i], cinv);
    }

    void raw_pow(const uint64_t* a, mpz_class e, uint64_t* o) const {
        uint64_t base[kMaxDegree], inv[kMaxDegree];
        raw_copy(a, base);
        if (e < 0) {
            raw_inv(base, inv);
            raw_copy(inv, base);
            e = -e;
        }
        raw_zero(o);
        o[0] = 1;
        uint64_t sq[kMaxDegree];
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) {
                raw_mul(o, base, sq);
                raw_copy(sq, o);
            }
            raw_mul(base, base, sq);
            raw_copy(sq, base);
            e >>= 1;
        }
    }

    /// Entrywise Frobenius a -> a^l, via the precomputed matrix of the
    /// l-power map on the basis 1, z, ..., z^(d-1).
    void raw_frobenius(const uint64_t* a, uint64_t* o) const {
        uint64_t acc[kMaxDegree] = {0};
        for (unsigned i = 0; i < d_; ++i) {
            if (!a[i]) continue;
            const uint64_t* row = &frob_[i * d_];
            for (unsigned j = 0; j < d_; ++j)
                acc[j] = addm(acc[j], mulm(a[i], row[j]));
        }
        for (unsigned i = 0; i < d_; ++i) o[i] = acc[i];
    }

    // Construction goes through the factory functions below.
    FieldCtx(uint64_t ell, unsigned d, std::vector<uint64_t> modulus, bool has_zeta)
        : ell_(ell), d_(d), modulus_(std::move(modulus)), has_zeta_(has_zeta) {
        frob_.assign(d_ * d_, 0);
        // z^(i*l) mod modulus for each basis power
        detail::PPoly zl = detail::pp_powmod({0, 1}, mpz_class(static_cast<unsigned long>(ell_)),
                                             modulus_, ell_);
        detail::PPoly cur{1};
        for (unsigned i = 0; i < d_; ++i) {
            for (size_t j = 0; j < cur.size(); ++j) frob_[i * d_ + j] = cur[j];
            cur = detail::pp_mod(detail::pp_mul(cur, zl, ell_), modulus_, ell_);
        }
    }

private:
    uint64_t ell_;
    unsigned d_;
    std::vector<uint64_t> modulus_;
    bool has_zeta_;
    std::vector<uint64_t> frob_;  // d x d matrix of the Frobenius on the power basis
};

/// Element of a FieldCtx.  Value type; coefficients of 1, z, ..., z^(d-1)
/// stored as least nonnegative residues.
class Fq {
public:
    Fq() = default;
    Fq(FieldPtr ctx, uint64_t scalar) : ctx_(std::move(ctx)) {
        c_.fill(0);
        c_[0] = scalar % ctx_->ell();
    }
    Fq(FieldPtr ctx, const std::vector<uint64_t>& coeffs) : ctx_(std::move(ctx)) {
        if (coeffs.size() > ctx_->degree()) throw error("coefficient vector too long");
        c_.fill(0);
        for (size_t i = 0; i < coeffs.size(); ++i) c_[i] = coeffs[i] % ctx_->ell();
    }

    static Fq from_int(const FieldPtr& ctx, int64_t v) {
        int64_t ell = static_cast<int64_t>(ctx->ell());
        int64_t r = v % ell;
        if (r < 0) r += ell;
        return Fq(ctx, static_cast<uint64_t>(r));
    }

    const FieldPtr& ctx() const { return ctx_; }
    const uint64_t* raw() const { return c_.data(); }
    uint64_t* raw() { return c_.data(); }

    std::vector<uint64_t> coeffs() const {
        return std::vector<uint64_t>(c_.begin(), c_.begin() + ctx_->degree());
    }

    bool is_zero() const { return ctx_->raw_is_zero(c_.data()); }

    bool operator==(const Fq& o) const {
        check_ctx(o);
        for (unsigned i = 0; i < ctx_->degree(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const Fq& o) const { return !(*this == o); }

    Fq operator+(const Fq& o) const {
        check_ctx(o);
        Fq r(*this);
        ctx_->raw_add(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Fq operator-(const Fq& o) const {
        check_ctx(o);
        Fq r(*this);
        ctx_->raw_sub(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Fq operator*(const Fq& o) const {
        check_ctx(o);
        Fq r(*this);
        ctx_->raw_mul(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Fq operator-() const {
        Fq r(*this);
        ctx_->raw_neg(c_.data(), r.c_.data());
        return r;
    }
    Fq inv() const {
        Fq r(*this);
        ctx_->raw_inv(c_.data(), r.c_.data());
        return r;
    }
    Fq operator/(const Fq& o) const { return *this * o.inv(); }

    Fq pow(const mpz_class& e) const {
        Fq r(*this);
        ctx_->raw_pow(c_.data(), e, r.c_.data());
        return r;
    }
    Fq pow(int64_t e) const { return pow(mpz_class(static_cast<long>(e))); }

    /// Total order on elements via the coefficient tuple; used only to fix
    /// canonical orderings (e.g. of eigenvalues in a signature).
    bool operator<(const Fq& o) const {
        check_ctx(o);
        for (unsigned i = 0; i < ctx_->degree(); ++i)
            if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
        return false;
    }

private:
    void check_ctx(const Fq& o) const {
        if (!ctx_ || !o.ctx_ || !ctx_->same_as(*o.ctx_))
            throw context_mismatch_error("operands from different field contexts");
    }

    FieldPtr ctx_;
    std::array<uint64_t, FieldCtx::kMaxDegree> c_{};
};

inline Fq frobenius(const Fq& a) {
    Fq r = a;
    a.ctx()->raw_frobenius(a.raw(), r.raw());
    return r;
}

namespace detail {

inline std::vector<uint64_t> phi7_mod(uint64_t ell) {
    std::vector<uint64_t> f(7, 1 % ell);
    return f;  // x^6 + x^5 + ... + 1
}

// All monic irreducible factors of Phi_7 over F_l have degree
// d = ord(l mod 7); split with Cantor-Zassenhaus and return the factors.
inline std::vector<PPoly> split_phi7(uint64_t ell, unsigned d) {
    PPoly phi = phi7_mod(ell);
    if (d == 6) return {phi};
    std::vector<PPoly> work{phi}, done;
    mpz_class q = 1;
    for (unsigned i = 0; i < d; ++i) q *= static_cast<unsigned long>(ell);
    mpz_class half = (q - 1) / 2;
    std::mt19937_64 rng(0x5eedf1e1d);  // fixed seed; output is canonical anyway
    while (!work.empty()) {
        PPoly f = work.back();
        work.pop_back();
        if (f.size() - 1 == d) {
            done.push_back(pp_monic(f, ell));
            continue;
        }
        // random r, gcd(f, r^((q-1)/2) - 1) splits the degree-d factors
        PPoly r(f.size() - 1, 0);
        for (auto& c : r) c = rng() % ell;
        pp_trim(r);
        if (r.empty()) continue;
        PPoly s = pp_powmod(r, half, f, ell);
        if (s.empty()) { work.push_back(f); continue; }
        s[0] = (s[0] + ell - 1) % ell;
        pp_trim(s);
        PPoly g = pp_gcd(f, s, ell);
        if (g.empty() || g.size() <= 1 || g.size() == f.size()) {
            work.push_back(f);
            continue;
        }
        work.push_back(g);
        work.push_back(pp_divexact(f, g, ell));
    }
    return done;
}

} // namespace detail

/// The coefficient field F_l(zeta_7) = F_{l^d}.  The modulus is the
/// lexicographically smallest monic irreducible factor of Phi_7 over F_l,
/// coefficient tuples compared constant-term first.
inline FieldPtr make_field(uint64_t ell) {
    if (ell == 2 || ell == 7)
        throw unsupported_characteristic_error("characteristic " + std::to_string(ell) +
                                               " not supported");
    if (!numt::is_prime_u64(ell)) throw not_prime_error(std::to_string(ell) + " is not prime");
    unsigned d = numt::multiplicative_order(ell % 7, 7);

    std::vector<uint64_t> modulus;
    if (d == 1) {
        // roots of Phi_7 = the six elements of order 7; pick the factor x - r
        // with the smallest constant term l - r
        uint64_t z = 0;
        for (uint64_t a = 2; a < ell; ++a) {
            uint64_t cand = numt::powmod_u64(a, (ell - 1) / 7, ell);
            if (cand != 1) { z = cand; break; }
        }
        uint64_t best = ell;  // constant term of the chosen factor
        uint64_t r = z;
        for (int i = 0; i < 6; ++i) {
            uint64_t c0 = (ell - r) % ell;
            best = std::min(best, c0);
            r = numt::mulmod_u64(r, z, ell);
        }
        modulus = {best, 1};
    } else if (d == 6) {
        modulus = detail::phi7_mod(ell);
    } else {
        auto factors = detail::split_phi7(ell, d);
        std::sort(factors.begin(), factors.end());  // lexicographic, constant-term first
        modulus = factors.front();
    }
    return std::make_shared<FieldCtx>(ell, d, modulus, true);
}

/// Plain prime field F_l (no zeta_7 available; modulus is the placeholder x).
inline FieldPtr prime_field(uint64_t ell) {
    if (ell == 2 || ell == 7)
        throw unsupported_characteristic_error("characteristic " + std::to_string(ell) +
                                               " not supported");
    if (!numt::is_prime_u64(ell)) throw not_prime_error(std::to_string(ell) + " is not prime");
    return std::make_shared<FieldCtx>(ell, 1, std::vector<uint64_t>{0, 1}, false);
}

/// The residue class of x, i.e. zeta_7 for contexts built by make_field.
inline Fq zeta(const FieldPtr& ctx) {
    if (!ctx->has_zeta()) throw error("context carries no 7th root of unity");
    if (ctx->degree() == 1) {
        // modulus is x + c, so z = -c
        uint64_t c0 = ctx->modulus()[0];
        return Fq(ctx, (ctx->ell() - c0) % ctx->ell());
    }
    return Fq(ctx, std::vector<uint64_t>{0, 1});
}

/// Embed an element of the prime field into an extension of the same
/// characteristic.
inline Fq embed(const Fq& a, const FieldPtr& ext) {
    if (a.ctx()->ell() != ext->ell()) throw context_mismatch_error("different characteristic");
    if (a.ctx()->degree() != 1) throw context_mismatch_error("embed expects a prime-field element");
    return Fq(ext, a.raw()[0]);
}

} // namespace g2cert

#endif
