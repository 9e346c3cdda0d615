#ifndef G2CERT_LINALG_HPP
#define G2CERT_LINALG_HPP

// Matrix algebra over a FieldCtx: rank and kernel, characteristic and
// minimal polynomials, Jordan signatures via rank profiles, commutant and
// invariant-form solvers.  Dimensions stay small (n <= 50); everything is
// dense Gaussian elimination on flat limb buffers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "g2cert/ff.hpp"

namespace g2cert {

namespace detail {

/// Row-major rectangular array of field elements, each element taking
/// ctx->degree() limbs.
struct FlatRows {
    FieldPtr ctx;
    size_t rows = 0, cols = 0;
    std::vector<uint64_t> a;

    FlatRows(FieldPtr c, size_t r, size_t cl)
        : ctx(std::move(c)), rows(r), cols(cl), a(r * cl * ctx->degree(), 0) {}

    uint64_t* at(size_t r, size_t c) { return &a[(r * cols + c) * ctx->degree()]; }
    const uint64_t* at(size_t r, size_t c) const { return &a[(r * cols + c) * ctx->degree()]; }

    void set(size_t r, size_t c, const Fq& v) { ctx->raw_copy(v.raw(), at(r, c)); }
    Fq get(size_t r, size_t c) const {
        Fq v(ctx, 0);
        ctx->raw_copy(at(r, c), v.raw());
        return v;
    }
    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        size_t w = cols * ctx->degree();
        std::swap_ranges(a.begin() + i * w, a.begin() + (i + 1) * w, a.begin() + j * w);
    }
};

/// In-place reduced row echelon form; returns the pivot columns.  Zero rows
/// are dropped.
inline std::vector<size_t> rref(FlatRows& m) {
    const unsigned d = m.ctx->degree();
    std::vector<size_t> pivots;
    size_t r = 0;
    std::vector<uint64_t> tmp(d), piv_inv(d);
    for (size_t col = 0; col < m.cols && r < m.rows; ++col) {
        size_t sel = r;
        while (sel < m.rows && m.ctx->raw_is_zero(m.at(sel, col))) ++sel;
        if (sel == m.rows) continue;
        m.swap_rows(sel, r);
        m.ctx->raw_inv(m.at(r, col), piv_inv.data());
        for (size_t c = col; c < m.cols; ++c) {
            m.ctx->raw_mul(m.at(r, c), piv_inv.data(), tmp.data());
            m.ctx->raw_copy(tmp.data(), m.at(r, c));
        }
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.ctx->raw_is_zero(m.at(i, col))) continue;
            std::vector<uint64_t> f(d);
            m.ctx->raw_copy(m.at(i, col), f.data());
            for (size_t c = col; c < m.cols; ++c) {
                m.ctx->raw_mul(f.data(), m.at(r, c), tmp.data());
                m.ctx->raw_sub(m.at(i, c), tmp.data(), m.at(i, c));
            }
        }
        pivots.push_back(col);
        ++r;
    }
    m.rows = r;
    m.a.resize(r * m.cols * d);
    return pivots;
}

} // namespace detail

/// Square matrix over a FieldCtx.  Value semantics; entries stored in a
/// flat row-major limb buffer.
class Mat {
public:
    Mat(FieldPtr ctx, unsigned n) : ctx_(std::move(ctx)), n_(n), a_(size_t(n) * n * ctx_->degree(), 0) {}

    static Mat identity(FieldPtr ctx, unsigned n) {
        Mat m(std::move(ctx), n);
        Fq one(m.ctx_, 1);
        for (unsigned i = 0; i < n; ++i) m.set(i, i, one);
        return m;
    }
    static Mat scalar(FieldPtr ctx, unsigned n, const Fq& c) {
        Mat m(std::move(ctx), n);
        for (unsigned i = 0; i < n; ++i) m.set(i, i, c);
        return m;
    }
    static Mat diagonal(FieldPtr ctx, const std::vector<Fq>& diag) {
        Mat m(std::move(ctx), static_cast<unsigned>(diag.size()));
        for (unsigned i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
        return m;
    }
    /// n x n matrix with integer entries reduced mod l (negative allowed).
    static Mat from_int_rows(FieldPtr ctx, const std::vector<std::vector<int64_t>>& rows) {
        Mat m(ctx, static_cast<unsigned>(rows.size()));
        for (unsigned i = 0; i < m.n_; ++i)
            for (unsigned j = 0; j < m.n_; ++j) m.set(i, j, Fq::from_int(ctx, rows[i][j]));
        return m;
    }

    const FieldPtr& ctx() const { return ctx_; }
    unsigned n() const { return n_; }

    const uint64_t* entry(unsigned i, unsigned j) const {
        return &a_[(size_t(i) * n_ + j) * ctx_->degree()];
    }
    uint64_t* entry(unsigned i, unsigned j) { return &a_[(size_t(i) * n_ + j) * ctx_->degree()]; }

    Fq at(unsigned i, unsigned j) const {
        Fq v(ctx_, 0);
        ctx_->raw_copy(entry(i, j), v.raw());
        return v;
    }
    void set(unsigned i, unsigned j, const Fq& v) { ctx_->raw_copy(v.raw(), entry(i, j)); }

    bool operator==(const Mat& o) const { return n_ == o.n_ && a_ == o.a_ && ctx_->same_as(*o.ctx_); }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat operator+(const Mat& o) const {
        check(o);
        Mat r(ctx_, n_);
        for (size_t k = 0; k < size_t(n_) * n_; ++k)
            ctx_->raw_add(&a_[k * ctx_->degree()], &o.a_[k * ctx_->degree()],
                          &r.a_[k * ctx_->degree()]);
        return r;
    }
    Mat operator-(const Mat& o) const {
        check(o);
        Mat r(ctx_, n_);
        for (size_t k = 0; k < size_t(n_) * n_; ++k)
            ctx_->raw_sub(&a_[k * ctx_->degree()], &o.a_[k * ctx_->degree()],
                          &r.a_[k * ctx_->degree()]);
        return r;
    }
    Mat operator*(const Mat& o) const {
        check(o);
        const unsigned d = ctx_->degree();
        Mat r(ctx_, n_);
        std::vector<uint64_t> acc(d), tmp(d);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) {
                ctx_->raw_zero(acc.data());
                for (unsigned k = 0; k < n_; ++k) {
                    if (ctx_->raw_is_zero(entry(i, k))) continue;
                    ctx_->raw_mul(entry(i, k), o.entry(k, j), tmp.data());
                    ctx_->raw_add(acc.data(), tmp.data(), acc.data());
                }
                ctx_->raw_copy(acc.data(), r.entry(i, j));
            }
        return r;
    }
    Mat operator*(const Fq& c) const {
        Mat r(ctx_, n_);
        const unsigned d = ctx_->degree();
        for (size_t k = 0; k < size_t(n_) * n_; ++k)
            ctx_->raw_mul(&a_[k * d], c.raw(), &r.a_[k * d]);
        return r;
    }

    Mat transpose() const {
        Mat r(ctx_, n_);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) ctx_->raw_copy(entry(i, j), r.entry(j, i));
        return r;
    }

    bool is_zero() const {
        for (uint64_t v : a_)
            if (v) return false;
        return true;
    }
    bool is_identity() const { return *this == identity(ctx_, n_); }

    /// Gauss-Jordan inverse; throws singular_matrix_error.
    Mat inverse() const {
        detail::FlatRows aug(ctx_, n_, 2 * n_);
        for (unsigned i = 0; i < n_; ++i) {
            for (unsigned j = 0; j < n_; ++j) ctx_->raw_copy(entry(i, j), aug.at(i, j));
            Fq one(ctx_, 1);
            ctx_->raw_copy(one.raw(), aug.at(i, n_ + i));
        }
        auto pivots = detail::rref(aug);
        if (pivots.size() != n_ || pivots.back() != n_ - 1)
            throw singular_matrix_error("matrix not invertible");
        Mat r(ctx_, n_);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) ctx_->raw_copy(aug.at(i, n_ + j), r.entry(i, j));
        return r;
    }

    Mat pow(mpz_class e) const {
        Mat base = *this;
        if (e < 0) {
            base = base.inverse();
            e = -e;
        }
        Mat r = identity(ctx_, n_);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    Mat frobenius_entrywise() const {
        Mat r(ctx_, n_);
        const unsigned d = ctx_->degree();
        for (size_t k = 0; k < size_t(n_) * n_; ++k)
            ctx_->raw_frobenius(&a_[k * d], &r.a_[k * d]);
        return r;
    }

    /// Embed a prime-field matrix into an extension field context.
    Mat lift(const FieldPtr& ext) const {
        if (ctx_->degree() != 1) throw context_mismatch_error("lift expects a prime-field matrix");
        if (ctx_->ell() != ext->ell()) throw context_mismatch_error("different characteristic");
        Mat r(ext, n_);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) r.set(i, j, Fq(ext, entry(i, j)[0]));
        return r;
    }

    /// Project an extension-field matrix with prime-subfield entries back
    /// down; throws if any entry has a nonzero higher coefficient.
    Mat project_to_prime(const FieldPtr& prime) const {
        if (prime->degree() != 1 || prime->ell() != ctx_->ell())
            throw context_mismatch_error("bad target for project_to_prime");
        Mat r(prime, n_);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) {
                const uint64_t* e = entry(i, j);
                for (unsigned k = 1; k < ctx_->degree(); ++k)
                    if (e[k]) throw error("entry not in the prime subfield");
                r.set(i, j, Fq(prime, e[0]));
            }
        return r;
    }

    std::vector<Fq> apply(const std::vector<Fq>& v) const {
        std::vector<Fq> out;
        out.reserve(n_);
        const unsigned d = ctx_->degree();
        std::vector<uint64_t> acc(d), tmp(d);
        for (unsigned i = 0; i < n_; ++i) {
            ctx_->raw_zero(acc.data());
            for (unsigned j = 0; j < n_; ++j) {
                ctx_->raw_mul(entry(i, j), v[j].raw(), tmp.data());
                ctx_->raw_add(acc.data(), tmp.data(), acc.data());
            }
            Fq x(ctx_, 0);
            ctx_->raw_copy(acc.data(), x.raw());
            out.push_back(x);
        }
        return out;
    }

    Fq trace() const {
        Fq t(ctx_, 0);
        for (unsigned i = 0; i < n_; ++i) t = t + at(i, i);
        return t;
    }

    Fq det() const {
        // triangularize, tracking row swaps and the product of pivots
        Mat w = *this;
        Fq result(ctx_, 1);
        for (unsigned col = 0; col < n_; ++col) {
            unsigned sel = col;
            while (sel < n_ && w.at(sel, col).is_zero()) ++sel;
            if (sel == n_) return Fq(ctx_, 0);
            if (sel != col) {
                for (unsigned j = 0; j < n_; ++j) {
                    Fq t = w.at(sel, j);
                    w.set(sel, j, w.at(col, j));
                    w.set(col, j, t);
                }
                result = -result;
            }
            Fq p = w.at(col, col);
            result = result * p;
            Fq pinv = p.inv();
            for (unsigned i = col + 1; i < n_; ++i) {
                Fq f = w.at(i, col) * pinv;
                if (f.is_zero()) continue;
                for (unsigned j = col; j < n_; ++j) w.set(i, j, w.at(i, j) - f * w.at(col, j));
            }
        }
        return result;
    }

private:
    void check(const Mat& o) const {
        if (n_ != o.n_ || !ctx_->same_as(*o.ctx_))
            throw context_mismatch_error("matrix dimension/context mismatch");
    }

    FieldPtr ctx_;
    unsigned n_;
    std::vector<uint64_t> a_;
};

/// Subspace of the ambient column space, canonically represented by a
/// reduced-row-echelon basis (rows are basis vectors), so equality is
/// coordinate-wise comparison.
class Subspace {
public:
    static Subspace zero(FieldPtr ctx, unsigned n) { return Subspace(std::move(ctx), n); }

    static Subspace span(FieldPtr ctx, unsigned n, const std::vector<std::vector<Fq>>& vectors) {
        detail::FlatRows m(ctx, vectors.size(), n);
        for (size_t i = 0; i < vectors.size(); ++i)
            for (unsigned j = 0; j < n; ++j) m.set(i, j, vectors[i][j]);
        detail::rref(m);
        Subspace s(std::move(ctx), n);
        s.rows_ = std::move(m.a);
        s.r_ = m.rows;
        return s;
    }

    const FieldPtr& ctx() const { return ctx_; }
    unsigned ambient() const { return n_; }
    unsigned dim() const { return static_cast<unsigned>(r_); }

    std::vector<Fq> basis_row(size_t i) const {
        std::vector<Fq> v;
        v.reserve(n_);
        for (unsigned j = 0; j < n_; ++j) {
            Fq x(ctx_, 0);
            ctx_->raw_copy(&rows_[(i * n_ + j) * ctx_->degree()], x.raw());
            v.push_back(x);
        }
        return v;
    }
    std::vector<std::vector<Fq>> basis() const {
        std::vector<std::vector<Fq>> out;
        for (size_t i = 0; i < r_; ++i) out.push_back(basis_row(i));
        return out;
    }

    bool contains(std::vector<Fq> v) const {
        // reduce v against the echelon rows
        for (size_t i = 0; i < r_; ++i) {
            auto row = basis_row(i);
            size_t p = 0;
            while (p < n_ && row[p].is_zero()) ++p;
            if (p == n_) continue;
            if (!v[p].is_zero()) {
                Fq c = v[p];
                for (unsigned j = 0; j < n_; ++j) v[j] = v[j] - c * row[j];
            }
        }
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }
    bool contains(const Subspace& o) const {
        for (size_t i = 0; i < o.r_; ++i)
            if (!contains(o.basis_row(i))) return false;
        return true;
    }

    Subspace sum(const Subspace& o) const {
        auto rows = basis();
        auto more = o.basis();
        rows.insert(rows.end(), more.begin(), more.end());
        return span(ctx_, n_, rows);
    }

    bool operator==(const Subspace& o) const {
        return n_ == o.n_ && r_ == o.r_ && rows_ == o.rows_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    Subspace(FieldPtr ctx, unsigned n) : ctx_(std::move(ctx)), n_(n) {}

    FieldPtr ctx_;
    unsigned n_;
    size_t r_ = 0;
    std::vector<uint64_t> rows_;
};

inline unsigned rank(const Mat& m) {
    detail::FlatRows w(m.ctx(), m.n(), m.n());
    for (unsigned i = 0; i < m.n(); ++i)
        for (unsigned j = 0; j < m.n(); ++j) m.ctx()->raw_copy(m.entry(i, j), w.at(i, j));
    return static_cast<unsigned>(detail::rref(w).size());
}

/// Null space of M (solutions of Mv = 0) as a canonical Subspace.
inline Subspace kernel(const Mat& m) {
    const unsigned n = m.n();
    detail::FlatRows w(m.ctx(), n, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) m.ctx()->raw_copy(m.entry(i, j), w.at(i, j));
    auto pivots = detail::rref(w);
    std::vector<bool> is_pivot(n, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Fq>> basis;
    Fq one(m.ctx(), 1);
    for (unsigned f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Fq> v(n, Fq(m.ctx(), 0));
        v[f] = one;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -w.get(r, f);
        basis.push_back(std::move(v));
    }
    return Subspace::span(m.ctx(), n, basis);
}

// ---------------------------------------------------------------------------
// Univariate polynomials over Fq (coefficients ascending, constant first).
// ---------------------------------------------------------------------------

class Poly {
public:
    explicit Poly(FieldPtr ctx) : ctx_(std::move(ctx)) {}
    Poly(FieldPtr ctx, std::vector<Fq> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
        normalize();
    }
    static Poly zero(const FieldPtr& ctx) { return Poly(ctx); }
    static Poly one(const FieldPtr& ctx) { return Poly(ctx, {Fq(ctx, 1)}); }
    static Poly x(const FieldPtr& ctx) { return Poly(ctx, {Fq(ctx, 0), Fq(ctx, 1)}); }
    /// x - r
    static Poly linear_root(const FieldPtr& ctx, const Fq& r) {
        return Poly(ctx, {-r, Fq(ctx, 1)});
    }

    const FieldPtr& ctx() const { return ctx_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Fq>& coeffs() const { return c_; }
    Fq coeff(size_t i) const { return i < c_.size() ? c_[i] : Fq(ctx_, 0); }
    Fq lead() const { return c_.back(); }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const {
        std::vector<Fq> r(std::max(c_.size(), o.c_.size()), Fq(ctx_, 0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
        return Poly(ctx_, std::move(r));
    }
    Poly operator-(const Poly& o) const {
        std::vector<Fq> r(std::max(c_.size(), o.c_.size()), Fq(ctx_, 0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
        return Poly(ctx_, std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return zero(ctx_);
        std::vector<Fq> r(c_.size() + o.c_.size() - 1, Fq(ctx_, 0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(ctx_, std::move(r));
    }
    Poly operator*(const Fq& s) const {
        std::vector<Fq> r = c_;
        for (auto& x : r) x = x * s;
        return Poly(ctx_, std::move(r));
    }

    /// Division with remainder; divisor need not be monic.
    std::pair<Poly, Poly> divmod(const Poly& g) const {
        if (g.is_zero()) throw division_by_zero_error("polynomial division by zero");
        Poly q = zero(ctx_), r = *this;
        Fq lead_inv = g.lead().inv();
        while (!r.is_zero() && r.degree() >= g.degree()) {
            size_t shift = r.degree() - g.degree();
            Fq f = r.lead() * lead_inv;
            std::vector<Fq> qc(shift + 1, Fq(ctx_, 0));
            qc[shift] = f;
            Poly term(ctx_, std::move(qc));
            q = q + term;
            r = r - term * g;
        }
        return {q, r};
    }
    Poly operator/(const Poly& g) const { return divmod(g).first; }
    Poly operator%(const Poly& g) const { return divmod(g).second; }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * lead().inv();
    }

    Poly derivative() const {
        if (c_.size() <= 1) return zero(ctx_);
        std::vector<Fq> r;
        for (size_t i = 1; i < c_.size(); ++i)
            r.push_back(c_[i] * Fq(ctx_, static_cast<uint64_t>(i % ctx_->ell())));
        return Poly(ctx_, std::move(r));
    }

    Fq eval(const Fq& x) const {
        Fq acc(ctx_, 0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    /// Evaluate at a matrix argument (matrix context must be compatible).
    Mat eval(const Mat& m) const {
        Mat acc(m.ctx(), m.n());
        for (size_t i = c_.size(); i-- > 0;) {
            acc = acc * m;
            acc = acc + Mat::scalar(m.ctx(), m.n(), Fq(m.ctx(), c_[i].coeffs()));
        }
        return acc;
    }

    std::string to_string() const;

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr ctx_;
    std::vector<Fq> c_;
};

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Poly poly_powmod(Poly base, mpz_class e, const Poly& mod) {
    Poly r = Poly::one(base.ctx());
    base = base % mod;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = (r * base) % mod;
        base = (base * base) % mod;
        e >>= 1;
    }
    return r;
}

inline std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        auto cs = c_[i].coeffs();
        if (cs.size() == 1)
            os << cs[0];
        else {
            os << "(";
            for (size_t k = 0; k < cs.size(); ++k) os << (k ? "," : "") << cs[k];
            os << ")";
        }
        if (i == 1) os << "*x";
        if (i > 1) os << "*x^" << i;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Polynomial factorization over Fq (squarefree / distinct-degree /
// Cantor-Zassenhaus).  Degrees here never exceed n = 7, so simplicity wins.
// ---------------------------------------------------------------------------

namespace detail {

inline Fq pth_root(const Fq& a) {
    // inverse of the Frobenius x -> x^l on F_{l^d}: x -> x^(l^(d-1))
    mpz_class e = 1;
    for (unsigned i = 0; i + 1 < a.ctx()->degree(); ++i) e *= static_cast<unsigned long>(a.ctx()->ell());
    return a.pow(e);
}

inline Poly poly_pth_root(const Poly& f) {
    // f has only x^(l*k) terms
    const uint64_t ell = f.ctx()->ell();
    std::vector<Fq> out;
    for (size_t i = 0; i * ell <= static_cast<size_t>(f.degree()); ++i)
        out.push_back(pth_root(f.coeff(i * ell)));
    return Poly(f.ctx(), std::move(out));
}

inline void squarefree_decompose(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) {
    if (f.degree() <= 0) return;
    const uint64_t ell = f.ctx()->ell();
    Poly fp = f.derivative();
    if (fp.is_zero()) {
        squarefree_decompose(poly_pth_root(f), mult * static_cast<unsigned>(ell), out);
        return;
    }
    Poly c = poly_gcd(f, fp);
    Poly w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = poly_gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.emplace_back(z.monic(), mult * i);
        w = y;
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) squarefree_decompose(poly_pth_root(c), mult * static_cast<unsigned>(ell), out);
}

inline void equal_degree_split(const Poly& f, unsigned k, std::mt19937_64& rng,
                               std::vector<Poly>& out) {
    if (f.degree() == static_cast<int>(k)) {
        out.push_back(f.monic());
        return;
    }
    const FieldPtr& ctx = f.ctx();
    mpz_class qk = 1;
    for (unsigned i = 0; i < k * ctx->degree(); ++i) qk *= static_cast<unsigned long>(ctx->ell());
    mpz_class half = (qk - 1) / 2;
    for (;;) {
        std::vector<Fq> rc(f.degree(), Fq(ctx, 0));
        for (auto& c : rc) {
            std::vector<uint64_t> limbs(ctx->degree());
            for (auto& l : limbs) l = rng() % ctx->ell();
            c = Fq(ctx, limbs);
        }
        Poly r(ctx, std::move(rc));
        if (r.is_zero()) continue;
        Poly g = poly_gcd(f, r);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, k, rng, out);
            equal_degree_split(f / g, k, rng, out);
            return;
        }
        Poly s = poly_powmod(r, half, f) - Poly::one(ctx);
        g = poly_gcd(f, s);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, k, rng, out);
            equal_degree_split(f / g, k, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Monic irreducible factors with multiplicities, primes of the coefficient
/// field arbitrary (odd characteristic assumed, which holds throughout).
inline std::vector<std::pair<Poly, unsigned>> factor_poly(const Poly& f_in, std::mt19937_64& rng) {
    std::vector<std::pair<Poly, unsigned>> sf;
    detail::squarefree_decompose(f_in.monic(), 1, sf);
    std::vector<std::pair<Poly, unsigned>> out;
    const FieldPtr& ctx = f_in.ctx();
    mpz_class q = ctx->card();
    for (const auto& [g0, mult] : sf) {
        Poly g = g0;
        Poly h = Poly::x(ctx);
        unsigned k = 1;
        while (g.degree() > 0 && 2 * static_cast<int>(k) <= g.degree()) {
            h = poly_powmod(h, q, g);
            Poly d = poly_gcd(g, h - Poly::x(ctx));
            if (d.degree() > 0) {
                std::vector<Poly> irr;
                detail::equal_degree_split(d, k, rng, irr);
                for (auto& p : irr) out.emplace_back(p, mult);
                g = g / d;
                h = h % g;
            }
            ++k;
        }
        if (g.degree() > 0) out.emplace_back(g.monic(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        // lexicographic on coefficient tuples, constant first
        for (int i = 0; i <= a.first.degree(); ++i) {
            Fq x = a.first.coeff(i), y = b.first.coeff(i);
            if (x != y) return x < y;
        }
        return false;
    });
    return out;
}

/// Roots in the coefficient field with multiplicities, plus a flag telling
/// whether the polynomial splits completely over it.
inline std::pair<std::vector<std::pair<Fq, unsigned>>, bool> poly_roots(const Poly& f,
                                                                        std::mt19937_64& rng) {
    auto factors = factor_poly(f, rng);
    std::vector<std::pair<Fq, unsigned>> roots;
    bool split = true;
    for (const auto& [p, m] : factors) {
        if (p.degree() == 1)
            roots.emplace_back(-p.coeff(0), m);
        else
            split = false;
    }
    return {roots, split};
}

// ---------------------------------------------------------------------------
// Characteristic and minimal polynomials.
// ---------------------------------------------------------------------------

/// Characteristic polynomial det(xI - M), via the division-free Berkowitz
/// recursion (valid over any commutative ring, no splitting assumptions).
inline Poly charpoly(const Mat& m) {
    const unsigned n = m.n();
    const FieldPtr& ctx = m.ctx();
    // C holds coefficients in descending powers, C[0] = 1
    std::vector<Fq> C{Fq(ctx, 1), -m.at(0, 0)};
    for (unsigned r = 1; r < n; ++r) {
        // Toeplitz column t_0 .. t_{r+1}
        std::vector<Fq> t;
        t.push_back(Fq(ctx, 1));
        t.push_back(-m.at(r, r));
        std::vector<Fq> w(r);
        for (unsigned i = 0; i < r; ++i) w[i] = m.at(i, r);  // Cl
        for (unsigned k = 2; k <= r + 1; ++k) {
            Fq s(ctx, 0);
            for (unsigned i = 0; i < r; ++i) s = s + m.at(r, i) * w[i];
            t.push_back(-s);
            if (k <= r) {
                std::vector<Fq> w2(r, Fq(ctx, 0));
                for (unsigned i = 0; i < r; ++i)
                    for (unsigned j = 0; j < r; ++j) w2[i] = w2[i] + m.at(i, j) * w[j];
                w = std::move(w2);
            }
        }
        std::vector<Fq> C2(r + 2, Fq(ctx, 0));
        for (unsigned i = 0; i <= r + 1; ++i)
            for (unsigned j = 0; j < C.size(); ++j)
                if (i >= j && i - j < t.size()) C2[i] = C2[i] + t[i - j] * C[j];
        C = std::move(C2);
    }
    std::reverse(C.begin(), C.end());  // ascending
    return Poly(ctx, std::move(C));
}

/// Minimal polynomial via Krylov spin-up and annihilator lcm.
inline Poly minpoly(const Mat& m) {
    const unsigned n = m.n();
    const FieldPtr& ctx = m.ctx();
    Poly mp = Poly::one(ctx);
    for (unsigned s = 0; s < n; ++s) {
        std::vector<Fq> v(n, Fq(ctx, 0));
        v[s] = Fq(ctx, 1);
        // w = mp(M) v
        std::vector<Fq> w(n, Fq(ctx, 0));
        {
            std::vector<Fq> power = v;
            for (size_t i = 0; i < mp.coeffs().size(); ++i) {
                for (unsigned j = 0; j < n; ++j) w[j] = w[j] + mp.coeff(i) * power[j];
                if (i + 1 < mp.coeffs().size()) power = m.apply(power);
            }
        }
        bool zero = true;
        for (const auto& x : w)
            if (!x.is_zero()) { zero = false; break; }
        if (zero) continue;
        // smallest monic q with q(M) w = 0: grow the Krylov sequence until dependence
        std::vector<std::vector<Fq>> vecs;
        std::vector<Fq> cur = w;
        Poly q = Poly::one(ctx);
        for (unsigned k = 0; k <= n; ++k) {
            vecs.push_back(cur);
            detail::FlatRows test(ctx, vecs.size(), n);
            for (size_t i = 0; i < vecs.size(); ++i)
                for (unsigned j = 0; j < n; ++j) test.set(i, j, vecs[i][j]);
            if (detail::rref(test).size() < vecs.size()) {
                // Krylov columns K: solve K a = -M^k w, annihilator is x^k + sum a_i x^i
                detail::FlatRows aug(ctx, n, vecs.size());
                for (unsigned row = 0; row < n; ++row) {
                    for (size_t colv = 0; colv + 1 < vecs.size(); ++colv)
                        aug.set(row, colv, vecs[colv][row]);
                    aug.set(row, vecs.size() - 1, -vecs.back()[row]);
                }
                auto piv = detail::rref(aug);
                std::vector<Fq> coef(vecs.size() - 1, Fq(ctx, 0));
                for (size_t r2 = 0; r2 < piv.size(); ++r2) {
                    if (piv[r2] + 1 == vecs.size()) throw error("minpoly: inconsistent solve");
                    coef[piv[r2]] = aug.get(r2, vecs.size() - 1);
                }
                std::vector<Fq> qc(coef);
                qc.push_back(Fq(ctx, 1));
                q = Poly(ctx, std::move(qc));
                break;
            }
            cur = m.apply(cur);
        }
        mp = mp * q;
    }
    return mp.monic();
}

inline std::pair<Poly, Poly> char_min_poly(const Mat& m) { return {charpoly(m), minpoly(m)}; }

// ---------------------------------------------------------------------------
// Jordan signatures.
// ---------------------------------------------------------------------------

/// Multiset of (eigenvalue, block length) pairs; a complete conjugacy
/// invariant when the characteristic polynomial splits.
class JcfSignature {
public:
    JcfSignature() = default;
    explicit JcfSignature(std::vector<std::pair<Fq, unsigned>> blocks) : b_(std::move(blocks)) {
        std::sort(b_.begin(), b_.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        });
    }

    const std::vector<std::pair<Fq, unsigned>>& blocks() const { return b_; }
    unsigned total() const {
        unsigned t = 0;
        for (const auto& [e, l] : b_) t += l;
        return t;
    }

    bool operator==(const JcfSignature& o) const { return b_ == o.b_; }
    bool operator!=(const JcfSignature& o) const { return !(*this == o); }

    /// dim of the GL_n centralizer of a matrix with this Jordan form:
    /// sum over pairs of blocks with equal eigenvalue of min(l_i, l_j).
    unsigned centralizer_dim() const {
        unsigned dim = 0;
        for (const auto& [ei, li] : b_)
            for (const auto& [ej, lj] : b_)
                if (ei == ej) dim += std::min(li, lj);
        return dim;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "{";
        for (size_t i = 0; i < b_.size(); ++i) {
            if (i) os << ", ";
            auto cs = b_[i].first.coeffs();
            os << "(";
            for (size_t k = 0; k < cs.size(); ++k) os << (k ? "," : "") << cs[k];
            os << ")^" << b_[i].second;
        }
        os << "}";
        return os.str();
    }

private:
    std::vector<std::pair<Fq, unsigned>> b_;
};

/// Jordan signature via rank profiles: the number of blocks of length >= k
/// for eigenvalue e equals rank((M-e)^(k-1)) - rank((M-e)^k).  Requires the
/// characteristic polynomial to split over the coefficient field.
inline JcfSignature jcf_signature(const Mat& m) {
    std::mt19937_64 rng(0x1234abcd);  // internal to root extraction; result is canonical
    Poly cp = charpoly(m);
    auto [roots, split] = poly_roots(cp, rng);
    if (!split)
        throw non_split_spectrum_error(
            "characteristic polynomial has an irreducible factor of degree > 1");
    const unsigned n = m.n();
    std::vector<std::pair<Fq, unsigned>> blocks;
    for (const auto& [lambda, mult] : roots) {
        Mat N = m - Mat::scalar(m.ctx(), n, lambda);
        std::vector<unsigned> r{n};
        Mat p = Mat::identity(m.ctx(), n);
        unsigned stable = n - mult;
        for (unsigned k = 1; k <= mult + 1; ++k) {
            p = p * N;
            r.push_back(rank(p));
            if (r.back() == stable) break;
        }
        std::vector<unsigned> ge;  // ge[k-1] = number of blocks of length >= k
        for (size_t k = 1; k < r.size(); ++k) ge.push_back(r[k - 1] - r[k]);
        ge.push_back(0);
        for (size_t k = 1; k < ge.size(); ++k) {
            unsigned exact = ge[k - 1] - ge[k];
            for (unsigned c = 0; c < exact; ++c) blocks.emplace_back(lambda, static_cast<unsigned>(k));
        }
    }
    return JcfSignature(std::move(blocks));
}

// ---------------------------------------------------------------------------
// Commutant and invariant forms.
// ---------------------------------------------------------------------------

struct CommutantBasis {
    std::vector<Mat> basis;
    unsigned dim = 0;
};

/// Basis of the algebra {X : XM = MX for all M in gens}.
inline CommutantBasis commutant(const std::vector<Mat>& gens, const FieldPtr& ctx_hint = nullptr,
                                unsigned n_hint = 0) {
    FieldPtr ctx = gens.empty() ? ctx_hint : gens.front().ctx();
    unsigned n = gens.empty() ? n_hint : gens.front().n();
    if (!ctx) throw error("commutant of empty generator list needs a context hint");
    const size_t vars = size_t(n) * n;
    detail::FlatRows sys(ctx, gens.size() * vars, vars);
    size_t row = 0;
    for (const auto& g : gens) {
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                // (XG - GX)_{ij} = sum_b X_{ib} G_{bj} - sum_a G_{ia} X_{aj}
                for (unsigned b = 0; b < n; ++b) {
                    Fq c = g.at(b, j);
                    Fq prev = sys.get(row, size_t(i) * n + b);
                    sys.set(row, size_t(i) * n + b, prev + c);
                }
                for (unsigned a = 0; a < n; ++a) {
                    Fq c = g.at(i, a);
                    Fq prev = sys.get(row, size_t(a) * n + j);
                    sys.set(row, size_t(a) * n + j, prev - c);
                }
                ++row;
            }
    }
    auto pivots = detail::rref(sys);
    std::vector<bool> is_pivot(vars, false);
    for (size_t p : pivots) is_pivot[p] = true;
    CommutantBasis out;
    for (size_t f = 0; f < vars; ++f) {
        if (is_pivot[f]) continue;
        Mat x(ctx, n);
        x.set(static_cast<unsigned>(f / n), static_cast<unsigned>(f % n), Fq(ctx, 1));
        for (size_t r2 = 0; r2 < pivots.size(); ++r2) {
            Fq c = -sys.get(r2, f);
            x.set(static_cast<unsigned>(pivots[r2] / n), static_cast<unsigned>(pivots[r2] % n), c);
        }
        out.basis.push_back(std::move(x));
    }
    out.dim = static_cast<unsigned>(out.basis.size());
    return out;
}

enum class FormKind { sym2, alt3 };

/// Canonical coordinate order: pairs i <= j (sym2) resp. triples i < j < k
/// (alt3), lexicographic.
inline std::vector<std::array<unsigned, 2>> sym2_index(unsigned n) {
    std::vector<std::array<unsigned, 2>> out;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) out.push_back({i, j});
    return out;
}
inline std::vector<std::array<unsigned, 3>> alt3_index(unsigned n) {
    std::vector<std::array<unsigned, 3>> out;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i + 1; j < n; ++j)
            for (unsigned k = j + 1; k < n; ++k) out.push_back({i, j, k});
    return out;
}

namespace detail {

inline Fq det3(const Mat& g, const std::array<unsigned, 3>& r, const std::array<unsigned, 3>& c) {
    Fq a = g.at(r[0], c[0]), b = g.at(r[0], c[1]), cc = g.at(r[0], c[2]);
    Fq d = g.at(r[1], c[0]), e = g.at(r[1], c[1]), f = g.at(r[1], c[2]);
    Fq h = g.at(r[2], c[0]), i = g.at(r[2], c[1]), j = g.at(r[2], c[2]);
    return a * (e * j - f * i) - b * (d * j - f * h) + cc * (d * i - e * h);
}

} // namespace detail

struct FormBasis {
    FormKind kind;
    unsigned n = 0;
    /// Each row is one invariant form in canonical coordinates, first
    /// nonzero coordinate scaled to 1 (reduced echelon rows).
    std::vector<std::vector<Fq>> basis;
    unsigned dim() const { return static_cast<unsigned>(basis.size()); }
};

/// Solve the linear invariance system F(g.,g.[,g.]) = F for all generators.
inline FormBasis invariant_forms(const std::vector<Mat>& gens, FormKind kind) {
    if (gens.empty()) throw error("invariant_forms needs at least one generator");
    const FieldPtr& ctx = gens.front().ctx();
    const unsigned n = gens.front().n();
    size_t vars, eqs_per_gen;
    if (kind == FormKind::sym2)
        vars = eqs_per_gen = sym2_index(n).size();
    else
        vars = eqs_per_gen = alt3_index(n).size();

    detail::FlatRows sys(ctx, gens.size() * eqs_per_gen, vars);
    size_t row = 0;
    if (kind == FormKind::sym2) {
        auto idx = sym2_index(n);
        for (const auto& g : gens) {
            for (size_t e = 0; e < idx.size(); ++e) {
                auto [i, j] = std::pair(idx[e][0], idx[e][1]);
                for (size_t v = 0; v < idx.size(); ++v) {
                    auto [a, b] = std::pair(idx[v][0], idx[v][1]);
                    Fq c = (a == b) ? g.at(a, i) * g.at(a, j)
                                    : g.at(a, i) * g.at(b, j) + g.at(b, i) * g.at(a, j);
                    if (v == e) c = c - Fq(ctx, 1);
                    sys.set(row, v, c);
                }
                ++row;
            }
        }
    } else {
        auto idx = alt3_index(n);
        for (const auto& g : gens) {
            for (size_t e = 0; e < idx.size(); ++e) {
                for (size_t v = 0; v < idx.size(); ++v) {
                    Fq c = detail::det3(g, idx[v], idx[e]);
                    if (v == e) c = c - Fq(ctx, 1);
                    sys.set(row, v, c);
                }
                ++row;
            }
        }
    }
    auto pivots = detail::rref(sys);
    std::vector<bool> is_pivot(vars, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Fq>> kernel_rows;
    for (size_t f = 0; f < vars; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Fq> v(vars, Fq(ctx, 0));
        v[f] = Fq(ctx, 1);
        for (size_t r2 = 0; r2 < pivots.size(); ++r2) v[pivots[r2]] = -sys.get(r2, f);
        kernel_rows.push_back(std::move(v));
    }
    auto canon = Subspace::span(ctx, static_cast<unsigned>(vars), kernel_rows);
    FormBasis out{kind, n, {}};
    for (unsigned i = 0; i < canon.dim(); ++i) out.basis.push_back(canon.basis_row(i));
    return out;
}

/// Materialize a sym2 coordinate vector as the symmetric Gram matrix.
inline Mat sym2_matrix(const FieldPtr& ctx, unsigned n, const std::vector<Fq>& coords) {
    Mat b(ctx, n);
    auto idx = sym2_index(n);
    for (size_t v = 0; v < idx.size(); ++v) {
        b.set(idx[v][0], idx[v][1], coords[v]);
        b.set(idx[v][1], idx[v][0], coords[v]);
    }
    return b;
}

/// Evaluate an alt3 coordinate vector on three vectors (the alternating
/// extension of the i<j<k coordinates).
inline Fq alt3_eval(const FieldPtr& ctx, unsigned n, const std::vector<Fq>& coords,
                    const std::vector<Fq>& x, const std::vector<Fq>& y, const std::vector<Fq>& z) {
    auto idx = alt3_index(n);
    Fq acc(ctx, 0);
    for (size_t v = 0; v < idx.size(); ++v) {
        auto [i, j, k] = std::tuple(idx[v][0], idx[v][1], idx[v][2]);
        Fq d = x[i] * (y[j] * z[k] - y[k] * z[j]) - x[j] * (y[i] * z[k] - y[k] * z[i]) +
               x[k] * (y[i] * z[j] - y[j] * z[i]);
        acc = acc + coords[v] * d;
    }
    return acc;
}

/// Pull back an alt3 coordinate vector along g: (g.T)_{ijk} = T(g e_i, g e_j, g e_k).
inline std::vector<Fq> alt3_transform(const Mat& g, const std::vector<Fq>& coords) {
    auto idx = alt3_index(g.n());
    std::vector<Fq> out(coords.size(), Fq(g.ctx(), 0));
    for (size_t e = 0; e < idx.size(); ++e) {
        Fq acc(g.ctx(), 0);
        for (size_t v = 0; v < idx.size(); ++v)
            acc = acc + coords[v] * detail::det3(g, idx[v], idx[e]);
        out[e] = acc;
    }
    return out;
}

} // namespace g2cert

#endif
