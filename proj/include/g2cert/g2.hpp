#ifndef G2CERT_G2_HPP
#define G2CERT_G2_HPP

// Explicit construction of G2(l) inside GL_7(F_l) from the standard
// root-subgroup generators, together with its invariant symmetric bilinear
// form b and alternating trilinear (Dickson) form f.  Membership is the
// exact stabilizer test "preserves b and f"; the order formula is
// cross-validated by exhaustive closure enumeration at l = 3.

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "g2cert/linalg.hpp"
#include "g2cert/numt.hpp"

namespace g2cert {

struct GroupCtx;
using GroupPtr = std::shared_ptr<const GroupCtx>;

/// G2(l) as a matrix group datum: generators, invariant forms, order.
/// Immutable after build_group.
///
/// The opposite-root generators x_minus_alpha, x_minus_beta are the
/// exponentials of the -alpha, -beta root vectors of the stabilizer Lie
/// algebra in this basis.  x_minus_beta is the literal transpose of x_beta;
/// x_minus_alpha is the transpose conjugated by diag(1,1,1,2,1,1,1) (the
/// contravariant normalization of the basis).  The literal transpose of
/// x_alpha does not preserve the invariant forms and generates a group
/// strictly larger than G2(l).
struct GroupCtx {
    FieldPtr ctx;  // prime field F_l
    uint64_t ell = 0;

    Mat x_alpha, x_beta, x_minus_alpha, x_minus_beta;
    uint64_t primitive_root = 0;  // least primitive root mod l, the torus sampler parameter

    Mat bilinear;                  // b, normalized so its first sym2 coordinate is 1
    std::vector<Fq> trilinear;     // f, 35 alt3 coordinates, first nonzero = 1
    std::vector<Fq> bilinear_coords;  // the 28 sym2 coordinates of b

    mpz_class order;               // l^6 (l^6 - 1)(l^2 - 1)
    Factorization order_factorization;

    // raw prime-field copies for the fast membership test
    std::array<uint64_t, 49> b_raw{};
    std::array<uint64_t, 35> f_raw{};

    GroupCtx(FieldPtr c, Mat xa, Mat xb, Mat xma, Mat xmb)
        : ctx(std::move(c)),
          x_alpha(std::move(xa)),
          x_beta(std::move(xb)),
          x_minus_alpha(std::move(xma)),
          x_minus_beta(std::move(xmb)),
          bilinear(ctx, 7) {}

    std::vector<Mat> generators() const { return {x_alpha, x_beta, x_minus_alpha, x_minus_beta}; }
};

/// diag(t1, t2, t1/t2, 1, t2/t1, 1/t2, 1/t1).
inline Mat torus_element(const GroupCtx& g, uint64_t t1, uint64_t t2) {
    t1 %= g.ell;
    t2 %= g.ell;
    if (t1 == 0 || t2 == 0) throw zero_torus_parameter_error("torus parameters must be nonzero");
    Fq a(g.ctx, t1), b(g.ctx, t2);
    std::vector<Fq> d{a, b, a * b.inv(), Fq(g.ctx, 1), a.inv() * b, b.inv(), a.inv()};
    return Mat::diagonal(g.ctx, d);
}

namespace detail {

inline Mat g2_x_alpha(const FieldPtr& ctx) {
    return Mat::from_int_rows(ctx, {{1, 1, 0, 0, 0, 0, 0},
                                    {0, 1, 0, 0, 0, 0, 0},
                                    {0, 0, 1, 1, -1, 0, 0},
                                    {0, 0, 0, 1, -2, 0, 0},
                                    {0, 0, 0, 0, 1, 0, 0},
                                    {0, 0, 0, 0, 0, 1, -1},
                                    {0, 0, 0, 0, 0, 0, 1}});
}

inline Mat g2_x_beta(const FieldPtr& ctx) {
    return Mat::from_int_rows(ctx, {{1, 0, 0, 0, 0, 0, 0},
                                    {0, 1, 1, 0, 0, 0, 0},
                                    {0, 0, 1, 0, 0, 0, 0},
                                    {0, 0, 0, 1, 0, 0, 0},
                                    {0, 0, 0, 0, 1, -1, 0},
                                    {0, 0, 0, 0, 0, 1, 0},
                                    {0, 0, 0, 0, 0, 0, 1}});
}

/// exp of the -alpha root vector: diag(1,1,1,2,1,1,1)-conjugate of
/// x_alpha^tr.
inline Mat g2_x_minus_alpha(const FieldPtr& ctx) {
    return Mat::from_int_rows(ctx, {{1, 0, 0, 0, 0, 0, 0},
                                    {1, 1, 0, 0, 0, 0, 0},
                                    {0, 0, 1, 0, 0, 0, 0},
                                    {0, 0, 2, 1, 0, 0, 0},
                                    {0, 0, -1, -1, 1, 0, 0},
                                    {0, 0, 0, 0, 0, 1, 0},
                                    {0, 0, 0, 0, 0, -1, 1}});
}

} // namespace detail

/// Instantiate G2(l).  l = 3 is admitted (enumeration oracle) although the
/// monodromy layer never uses it.
inline GroupPtr build_group(uint64_t ell) {
    if (ell == 2 || ell == 7)
        throw unsupported_characteristic_error("G2 layer requires l not in {2, 7}");
    FieldPtr ctx = prime_field(ell);

    Mat xa = detail::g2_x_alpha(ctx);
    Mat xb = detail::g2_x_beta(ctx);
    auto g = std::make_shared<GroupCtx>(ctx, xa, xb, detail::g2_x_minus_alpha(ctx), xb.transpose());
    g->ell = ell;
    g->primitive_root = numt::least_primitive_root(ell);

    std::vector<Mat> solve_gens = g->generators();
    solve_gens.push_back(torus_element(*g, g->primitive_root, 1));
    solve_gens.push_back(torus_element(*g, 1, g->primitive_root));

    FormBasis sym2 = invariant_forms(solve_gens, FormKind::sym2);
    FormBasis alt3 = invariant_forms(solve_gens, FormKind::alt3);
    if (sym2.dim() != 1 || alt3.dim() != 1)
        throw form_space_error("invariant form spaces have dims " + std::to_string(sym2.dim()) +
                               ", " + std::to_string(alt3.dim()) + " (expected 1, 1)");
    g->bilinear_coords = sym2.basis[0];
    g->bilinear = sym2_matrix(ctx, 7, sym2.basis[0]);
    g->trilinear = alt3.basis[0];
    if (rank(g->bilinear) != 7) throw form_space_error("bilinear form is degenerate");

    g->order = numt::g2_order(ell);
    g->order_factorization = numt::factor(g->order);

    for (unsigned i = 0; i < 7; ++i)
        for (unsigned j = 0; j < 7; ++j) g->b_raw[i * 7 + j] = g->bilinear.entry(i, j)[0];
    for (unsigned v = 0; v < 35; ++v) g->f_raw[v] = g->trilinear[v].raw()[0];
    return g;
}

/// Exact membership: M preserves both b and f.  (Nondegeneracy of b forces
/// invertibility, so no separate check is needed.)
inline bool is_member(const GroupCtx& g, const Mat& m) {
    if (!m.ctx()->same_as(*g.ctx) || m.n() != 7)
        throw context_mismatch_error("is_member expects a 7x7 matrix over the group's prime field");
    const FieldCtx& F = *g.ctx;
    auto e = [&](unsigned i, unsigned j) { return m.entry(i, j)[0]; };

    // M^T b M == b
    uint64_t tb[49];
    for (unsigned i = 0; i < 7; ++i)
        for (unsigned j = 0; j < 7; ++j) {
            uint64_t acc = 0;
            for (unsigned k = 0; k < 7; ++k) acc = F.addm(acc, F.mulm(e(k, i), g.b_raw[k * 7 + j]));
            tb[i * 7 + j] = acc;
        }
    for (unsigned i = 0; i < 7; ++i)
        for (unsigned j = 0; j < 7; ++j) {
            uint64_t acc = 0;
            for (unsigned k = 0; k < 7; ++k) acc = F.addm(acc, F.mulm(tb[i * 7 + k], e(k, j)));
            if (acc != g.b_raw[i * 7 + j]) return false;
        }

    // f(M., M., M.) == f, coordinate by coordinate via 3x3 minors
    static const auto idx = alt3_index(7);
    for (size_t t = 0; t < idx.size(); ++t) {
        uint64_t acc = 0;
        for (size_t v = 0; v < idx.size(); ++v) {
            if (!g.f_raw[v]) continue;
            const auto& r = idx[v];
            const auto& c = idx[t];
            uint64_t d0 = F.subm(F.mulm(e(r[1], c[1]), e(r[2], c[2])),
                                 F.mulm(e(r[1], c[2]), e(r[2], c[1])));
            uint64_t d1 = F.subm(F.mulm(e(r[1], c[0]), e(r[2], c[2])),
                                 F.mulm(e(r[1], c[2]), e(r[2], c[0])));
            uint64_t d2 = F.subm(F.mulm(e(r[1], c[0]), e(r[2], c[1])),
                                 F.mulm(e(r[1], c[1]), e(r[2], c[0])));
            uint64_t det = F.subm(F.mulm(e(r[0], c[0]), d0), F.mulm(e(r[0], c[1]), d1));
            det = F.addm(det, F.mulm(e(r[0], c[2]), d2));
            acc = F.addm(acc, F.mulm(g.f_raw[v], det));
        }
        if (acc != g.f_raw[t]) return false;
    }
    return true;
}

/// Product-replacement random walk over the group.  Ten slots seeded from
/// the generator set (root generators plus the two torus samplers), 50
/// burn-in multiplications, one replacement step per sample.  Inverses are
/// tracked alongside so no elimination happens in the sampling loop.
class ElementSampler {
public:
    ElementSampler(GroupPtr g, uint64_t seed) : g_(std::move(g)), rng_(seed) {
        std::vector<Mat> gens = g_->generators();
        gens.push_back(torus_element(*g_, g_->primitive_root, 1));
        gens.push_back(torus_element(*g_, 1, g_->primitive_root));
        for (size_t i = 0; i < kSlots; ++i) {
            const Mat& m = gens[i % gens.size()];
            slots_.emplace_back(m, m.inverse());
        }
        for (int i = 0; i < 50; ++i) step();
    }

    const GroupCtx& group() const { return *g_; }
    std::mt19937_64& rng() { return rng_; }

    /// One replacement step; returns the updated slot.
    const std::pair<Mat, Mat>& next_with_inverse() {
        step();
        return slots_[last_];
    }
    Mat next() { return next_with_inverse().first; }

private:
    static constexpr size_t kSlots = 10;

    size_t bounded(size_t n) {
        // unbiased rejection sampling; keeps the stream portable
        uint64_t mask = ~uint64_t{0};
        uint64_t limit = (mask / n) * n;
        uint64_t v;
        do {
            v = rng_();
        } while (v >= limit);
        return static_cast<size_t>(v % n);
    }

    void step() {
        size_t i = bounded(kSlots);
        size_t j = bounded(kSlots - 1);
        if (j >= i) ++j;
        bool invert = bounded(2) == 1;
        const auto& [mj, mj_inv] = slots_[j];
        auto& [mi, mi_inv] = slots_[i];
        if (invert) {
            mi = mi * mj_inv;
            mi_inv = mj * mi_inv;
        } else {
            mi = mi * mj;
            mi_inv = mj_inv * mi_inv;
        }
        last_ = i;
    }

    GroupPtr g_;
    std::mt19937_64 rng_;
    std::vector<std::pair<Mat, Mat>> slots_;
    size_t last_ = 0;
};

inline Mat random_element(ElementSampler& sampler) { return sampler.next(); }

/// Exact order of a member, via the factored group order.
inline mpz_class element_order(const GroupCtx& g, const Mat& m) {
    mpz_class o = g.order;
    for (const auto& [p, e] : g.order_factorization) {
        for (unsigned k = 0; k < e; ++k) {
            mpz_class cand = o / p;
            if (m.pow(cand).is_identity())
                o = cand;
            else
                break;
        }
    }
    return o;
}

// ---------------------------------------------------------------------------
// Exhaustive closure enumeration (the whole-group oracle at l = 3).
// ---------------------------------------------------------------------------

namespace detail {

struct Key128 {
    uint64_t lo = 0, hi = 0;
    bool operator==(const Key128& o) const { return lo == o.lo && hi == o.hi; }
};
struct Key128Hash {
    size_t operator()(const Key128& k) const {
        uint64_t x = k.lo ^ (k.hi * 0x9E3779B97F4A7C15ull);
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDull;
        x ^= x >> 33;
        x *= 0xC4CEB9FE1A85EC53ull;
        x ^= x >> 33;
        return static_cast<size_t>(x);
    }
};

inline Key128 encode49(const uint8_t* m, uint64_t ell) {
    Key128 k;
    for (int i = 24; i >= 0; --i) k.lo = k.lo * ell + m[i];
    for (int i = 48; i >= 25; --i) k.hi = k.hi * ell + m[i];
    return k;
}
inline void decode49(Key128 k, uint64_t ell, uint8_t* m) {
    for (int i = 0; i < 25; ++i) {
        m[i] = static_cast<uint8_t>(k.lo % ell);
        k.lo /= ell;
    }
    for (int i = 25; i < 49; ++i) {
        m[i] = static_cast<uint8_t>(k.hi % ell);
        k.hi /= ell;
    }
}

} // namespace detail

/// Breadth-first closure of a generating set under multiplication, elements
/// keyed by the radix-l encoding of their 49 entries.  Guarded to l <= 3.
inline uint64_t closure_order(const FieldPtr& ctx, const std::vector<Mat>& gens) {
    const uint64_t ell = ctx->ell();
    if (ell > 3) throw resource_guard_error("closure enumeration is guarded to l <= 3");
    if (gens.empty()) return 0;

    std::vector<std::array<uint8_t, 49>> gen_bytes;
    for (const auto& g : gens) {
        std::array<uint8_t, 49> b{};
        for (unsigned i = 0; i < 7; ++i)
            for (unsigned j = 0; j < 7; ++j) b[i * 7 + j] = static_cast<uint8_t>(g.entry(i, j)[0]);
        gen_bytes.push_back(b);
    }

    std::unordered_set<detail::Key128, detail::Key128Hash> visited;
    visited.reserve(1u << 23);
    std::vector<detail::Key128> queue;
    queue.reserve(1u << 22);
    for (const auto& b : gen_bytes) {
        detail::Key128 k = detail::encode49(b.data(), ell);
        if (visited.insert(k).second) queue.push_back(k);
    }

    uint8_t m[49], prod[49];
    for (size_t head = 0; head < queue.size(); ++head) {
        detail::decode49(queue[head], ell, m);
        for (const auto& g : gen_bytes) {
            for (unsigned i = 0; i < 7; ++i) {
                uint32_t acc[7] = {0, 0, 0, 0, 0, 0, 0};
                for (unsigned k = 0; k < 7; ++k) {
                    uint32_t a = m[i * 7 + k];
                    if (!a) continue;
                    for (unsigned j = 0; j < 7; ++j) acc[j] += a * g[k * 7 + j];
                }
                for (unsigned j = 0; j < 7; ++j)
                    prod[i * 7 + j] = static_cast<uint8_t>(acc[j] % ell);
            }
            detail::Key128 k = detail::encode49(prod, ell);
            if (visited.insert(k).second) queue.push_back(k);
        }
    }
    return visited.size();
}

/// Exact group order by closure; the oracle for the order formula.
inline uint64_t enumerate(const GroupCtx& g) {
    if (g.ell != 3) throw resource_guard_error("enumerate is restricted to l = 3");
    return closure_order(g.ctx, g.generators());
}

// ---------------------------------------------------------------------------
// Parabolic flag stabilization.
// ---------------------------------------------------------------------------

struct FlagCheck {
    std::string generator;
    std::string flag;
    bool pass = false;
};
struct ParabolicReport {
    std::vector<FlagCheck> rows;
    bool all_pass = true;
};

namespace detail {

/// M stabilizes span{e_1, ..., e_k} iff the lower-left block vanishes.
inline bool stabilizes_coordinate_flag(const Mat& m, unsigned k) {
    for (unsigned i = k; i < m.n(); ++i)
        for (unsigned j = 0; j < k; ++j)
            if (!m.ctx()->raw_is_zero(m.entry(i, j))) return false;
    return true;
}

} // namespace detail

/// P_alpha = <T, x_alpha, x_minus_alpha, x_beta> must stabilize
/// span{e1, e2}; P_beta = <T, x_alpha, x_beta, x_minus_beta> must stabilize
/// span{e1, e2, e3}.
inline ParabolicReport parabolic_flags(const GroupCtx& g) {
    ParabolicReport rep;
    Mat t1 = torus_element(g, g.primitive_root, 1);
    Mat t2 = torus_element(g, 1, g.primitive_root);
    auto add = [&](const std::string& name, const Mat& m, unsigned k, const std::string& flag) {
        bool ok = detail::stabilizes_coordinate_flag(m, k);
        rep.rows.push_back({name, flag, ok});
        rep.all_pass &= ok;
    };
    const std::string f2 = "span{e1,e2}", f3 = "span{e1,e2,e3}";
    add("torus(g,1)", t1, 2, f2);
    add("torus(1,g)", t2, 2, f2);
    add("x_alpha", g.x_alpha, 2, f2);
    add("x_minus_alpha", g.x_minus_alpha, 2, f2);
    add("x_beta", g.x_beta, 2, f2);
    add("torus(g,1)", t1, 3, f3);
    add("torus(1,g)", t2, 3, f3);
    add("x_alpha", g.x_alpha, 3, f3);
    add("x_beta", g.x_beta, 3, f3);
    add("x_minus_beta", g.x_minus_beta, 3, f3);
    return rep;
}

// ---------------------------------------------------------------------------
// Sym^6 of GL_2: the 7-dimensional module used in the PGL_2 exclusion.
// ---------------------------------------------------------------------------

/// Action of [[a,b],[c,d]] on homogeneous sextic forms, monomial basis
/// X^6, X^5 Y, ..., Y^6: the substitution X^i Y^j -> (aX + cY)^i (bX + dY)^j
/// (transpose substitution, which makes the map a homomorphism; the variant
/// with b and c swapped is the same map composed with transposition and has
/// identical Jordan data).
inline Mat sym6_rep(const FieldPtr& ctx, const Fq& a, const Fq& b, const Fq& c, const Fq& d) {
    if ((a * d - b * c).is_zero()) throw singular_input_error("sym6_rep needs an invertible input");
    // binomial table mod l
    uint64_t binom[7][7] = {};
    for (int i = 0; i <= 6; ++i) {
        binom[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            binom[i][j] = (binom[i - 1][j - 1] + binom[i - 1][j]) % ctx->ell();
    }
    Mat out(ctx, 7);
    for (unsigned col = 0; col <= 6; ++col) {
        unsigned i = 6 - col, j = col;  // X^i Y^j
        // u[k] = coeff of Y^k in (aX+cY)^i; v[m] = coeff of Y^m in (bX+dY)^j
        std::vector<Fq> u(i + 1, Fq(ctx, 0)), v(j + 1, Fq(ctx, 0));
        for (unsigned k = 0; k <= i; ++k)
            u[k] = Fq(ctx, binom[i][k]) * a.pow(static_cast<int64_t>(i - k)) *
                   c.pow(static_cast<int64_t>(k));
        for (unsigned m2 = 0; m2 <= j; ++m2)
            v[m2] = Fq(ctx, binom[j][m2]) * b.pow(static_cast<int64_t>(j - m2)) *
                    d.pow(static_cast<int64_t>(m2));
        for (unsigned k = 0; k <= i; ++k)
            for (unsigned m2 = 0; m2 <= j; ++m2) {
                unsigned row = k + m2;  // total Y-degree
                out.set(row, col, out.at(row, col) + u[k] * v[m2]);
            }
    }
    return out;
}

inline Mat sym6_rep(const FieldPtr& ctx, const std::array<std::array<int64_t, 2>, 2>& a) {
    return sym6_rep(ctx, Fq::from_int(ctx, a[0][0]), Fq::from_int(ctx, a[0][1]),
                    Fq::from_int(ctx, a[1][0]), Fq::from_int(ctx, a[1][1]));
}

} // namespace g2cert

#endif
