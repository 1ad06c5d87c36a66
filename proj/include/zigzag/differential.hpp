#pragma once

#include "chain.hpp"

namespace zz {

// Residual sign choices left open by the written definitions. The default
// (all false) is the convention fixed by the sign search; every flag names the
// alternative reading it switches to.
struct Signs {
    bool beta_literal = false;         // first entry of a pass counts its own endpoint, not the previous one
    bool b_last_negated = false;       // extra -1 on the face t_n = 1
    bool derivation_unshifted = false; // derivation sign (-1)^{|x|} instead of (-1)^{|x|+n}
    bool shuffle_plain = false;        // shuffle sign |x| m + N(sigma) (no reversal on zags)
    bool bracket_anti = false;         // interior: dx + A x + (-1)^{|x|} x A
    bool nabla_r_plus = false;         // first entry: dx + (-1)^{|x|} x A
    bool nabla_l_minus = false;        // last entry: dx - A x
    bool c_zag_same = false;           // curvature inserted on a zag keeps the zig sign
    bool c_zag_literal = false;        // curvature on a zag placed by plain sigma (mirrored column)
    bool rect_horizontal_no_m = false; // horizontal curvature sign without the (-1)^m
    bool rect_vertical_flip = false;   // vertical curvature sign (-1)^{m+j} for 0-based gap j

    friend bool operator==(const Signs&, const Signs&) = default;
};

inline std::vector<std::pair<std::string, bool Signs::*>> sign_flags()
{
    return {{"beta", &Signs::beta_literal},
            {"b-last", &Signs::b_last_negated},
            {"derivation", &Signs::derivation_unshifted},
            {"shuffle", &Signs::shuffle_plain},
            {"bracket", &Signs::bracket_anti},
            {"nabla-R", &Signs::nabla_r_plus},
            {"nabla-L", &Signs::nabla_l_minus},
            {"c-zag-sign", &Signs::c_zag_same},
            {"c-zag-place", &Signs::c_zag_literal},
            {"rect-horizontal", &Signs::rect_horizontal_no_m},
            {"rect-vertical", &Signs::rect_vertical_flip}};
}

inline std::string describe(const Signs& s)
{
    std::string out;
    for (auto& [name, flag] : sign_flags())
        if (s.*flag)
            out += (out.empty() ? "" : ",") + name;
    return out.empty() ? "frozen" : out;
}

// connection data for the curved differentials
template <class Alg>
struct CurvedContext {
    using Elem = typename Alg::Elem;
    Alg alg;
    PolyMatrixForm A;
    PolyMatrixForm R;
    Terms<Elem> a_terms;
    Terms<Elem> r_terms;
    Signs signs;

    CurvedContext(const Alg& alg_, const PolyMatrixForm& A_, const Signs& s = {})
        : alg(alg_), A(A_), R(curvature(A_)), a_terms(alg_.expand(A_)), r_terms(alg_.expand(R)), signs(s)
    {
        if (A.dim() != alg.dim || A.size() != alg.size)
            throw std::invalid_argument("connection does not match the algebra");
    }

    bool flat() const { return R.is_zero(); }
};

namespace detail {

template <class Alg>
using W = Word<typename Alg::Elem>;
template <class Alg>
using C = Chain<typename Alg::Elem>;

template <class Alg, class F>
C<Alg> map_words(const C<Alg>& in, F&& f)
{
    C<Alg> out;
    for (auto& [w, c] : in)
        f(w, c, out);
    return out;
}

inline int fiber_dim(int n, int blocks) { return n + std::max(0, blocks - 2); }

// d (or the covariant version when `conn` is given) applied entry by entry with
// the sign (-1)^{fiber + beta}
template <class Alg>
void nabla_word(const Alg& alg, const Terms<typename Alg::Elem>* conn, const Signs& s, const W<Alg>& w,
                const Rational& c, C<Alg>& out)
{
    using E = typename Alg::Elem;
    int N = int(w.e.size());
    int fd = fiber_dim(w.n, w.blocks());
    std::vector<int> deg(N);
    for (int j = 0; j < N; ++j)
        deg[j] = alg.degree(w.e[j]);
    bool literal = s.beta_literal && w.blocks() == 1 && w.n >= 1;
    int beta = 0;
    E prod;
    for (int j = 0; j < N; ++j) {
        int b = beta;
        if (literal) {
            // first interior entry of pass i sits at 1 + (i-1)(n+1)
            int off = j - 1;
            if (j >= 1 && off % (w.n + 1) == 0) {
                int i = off / (w.n + 1) + 1;
                if (i >= 2)
                    b -= deg[j - 1];
                b += deg[endpoint_index(0, w.n, i)];
            }
        }
        Rational base = c * sign_of(fd + b);
        auto emit = [&](const Rational& k, const E& x) {
            W<Alg> v = w;
            v.e[j] = x;
            out.add(std::move(v), base * k);
        };
        const E& x = w.e[j];
        alg.d(x, emit);
        if (conn && N > 1) {
            bool first = j == 0, last = j == N - 1;
            for (auto& [ca, a] : *conn) {
                if (!first) {
                    // A x
                    int sg = alg.mul(a, x, prod);
                    if (sg) {
                        int extra = (last && s.nabla_l_minus) ? -1 : 1;
                        emit(ca * (sg * extra), prod);
                    }
                }
                if (!last) {
                    // -(-1)^{|x|} x A
                    int sg = alg.mul(x, a, prod);
                    if (sg) {
                        bool plus = first ? s.nabla_r_plus : s.bracket_anti;
                        int k = plus ? sign_of(deg[j]) : -sign_of(deg[j]);
                        emit(ca * (sg * k), prod);
                    }
                }
            }
        }
        beta += deg[j];
    }
}

// column collapse: faces t_p = t_{p+1}, with t_0 = 0 and t_{n+1} = 1
template <class Alg>
void b_word(const Alg& alg, const Signs& s, const W<Alg>& w, const Rational& c, C<Alg>& out)
{
    using E = typename Alg::Elem;
    if (w.n == 0)
        return;
    int fd = fiber_dim(w.n, w.blocks());
    auto slots = layout(w.n, w.strands);
    E tmp;
    for (int p = 0; p <= w.n; ++p) {
        int sg = sign_of(fd + p);
        if (s.b_last_negated && p == w.n && w.blocks() == 1)
            sg = -sg;
        W<Alg> v{w.n - 1, w.strands, {}};
        v.e.reserve(w.e.size());
        int prev_block = -1, prev_col = -1;
        bool dead = false;
        for (size_t j = 0; j < w.e.size() && !dead; ++j) {
            int col = slots[j].col <= p ? slots[j].col : slots[j].col - 1;
            if (slots[j].block == prev_block && col == prev_col) {
                int k = alg.mul(v.e.back(), w.e[j], tmp);
                if (!k) {
                    dead = true;
                    break;
                }
                sg *= k;
                v.e.back() = tmp;
            } else {
                v.e.push_back(w.e[j]);
            }
            prev_block = slots[j].block;
            prev_col = col;
        }
        if (!dead)
            out.add(std::move(v), c * sg);
    }
}

// builds the word with one new column at geometric gap `gap` (1..n+1) in every pass;
// pass (rb, ri) receives `special` at column `special_gap`, every other pass the unit
template <class Alg>
W<Alg> insert_column(const Alg& alg, const W<Alg>& w, int rb, int ri, int special_gap, int gap,
                     const typename Alg::Elem& special)
{
    int n = w.n;
    auto starts = block_starts(n, w.strands);
    W<Alg> v{n + 1, w.strands, {}};
    v.e.reserve(w.e.size() + w.strands.size());
    auto unit = alg.unit();
    for (int b = 0; b < w.blocks(); ++b) {
        int st = starts[b];
        v.e.push_back(w.e[st]);
        for (int i = 1; i <= w.strands[b]; ++i) {
            bool here = b == rb && i == ri;
            int g = here ? special_gap : gap;
            bool zig = i % 2 == 1;
            for (int q = 1; q <= n + 1; ++q) {
                int col = zig ? q : n + 2 - q;
                if (col == g)
                    v.e.push_back(here ? special : unit);
                else
                    v.e.push_back(w.e[interior_index(st, n, i, col < g ? col : col - 1)]);
            }
            v.e.push_back(w.e[endpoint_index(st, n, i)]);
        }
    }
    return v;
}

// one curvature column per (block, pass, gap)
template <class Alg>
void c_word(const CurvedContext<Alg>& ctx, const W<Alg>& w, const Rational& c, C<Alg>& out)
{
    const auto& s = ctx.signs;
    int n = w.n;
    int base = fiber_dim(n, w.blocks());
    if (s.rect_horizontal_no_m && w.blocks() >= 2)
        base = n;
    for (int b = 0; b < w.blocks(); ++b)
        for (int i = 1; i <= w.strands[b]; ++i) {
            bool zig = i % 2 == 1;
            for (int g = 1; g <= n + 1; ++g) {
                int sg = sign_of(base + g);
                if (!zig && !s.c_zag_same)
                    sg = -sg;
                int rg = (!zig && s.c_zag_literal) ? n + 2 - g : g;
                for (auto& [rc, R] : ctx.r_terms)
                    out.add(insert_column(ctx.alg, w, b, i, rg, g, R), c * rc * sg);
            }
        }
}

// curvature on the left edge between blocks j and j+1, as a new bare block
template <class Alg>
void c_vertical_word(const CurvedContext<Alg>& ctx, const W<Alg>& w, const Rational& c, C<Alg>& out)
{
    if (w.blocks() < 2)
        return;
    int m = w.blocks() - 2;
    auto starts = block_starts(w.n, w.strands);
    for (int j = 0; j <= m; ++j) {
        int sg = sign_of(m + j + 1);
        if (ctx.signs.rect_vertical_flip)
            sg = -sg;
        int cut = starts[j + 1];
        for (auto& [rc, R] : ctx.r_terms) {
            W<Alg> v{w.n, w.strands, {}};
            v.strands.insert(v.strands.begin() + j + 1, 0);
            v.e.assign(w.e.begin(), w.e.begin() + cut);
            v.e.push_back(R);
            v.e.insert(v.e.end(), w.e.begin() + cut, w.e.end());
            out.add(std::move(v), c * rc * sg);
        }
    }
}

// concatenation of adjacent blocks, faces s_r = s_{r+1}
template <class Alg>
void star_word(const Alg& alg, const W<Alg>& w, const Rational& c, C<Alg>& out)
{
    int m = w.blocks() - 2;
    if (m < 1)
        return;
    auto starts = block_starts(w.n, w.strands);
    typename Alg::Elem prod;
    for (int r = 0; r <= m; ++r) {
        int cut = starts[r + 1];
        int k = alg.mul(w.e[cut - 1], w.e[cut], prod);
        if (!k)
            continue;
        W<Alg> v{w.n, {}, {}};
        for (int b = 0; b < w.blocks(); ++b) {
            if (b == r + 1)
                continue;
            v.strands.push_back(b == r ? w.strands[r] + w.strands[r + 1] : w.strands[b]);
        }
        v.e.assign(w.e.begin(), w.e.begin() + cut - 1);
        v.e.push_back(prod);
        v.e.insert(v.e.end(), w.e.begin() + cut + 1, w.e.end());
        out.add(std::move(v), c * (k * sign_of(m + r)));
    }
}

template <class Alg>
void require_zigzag(const W<Alg>& w)
{
    check_word(w);
    if (w.blocks() != 1 || w.strands[0] % 2)
        throw std::invalid_argument("expected a 1-d zigzag word (one block, even strand count)");
}

template <class Alg>
void require_interval(const W<Alg>& w)
{
    check_word(w);
    if (w.blocks() != 1 || w.strands[0] != 1)
        throw std::invalid_argument("expected an interval word");
}

template <class Alg>
void require_rect(const W<Alg>& w)
{
    check_word(w);
    if (w.blocks() < 2)
        throw std::invalid_argument("expected a rectangular word (at least two blocks)");
    for (int k : w.strands)
        if (k % 2)
            throw std::invalid_argument("rectangular blocks need even strand counts");
}

} // namespace detail

// --- 1-d zigzag ---------------------------------------------------------------

template <class Alg>
Chain<typename Alg::Elem> zz_d(const Alg& alg, const Chain<typename Alg::Elem>& c, const Signs& s = {})
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::nabla_word(alg, nullptr, s, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> zz_b(const Alg& alg, const Chain<typename Alg::Elem>& c, const Signs& s = {})
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::b_word(alg, s, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> zz_D(const Alg& alg, const Chain<typename Alg::Elem>& c, const Signs& s = {})
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::nabla_word(alg, nullptr, s, w, k, out);
        detail::b_word(alg, s, w, k, out);
    });
}

// --- interval words -----------------------------------------------------------

template <class Alg>
Chain<typename Alg::Elem> interval_D(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    Signs s;
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_interval<Alg>(w);
        detail::nabla_word(alg, nullptr, s, w, k, out);
        detail::b_word(alg, s, w, k, out);
    });
}

// --- curved 1-d ---------------------------------------------------------------

template <class Alg>
Chain<typename Alg::Elem> nabla_component(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::nabla_word(ctx.alg, &ctx.a_terms, ctx.signs, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> c_component(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    if (ctx.flat())
        return {};
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::c_word(ctx, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> curved_b(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    return zz_b(ctx.alg, c, ctx.signs);
}

template <class Alg>
Chain<typename Alg::Elem> curved_D(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_zigzag<Alg>(w);
        detail::nabla_word(ctx.alg, &ctx.a_terms, ctx.signs, w, k, out);
        detail::b_word(ctx.alg, ctx.signs, w, k, out);
        if (!ctx.flat())
            detail::c_word(ctx, w, k, out);
    });
}

// --- rectangular --------------------------------------------------------------

template <class Alg>
Word<typename Alg::Elem> star(const Alg& alg, const Word<typename Alg::Elem>& a, const Word<typename Alg::Elem>& b,
                              int* sign = nullptr)
{
    detail::require_zigzag<Alg>(a);
    detail::require_zigzag<Alg>(b);
    if (a.n != b.n)
        throw std::invalid_argument("star: column counts differ");
    Word<typename Alg::Elem> v{a.n, {a.strands[0] + b.strands[0]}, {}};
    typename Alg::Elem prod;
    int k = alg.mul(a.e.back(), b.e.front(), prod);
    if (sign)
        *sign = k;
    v.e.assign(a.e.begin(), a.e.end() - 1);
    v.e.push_back(prod);
    v.e.insert(v.e.end(), b.e.begin() + 1, b.e.end());
    return v;
}

template <class Alg>
Chain<typename Alg::Elem> rect_d(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    Signs s;
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::nabla_word(alg, nullptr, s, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> rect_b(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    Signs s;
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::b_word(alg, s, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> rect_star(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::star_word(alg, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> rect_D(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    Signs s;
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::nabla_word(alg, nullptr, s, w, k, out);
        detail::b_word(alg, s, w, k, out);
        detail::star_word(alg, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> rect_nabla(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::nabla_word(ctx.alg, &ctx.a_terms, ctx.signs, w, k, out);
    });
}

// horizontal and vertical curvature insertions together
template <class Alg>
Chain<typename Alg::Elem> rect_c(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    if (ctx.flat())
        return {};
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::c_word(ctx, w, k, out);
        detail::c_vertical_word(ctx, w, k, out);
    });
}

template <class Alg>
Chain<typename Alg::Elem> rect_curved_D(const CurvedContext<Alg>& ctx, const Chain<typename Alg::Elem>& c)
{
    return detail::map_words<Alg>(c, [&](auto& w, auto& k, auto& out) {
        detail::require_rect<Alg>(w);
        detail::nabla_word(ctx.alg, &ctx.a_terms, ctx.signs, w, k, out);
        detail::b_word(ctx.alg, ctx.signs, w, k, out);
        detail::star_word(ctx.alg, w, k, out);
        if (!ctx.flat()) {
            detail::c_word(ctx, w, k, out);
            detail::c_vertical_word(ctx, w, k, out);
        }
    });
}

} // namespace zz
