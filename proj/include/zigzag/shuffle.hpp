#pragma once

#include "differential.hpp"

namespace zz {

// an (n, m) shuffle: sigma[c-1] is the new position (1-based) of column c;
// columns 1..n come from the left factor, n+1..n+m from the right one
struct Shuffle {
    int n = 0;
    int m = 0;
    std::vector<int> sigma;
    int inversions = 0; // N(sigma): pairs (a <= n < b) with sigma(a) > sigma(b)

    int parity() const { return inversions & 1; }
};

inline std::vector<Shuffle> shuffles(int n, int m)
{
    if (n < 0 || m < 0)
        throw std::invalid_argument("shuffles: negative size");
    std::vector<Shuffle> out;
    // choose which of the n+m slots receive left columns
    std::vector<bool> left(n + m, false);
    std::fill(left.begin(), left.begin() + n, true);
    do {
        Shuffle s{n, m, std::vector<int>(n + m), 0};
        int a = 0, b = n;
        int rights_seen = 0;
        for (int pos = 0; pos < n + m; ++pos) {
            if (left[pos]) {
                s.sigma[a++] = pos + 1;
                s.inversions += rights_seen;
            } else {
                s.sigma[b++] = pos + 1;
                ++rights_seen;
            }
        }
        out.push_back(std::move(s));
    } while (std::prev_permutation(left.begin(), left.end()));
    return out;
}

// the shuffle read backwards: sigma^Sh(i) = n+m+1 - sigma(n+1-i) within each factor
inline Shuffle reversed(const Shuffle& s)
{
    Shuffle r{s.n, s.m, std::vector<int>(s.n + s.m), s.n * s.m - s.inversions};
    int N = s.n + s.m;
    for (int c = 1; c <= s.n; ++c)
        r.sigma[c - 1] = N + 1 - s.sigma[s.n - c];
    for (int c = 1; c <= s.m; ++c)
        r.sigma[s.n + c - 1] = N + 1 - s.sigma[s.n + s.m - c];
    return r;
}

inline int shuffle_sign(const Shuffle& s, bool reversed_order)
{
    int N = reversed_order ? s.n * s.m - s.inversions : s.inversions;
    return sign_of(N);
}

namespace detail {

// geometric picture of a single zigzag block: grid[row][col] for cols 1..n
template <class E>
struct Grid {
    int n = 0;
    E xl;
    std::vector<std::vector<E>> cells; // cells[i-1][col-1]
    std::vector<E> ends;               // ends[i-1]
};

template <class E>
Grid<E> to_grid(const Word<E>& w)
{
    Grid<E> g{w.n, w.e[0], {}, {}};
    for (int i = 1; i <= w.strands[0]; ++i) {
        std::vector<E> row(w.n);
        for (int c = 1; c <= w.n; ++c)
            row[c - 1] = w.e[interior_index(0, w.n, i, c)];
        g.cells.push_back(std::move(row));
        g.ends.push_back(w.e[endpoint_index(0, w.n, i)]);
    }
    return g;
}

template <class E>
Word<E> from_grid(const Grid<E>& g)
{
    int k = int(g.cells.size());
    Word<E> w{g.n, {k}, {}};
    w.e.reserve(block_size(g.n, k));
    w.e.push_back(g.xl);
    for (int i = 1; i <= k; ++i) {
        bool zig = i % 2 == 1;
        for (int q = 1; q <= g.n; ++q)
            w.e.push_back(g.cells[i - 1][zig ? q - 1 : g.n - q]);
        w.e.push_back(g.ends[i - 1]);
    }
    return w;
}

} // namespace detail

// x (.) y: y's passes stacked under x's, last left endpoint of x glued to y^L,
// units filled in so that both factors keep their columns in the merged order
template <class Alg>
Chain<typename Alg::Elem> zz_shuffle(const Alg& alg, const Chain<typename Alg::Elem>& x,
                                     const Chain<typename Alg::Elem>& y, const Signs& s = {})
{
    using E = typename Alg::Elem;
    Chain<E> out;
    auto unit = alg.unit();
    E glued;
    for (auto& [wx, cx] : x) {
        detail::require_zigzag<Alg>(wx);
        int dx = entry_degree_sum(wx, alg);
        auto gx = detail::to_grid(wx);
        for (auto& [wy, cy] : y) {
            detail::require_zigzag<Alg>(wy);
            auto gy = detail::to_grid(wy);
            int n = wx.n, m = wy.n;
            int kx = wx.strands[0];
            const E& last_left = kx == 0 ? gx.xl : gx.ends.back();
            int gsign = alg.mul(last_left, gy.xl, glued);
            if (!gsign)
                continue;
            int base = s.shuffle_plain ? dx * m : (dx + n) * m;
            for (auto& sh : shuffles(n, m)) {
                detail::Grid<E> g{n + m, kx == 0 ? glued : gx.xl, {}, {}};
                for (int i = 0; i < kx; ++i) {
                    std::vector<E> row(n + m, unit);
                    for (int c = 1; c <= n; ++c)
                        row[sh.sigma[c - 1] - 1] = gx.cells[i][c - 1];
                    g.cells.push_back(std::move(row));
                    g.ends.push_back(i == kx - 1 ? glued : gx.ends[i]);
                }
                for (size_t i = 0; i < gy.cells.size(); ++i) {
                    std::vector<E> row(n + m, unit);
                    for (int c = 1; c <= m; ++c)
                        row[sh.sigma[n + c - 1] - 1] = gy.cells[i][c - 1];
                    g.cells.push_back(std::move(row));
                    g.ends.push_back(gy.ends[i]);
                }
                out.add(detail::from_grid(g), cx * cy * (gsign * sign_of(base + sh.inversions)));
            }
        }
    }
    return out;
}

template <class Alg>
Chain<typename Alg::Elem> unit_chain(const Alg& alg)
{
    return Chain<typename Alg::Elem>(Word<typename Alg::Elem>{0, {0}, {alg.unit()}});
}

// --- interval shuffles --------------------------------------------------------

namespace detail {

template <class E>
E scalar_part(const E& e)
{
    if constexpr (std::is_same_v<E, Basis>) {
        Basis b = e;
        b.row = b.col = -1;
        return b;
    } else {
        return e;
    }
}

// product of matrix units/identities as a Basis carrier (mask and exps empty); false if zero
inline bool matrix_mul(Basis& acc, const Basis& e)
{
    if (e.is_identity())
        return true;
    if (acc.is_identity()) {
        acc.row = e.row;
        acc.col = e.col;
        return true;
    }
    if (acc.col != e.row)
        return false;
    acc.col = e.col;
    return true;
}

// shuffle of interval words treating entries as graded-commutative; matrices (if any)
// are pulled out of every slot in x-then-y order and attached to the last slot
template <class Alg>
Chain<typename Alg::Elem> interval_shuffle_impl(const Alg& alg, const Chain<typename Alg::Elem>& x,
                                                const Chain<typename Alg::Elem>& y, bool pull_matrices)
{
    using E = typename Alg::Elem;
    Chain<E> out;
    E tmp;
    for (auto& [wx, cx] : x) {
        require_interval<Alg>(wx);
        for (auto& [wy, cy] : y) {
            require_interval<Alg>(wy);
            int n = wx.n, m = wy.n;
            // concatenated slot list: x slots 0..n+1 then y slots 0..m+1
            std::vector<E> slots;
            std::vector<int> deg;
            Basis mat{};
            bool mat_zero = false;
            auto push = [&](const E& e) {
                if constexpr (std::is_same_v<E, Basis>) {
                    if (pull_matrices) {
                        if (!matrix_mul(mat, e))
                            mat_zero = true;
                        slots.push_back(scalar_part(e));
                        deg.push_back(alg.degree(e));
                        return;
                    }
                }
                slots.push_back(e);
                deg.push_back(alg.degree(e));
            };
            for (auto& e : wx.e)
                push(e);
            for (auto& e : wy.e)
                push(e);
            if (mat_zero)
                continue;
            int dx = 0;
            for (int j = 0; j < n + 2; ++j)
                dx += deg[j];
            int oy = n + 2;
            for (auto& sh : shuffles(n, m)) {
                // target order: x0, y0, interleaved middles, x_{n+1}, y_{m+1}
                std::vector<int> perm{0, oy};
                std::vector<int> mid(n + m);
                for (int c = 1; c <= n; ++c)
                    mid[sh.sigma[c - 1] - 1] = c;
                for (int c = 1; c <= m; ++c)
                    mid[sh.sigma[n + c - 1] - 1] = oy + c;
                perm.insert(perm.end(), mid.begin(), mid.end());
                perm.push_back(n + 1);
                perm.push_back(oy + m + 1);
                int sg = koszul_sign(deg, perm) * sign_of((dx + n) * m + sh.inversions);
                Word<E> v{n + m, {1}, {}};
                int k = alg.mul(slots[0], slots[oy], tmp);
                if (!k)
                    continue;
                sg *= k;
                v.e.push_back(tmp);
                for (int j : mid)
                    v.e.push_back(slots[j]);
                k = alg.mul(slots[n + 1], slots[oy + m + 1], tmp);
                if (!k)
                    continue;
                sg *= k;
                if constexpr (std::is_same_v<E, Basis>) {
                    if (pull_matrices) {
                        tmp.row = mat.row;
                        tmp.col = mat.col;
                    }
                }
                v.e.push_back(tmp);
                out.add(std::move(v), cx * cy * sg);
            }
        }
    }
    return out;
}

} // namespace detail

// commutative coefficients only (1x1 matrices)
template <class Alg>
Chain<typename Alg::Elem> interval_shuffle_comm(const Alg& alg, const Chain<typename Alg::Elem>& x,
                                                const Chain<typename Alg::Elem>& y)
{
    if (alg.size != 1)
        throw std::invalid_argument("interval_shuffle_comm needs scalar (1x1) coefficients");
    return detail::interval_shuffle_impl(alg, x, y, false);
}

// scalar forms tensor constant matrices; matrix parts end up in the last slot
inline ExactChain interval_shuffle_mat(const BasisAlgebra& alg, const ExactChain& x, const ExactChain& y)
{
    return detail::interval_shuffle_impl(alg, x, y, true);
}

// --- column collapse ----------------------------------------------------------

namespace detail {

template <class Alg>
Chain<typename Alg::Elem> collapse_impl(const Alg& alg, const Chain<typename Alg::Elem>& c, bool pull_matrices)
{
    using E = typename Alg::Elem;
    Chain<E> out;
    E tmp;
    for (auto& [w, coeff] : c) {
        require_zigzag<Alg>(w);
        int n = w.n;
        auto slots = layout(n, w.strands);
        int N = int(w.e.size());
        std::vector<int> deg(N), perm(N);
        for (int j = 0; j < N; ++j)
            deg[j] = alg.degree(w.e[j]);
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return slots[a].col < slots[b].col; });
        int sg = koszul_sign(deg, perm);
        Basis mat{};
        bool dead = false;
        std::vector<E> cols(n + 2, alg.unit());
        std::vector<bool> filled(n + 2, false);
        for (int j : perm) {
            E e = w.e[j];
            if constexpr (std::is_same_v<E, Basis>) {
                if (pull_matrices)
                    e = scalar_part(e);
            }
            int col = slots[j].col;
            if (!filled[col]) {
                cols[col] = e;
                filled[col] = true;
                continue;
            }
            int k = alg.mul(cols[col], e, tmp);
            if (!k) {
                dead = true;
                break;
            }
            sg *= k;
            cols[col] = tmp;
        }
        if (dead)
            continue;
        if constexpr (std::is_same_v<E, Basis>) {
            // matrices multiply in traversal order
            if (pull_matrices) {
                for (auto& e : w.e)
                    if (!matrix_mul(mat, e)) {
                        dead = true;
                        break;
                    }
                if (dead)
                    continue;
                cols[n + 1].row = mat.row;
                cols[n + 1].col = mat.col;
            }
        }
        out.add(Word<E>{n, {1}, std::move(cols)}, coeff * sg);
    }
    return out;
}

} // namespace detail

template <class Alg>
Chain<typename Alg::Elem> collapse(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    if (alg.size != 1)
        throw std::invalid_argument("collapse needs commutative (1x1) coefficients");
    return detail::collapse_impl(alg, c, false);
}

inline ExactChain collapse_mat(const BasisAlgebra& alg, const ExactChain& c)
{
    return detail::collapse_impl(alg, c, true);
}

} // namespace zz
