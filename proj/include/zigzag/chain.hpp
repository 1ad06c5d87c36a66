#pragma once

#include "algebra.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace zz {

// A tensor word laid out on n columns. Each block is a zigzag with `strands[b]`
// passes; one block is a 1-d zigzag (or an interval word when strands == {1}),
// m+2 blocks form a rectangular word. Entries are stored in traversal order:
// per block x^L, then for each pass its n interior entries followed by its endpoint.
template <class E>
struct Word {
    int n = 0;
    std::vector<int> strands;
    std::vector<E> e;

    int blocks() const { return int(strands.size()); }
    int interior_rows() const { return std::max(0, blocks() - 2); }

    friend bool operator==(const Word& a, const Word& b)
    {
        return a.n == b.n && a.strands == b.strands && a.e == b.e;
    }
    friend bool operator<(const Word& a, const Word& b)
    {
        if (a.n != b.n)
            return a.n < b.n;
        if (a.strands != b.strands)
            return a.strands < b.strands;
        if constexpr (std::three_way_comparable<E>)
            return std::lexicographical_compare_three_way(a.e.begin(), a.e.end(), b.e.begin(), b.e.end()) < 0;
        else
            return std::lexicographical_compare(a.e.begin(), a.e.end(), b.e.begin(), b.e.end());
    }
};

inline int block_size(int n, int k) { return 1 + k * (n + 1); }

inline int word_size(int n, const std::vector<int>& strands)
{
    int s = 0;
    for (int k : strands)
        s += block_size(n, k);
    return s;
}

// position of one entry in the geometric picture
struct Slot {
    int block;
    int row; // 0 for x^L, else pass index 1..k
    int col; // 0 (time 0) .. n+1 (time 1)
    bool endpoint;
};

inline std::vector<Slot> layout(int n, const std::vector<int>& strands)
{
    std::vector<Slot> out;
    for (int b = 0; b < int(strands.size()); ++b) {
        out.push_back({b, 0, 0, true});
        for (int i = 1; i <= strands[b]; ++i) {
            bool zig = i % 2 == 1;
            for (int q = 1; q <= n; ++q)
                out.push_back({b, i, zig ? q : n + 1 - q, false});
            out.push_back({b, i, zig ? n + 1 : 0, true});
        }
    }
    return out;
}

// traversal index helpers for one block starting at `start`
inline int interior_index(int start, int n, int row, int col)
{
    bool zig = row % 2 == 1;
    return start + 1 + (row - 1) * (n + 1) + (zig ? col - 1 : n - col);
}
inline int endpoint_index(int start, int n, int row) { return start + 1 + (row - 1) * (n + 1) + n; }

inline std::vector<int> block_starts(int n, const std::vector<int>& strands)
{
    std::vector<int> s;
    int at = 0;
    for (int k : strands) {
        s.push_back(at);
        at += block_size(n, k);
    }
    return s;
}

template <class E>
void check_word(const Word<E>& w)
{
    if (w.n < 0 || w.strands.empty())
        throw std::invalid_argument("word needs n >= 0 and at least one block");
    for (int k : w.strands)
        if (k < 0)
            throw std::invalid_argument("negative strand count");
    if (int(w.e.size()) != word_size(w.n, w.strands))
        throw std::invalid_argument("word has wrong number of entries for its shape");
}

template <class E>
class Chain {
public:
    using Map = std::map<Word<E>, Rational>;

    Chain() = default;
    Chain(const Word<E>& w, const Rational& c = 1) { add(w, c); }

    void add(const Word<E>& w, const Rational& c)
    {
        if (c == 0)
            return;
        auto [it, fresh] = terms_.try_emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    void add(Word<E>&& w, const Rational& c)
    {
        if (c == 0)
            return;
        auto it = terms_.lower_bound(w);
        if (it == terms_.end() || terms_.key_comp()(w, it->first)) {
            terms_.emplace_hint(it, std::move(w), c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Chain& operator+=(const Chain& o)
    {
        for (auto& [w, c] : o.terms_)
            add(w, c);
        return *this;
    }
    Chain& operator-=(const Chain& o)
    {
        for (auto& [w, c] : o.terms_)
            add(w, -c);
        return *this;
    }
    Chain& operator*=(const Rational& s)
    {
        if (s == 0)
            terms_.clear();
        for (auto& [w, c] : terms_)
            c *= s;
        return *this;
    }
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator*(const Rational& s, Chain a) { return a *= s; }
    friend bool operator==(const Chain& a, const Chain& b) { return a.terms_ == b.terms_; }

    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    const Map& terms() const { return terms_; }

private:
    Map terms_;
};

using ExactWord = Word<Basis>;
using ExactChain = Chain<Basis>;
using FormWord = Word<PolyMatrixForm>;
using FormChain = Chain<PolyMatrixForm>;

// Rewrites identity entries as sums of diagonal units; the result is the unique
// expansion of the chain in the basis tensor product.
inline ExactChain normalize(const ExactChain& c, int size)
{
    ExactChain out;
    for (auto& [w, coeff] : c) {
        std::vector<int> ids;
        for (int j = 0; j < int(w.e.size()); ++j)
            if (w.e[j].is_identity())
                ids.push_back(j);
        if (ids.empty()) {
            out.add(w, coeff);
            continue;
        }
        std::vector<int> pick(ids.size(), 0);
        for (;;) {
            Word<Basis> v = w;
            for (size_t t = 0; t < ids.size(); ++t) {
                v.e[ids[t]].row = int8_t(pick[t]);
                v.e[ids[t]].col = int8_t(pick[t]);
            }
            out.add(std::move(v), coeff);
            size_t t = 0;
            while (t < ids.size() && ++pick[t] == size)
                pick[t++] = 0;
            if (t == ids.size())
                break;
        }
    }
    return out;
}

inline bool is_zero_chain(const ExactChain& c, int size)
{
    if (c.empty())
        return true;
    return normalize(c, size).empty();
}

// exact chain from a chain with form entries (multilinear expansion)
inline ExactChain expand_chain(const BasisAlgebra& alg, const FormChain& c)
{
    ExactChain out;
    for (auto& [w, coeff] : c) {
        std::vector<Terms<Basis>> parts;
        for (auto& f : w.e)
            parts.push_back(alg.expand(f));
        bool any_empty = std::any_of(parts.begin(), parts.end(), [](auto& p) { return p.empty(); });
        if (any_empty)
            continue;
        std::vector<size_t> pick(parts.size(), 0);
        for (;;) {
            Word<Basis> v{w.n, w.strands, {}};
            Rational k = coeff;
            for (size_t j = 0; j < parts.size(); ++j) {
                v.e.push_back(parts[j][pick[j]].second);
                k *= parts[j][pick[j]].first;
            }
            out.add(std::move(v), k);
            size_t j = 0;
            while (j < parts.size() && ++pick[j] == parts[j].size())
                pick[j++] = 0;
            if (j == parts.size())
                break;
        }
    }
    return out;
}

// split inhomogeneous entries so that every word has homogeneous entries
inline FormChain homogenize(const FormAlgebra& alg, const FormChain& c)
{
    FormChain out;
    for (auto& [w, coeff] : c) {
        std::vector<Terms<PolyMatrixForm>> parts;
        for (auto& f : w.e)
            parts.push_back(alg.expand(f));
        if (std::any_of(parts.begin(), parts.end(), [](auto& p) { return p.empty(); }))
            continue;
        std::vector<size_t> pick(parts.size(), 0);
        for (;;) {
            FormWord v{w.n, w.strands, {}};
            for (size_t j = 0; j < parts.size(); ++j)
                v.e.push_back(parts[j][pick[j]].second);
            out.add(std::move(v), coeff);
            size_t j = 0;
            while (j < parts.size() && ++pick[j] == parts[j].size())
                pick[j++] = 0;
            if (j == parts.size())
                break;
        }
    }
    return out;
}

template <class E>
int entry_degree_sum(const Word<E>& w, auto& alg)
{
    int s = 0;
    for (auto& x : w.e)
        s += alg.degree(x);
    return s;
}

// total degree minus the fiber dimension (n, plus m for rectangular words)
template <class Alg>
int shifted_degree(const Alg& alg, const Word<typename Alg::Elem>& w)
{
    return entry_degree_sum(w, alg) - w.n - w.interior_rows();
}

// grid literal: blocks separated by " / ", passes in parentheses, endpoint after '|'
template <class Alg>
std::string grid_text(const Alg& alg, const Word<typename Alg::Elem>& w)
{
    std::string s = "{n=" + std::to_string(w.n) + ": ";
    auto starts = block_starts(w.n, w.strands);
    for (int b = 0; b < w.blocks(); ++b) {
        if (b)
            s += " / ";
        int st = starts[b];
        s += "[" + alg.text(w.e[st]) + "]";
        for (int i = 1; i <= w.strands[b]; ++i) {
            s += " (";
            int base = st + 1 + (i - 1) * (w.n + 1);
            for (int q = 0; q < w.n; ++q)
                s += (q ? ", " : "") + alg.text(w.e[base + q]);
            s += " | " + alg.text(w.e[base + w.n]) + ")";
        }
    }
    return s + "}";
}

template <class Alg>
std::string chain_text(const Alg& alg, const Chain<typename Alg::Elem>& c)
{
    if (c.empty())
        return "0";
    std::string s;
    for (auto& [w, k] : c) {
        if (!s.empty())
            s += "\n";
        s += to_string(k) + " * " + grid_text(alg, w);
    }
    return s;
}

// Koszul sign of moving items (with the given degrees) into the order `perm`
// (perm[new position] = old position)
inline int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm)
{
    int parity = 0;
    for (size_t a = 0; a < perm.size(); ++a)
        for (size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b])
                parity += degrees[perm[a]] * degrees[perm[b]];
    return sign_of(parity);
}

} // namespace zz
