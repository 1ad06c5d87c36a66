#pragma once

#include "chain.hpp"

#include <random>

namespace zz {

// Seeded generator of exact test words. Entries are single monomials
// x1^a x2^b dx_I E_ij whose exponents are distinct per slot, so products of
// different entries never collide by accident; matrix units are chained so
// that neighbouring products are nonzero.
class WordGen {
public:
    WordGen(int dim, int size, uint64_t seed) : dim_(dim), size_(size), rng_(seed)
    {
        if (dim < 1 || dim > kMaxVars)
            throw std::invalid_argument("WordGen: bad dimension");
    }

    int dim() const { return dim_; }
    int size() const { return size_; }
    std::mt19937_64& rng() { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    // a monomial entry of the given form degree; tag makes it distinguishable
    Basis entry(int tag, int degree)
    {
        Basis b;
        b.mask = random_mask(degree);
        b.exps[0] = uint16_t(1 + tag % 7);
        if (dim_ > 1)
            b.exps[1] = uint16_t(1 + (tag * tag + 3 * tag) % 11);
        for (int i = 2; i < dim_; ++i)
            b.exps[i] = uint16_t((tag + i) % 3);
        return b;
    }

    // fills matrix units along a chain of indices; identity with probability p_id
    void assign_matrices(std::vector<Basis>& es, double p_id = 0.2)
    {
        if (size_ == 1) {
            for (auto& e : es)
                e.row = e.col = 0;
            return;
        }
        std::bernoulli_distribution id(p_id);
        int cur = uniform(0, size_ - 1);
        for (auto& e : es) {
            if (id(rng_)) {
                e.row = e.col = -1;
                continue;
            }
            int next = uniform(0, size_ - 1);
            e.row = int8_t(cur);
            e.col = int8_t(next);
            cur = next;
        }
    }

    // relative weights of form degrees 0, 1, 2, ...
    void set_degree_weights(std::vector<double> w) { weights_ = std::move(w); }

    int random_degree()
    {
        std::vector<double> w = weights_;
        w.resize(std::min<size_t>(w.size(), dim_ + 1));
        return std::discrete_distribution<int>(w.begin(), w.end())(rng_);
    }

    // word with the given shape; degrees[j] for each entry, or random if empty
    ExactWord word(int n, const std::vector<int>& strands, std::vector<int> degrees = {}, double p_id = 0.2)
    {
        int N = word_size(n, strands);
        if (degrees.empty())
            for (int j = 0; j < N; ++j)
                degrees.push_back(random_degree());
        if (int(degrees.size()) != N)
            throw std::invalid_argument("WordGen: degree list does not match the shape");
        ExactWord w{n, strands, {}};
        int offset = uniform(0, 50);
        for (int j = 0; j < N; ++j)
            w.e.push_back(entry(offset + j, degrees[j]));
        assign_matrices(w.e, p_id);
        return w;
    }

    ExactWord zigzag(int n, int k, std::vector<int> degrees = {}) { return word(n, {k}, std::move(degrees)); }

private:
    uint32_t random_mask(int degree)
    {
        std::vector<int> idx(dim_);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng_);
        uint32_t m = 0;
        for (int i = 0; i < degree; ++i)
            m |= 1u << idx[i];
        return m;
    }

    int dim_;
    int size_;
    std::mt19937_64 rng_;
    std::vector<double> weights_{1, 1, 1};
};

// all degree patterns in {0..max_degree}^count, in lexicographic order
inline std::vector<std::vector<int>> degree_patterns(int count, int max_degree)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur(count, 0);
    for (;;) {
        out.push_back(cur);
        int j = 0;
        while (j < count && ++cur[j] > max_degree)
            cur[j++] = 0;
        if (j == count)
            break;
    }
    return out;
}

} // namespace zz
