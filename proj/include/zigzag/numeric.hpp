#pragma once

#include "family.hpp"
#include "form.hpp"

#include <bit>
#include <functional>
#include <map>
#include <optional>

namespace zz {

// Exterior algebra on a handful of generators with matrix coefficients, stored
// sparsely. Generators are ordered by bit index.
struct ExtForm {
    int size = 1;
    std::vector<std::pair<uint32_t, Mat>> terms;

    static ExtForm scalar(int size, double c = 1.0)
    {
        ExtForm f{size, {}};
        f.terms.emplace_back(0u, Mat::Identity(size, size) * c);
        return f;
    }

    void add(uint32_t mask, const Mat& m)
    {
        for (auto& [k, v] : terms)
            if (k == mask) {
                v += m;
                return;
            }
        terms.emplace_back(mask, m);
    }

    Mat coefficient(uint32_t mask) const
    {
        for (auto& [k, v] : terms)
            if (k == mask)
                return v;
        return Mat::Zero(size, size);
    }
};

inline void ext_wedge(const ExtForm& a, const ExtForm& b, ExtForm& out)
{
    out.size = a.size;
    out.terms.clear();
    for (auto& [ma, va] : a.terms)
        for (auto& [mb, vb] : b.terms) {
            int s = wedge_sign(ma, mb);
            if (!s)
                continue;
            Mat p = va * vb;
            if (s < 0)
                p = -p;
            out.add(ma | mb, p);
        }
}

// scalar 1-forms over the generators
using OneForm = std::vector<double>;

using WedgeTerms = std::vector<std::pair<uint32_t, double>>;

// wedge of scalar 1-forms theta_{i1} ^ ... ^ theta_{ip} as (mask, value) pairs in
// `acc`; `next` is scratch. Both keep their capacity between calls.
inline void wedge_ones(const OneForm* const* th, int p, WedgeTerms& acc, WedgeTerms& next)
{
    acc.clear();
    acc.emplace_back(0u, 1.0);
    for (int k = 0; k < p; ++k) {
        const OneForm& f = *th[k];
        next.clear();
        for (auto& [m, v] : acc)
            for (int g = 0; g < int(f.size()); ++g) {
                double c = f[g];
                if (c == 0.0)
                    continue;
                uint32_t bit = 1u << g;
                int s = wedge_sign(m, bit);
                if (!s)
                    continue;
                uint32_t nm = m | bit;
                double val = s * v * c;
                bool found = false;
                for (auto& [key, w] : next)
                    if (key == nm) {
                        w += val;
                        found = true;
                        break;
                    }
                if (!found)
                    next.emplace_back(nm, val);
            }
        std::swap(acc, next);
    }
}

inline WedgeTerms wedge_ones(const std::vector<const OneForm*>& th)
{
    WedgeTerms acc, next;
    wedge_ones(th.data(), int(th.size()), acc, next);
    return acc;
}

// a PolyMatrixForm prepared for fast float evaluation
class CompiledForm {
public:
    CompiledForm() = default;
    explicit CompiledForm(const PolyMatrixForm& f) : dim_(f.dim()), size_(f.size())
    {
        for (auto& [mask, mat] : f.components()) {
            Comp c{mask, {}};
            for (int i = 0; i < size_; ++i)
                for (int j = 0; j < size_; ++j) {
                    const Poly& p = mat[i * size_ + j];
                    if (!p.is_zero())
                        c.entries.push_back({i, j, CompiledPoly(p)});
                }
            comps_.push_back(std::move(c));
        }
    }

    int dim() const { return dim_; }
    int size() const { return size_; }
    bool empty() const { return comps_.empty(); }

    // pullback: dx_i -> theta[i]
    ExtForm pullback(const double* x, const std::vector<OneForm>& theta) const
    {
        ExtForm out;
        pullback(x, theta, out);
        return out;
    }

    // same, into `out` (its storage is reused)
    void pullback(const double* x, const std::vector<OneForm>& theta, ExtForm& out) const
    {
        thread_local WedgeTerms acc, next;
        out.size = size_;
        out.terms.clear();
        const OneForm* th[32];
        for (auto& c : comps_) {
            Mat m = Mat::Zero(size_, size_);
            for (auto& e : c.entries)
                m(e.i, e.j) = e.p(x);
            int p = 0;
            for (uint32_t rest = c.mask; rest; rest &= rest - 1)
                th[p++] = &theta[std::countr_zero(rest)];
            wedge_ones(th, p, acc, next);
            for (auto& [mask, v] : acc)
                if (v != 0.0)
                    out.add(mask, m * v);
        }
    }

    // 1-form paired with a single tangent vector
    Mat pair1(const double* x, const double* v) const
    {
        Mat m = Mat::Zero(size_, size_);
        for (auto& c : comps_) {
            if (std::popcount(c.mask) != 1)
                continue;
            double vi = v[std::countr_zero(c.mask)];
            if (vi == 0.0)
                continue;
            for (auto& e : c.entries)
                m(e.i, e.j) += e.p(x) * vi;
        }
        return m;
    }

    // 2-form paired with two tangent vectors
    Mat pair2(const double* x, const double* v, const double* w) const
    {
        Mat m = Mat::Zero(size_, size_);
        for (auto& c : comps_) {
            if (std::popcount(c.mask) != 2)
                continue;
            auto ij = mask_indices(c.mask);
            double k = v[ij[0]] * w[ij[1]] - v[ij[1]] * w[ij[0]];
            if (k == 0.0)
                continue;
            for (auto& e : c.entries)
                m(e.i, e.j) += e.p(x) * k;
        }
        return m;
    }

private:
    struct Entry {
        int i, j;
        CompiledPoly p;
    };
    struct Comp {
        uint32_t mask;
        std::vector<Entry> entries;
    };
    int dim_ = 0;
    int size_ = 1;
    std::vector<Comp> comps_;
};

// Parallel transport of a connection 1-form A along curves of a family, with
// the convention W' = W * A(c'), W(0) = I, so that T(a -> b) = W(a)^{-1} W(b)
// and T(a -> c) = T(a -> b) * T(b -> c).
class TransportTable {
public:
    using Curve = std::function<void(double, double*, double*)>; // tau -> point, velocity

    TransportTable(const CompiledForm& A, Curve curve, int steps) : A_(&A), curve_(std::move(curve)), steps_(steps)
    {
        if (steps < 1)
            throw std::invalid_argument("transport: need at least one step");
        W_.reserve(steps + 1);
        Mat W = Mat::Identity(A.size(), A.size());
        W_.push_back(W);
        double h = 1.0 / steps;
        for (int k = 0; k < steps; ++k) {
            W = rk4(W, k * h, h);
            W_.push_back(W);
        }
    }

    // W(tau) for tau in [0,1]: grid value plus one partial step
    Mat at(double tau) const
    {
        if (tau <= 0)
            return W_.front();
        if (tau >= 1)
            return W_.back();
        double h = 1.0 / steps_;
        int k = std::min(steps_ - 1, int(tau / h));
        double rem = tau - k * h;
        if (rem == 0)
            return W_[k];
        return rk4(W_[k], k * h, rem);
    }

    Mat transport(double a, double b) const { return at(a).inverse() * at(b); }

    Mat generator(double tau) const
    {
        double x[kMaxVars], v[kMaxVars];
        curve_(tau, x, v);
        return A_->pair1(x, v);
    }

private:
    Mat rk4(const Mat& W, double t, double h) const
    {
        Mat k1 = W * generator(t);
        Mat k2 = (W + 0.5 * h * k1) * generator(t + 0.5 * h);
        Mat k3 = (W + 0.5 * h * k2) * generator(t + 0.5 * h);
        Mat k4 = (W + h * k3) * generator(t + h);
        return W + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }

    const CompiledForm* A_;
    Curve curve_;
    int steps_;
    std::vector<Mat> W_;
};

// the factor an iterated integral carries between consecutive marked points
// (t0, s0) -> (t1, s1): the sum of all connection insertions on that segment
class GapFactors {
public:
    virtual ~GapFactors() = default;
    virtual Mat gap(double t0, double s0, double t1, double s1) const = 0;
};

// transport data attached to one parameter point of a family:
// P(t, s) = V(0 -> s) * W_s(0 -> t), V along the t = 0 edge, W_s along the s-slice
class FamilyTransport : public GapFactors {
public:
    FamilyTransport(const CompiledForm& A, const Family& fam, std::vector<double> u, int steps)
        : A_(&A), fam_(&fam), u_(std::move(u)), steps_(steps)
    {
    }

    const TransportTable& slice(double s) const
    {
        auto it = slices_.find(s);
        if (it != slices_.end())
            return it->second;
        auto curve = [this, s](double tau, double* x, double* v) { fam_->eval(u_.data(), tau, s, x, v, nullptr); };
        return slices_.emplace(s, TransportTable(*A_, curve, steps_)).first->second;
    }

    const TransportTable& left_edge() const
    {
        if (!edge_) {
            auto curve = [this](double tau, double* x, double* v) { fam_->eval(u_.data(), 0.0, tau, x, nullptr, v); };
            edge_.emplace(*A_, curve, steps_);
        }
        return *edge_;
    }

    // transport from the base corner to (t, s), and its inverse; both cached
    const Mat& P(double t, double s) const { return entry(t, s).first; }
    const Mat& P_inverse(double t, double s) const { return entry(t, s).second; }

    Mat gap(double t0, double s0, double t1, double s1) const override { return P_inverse(t0, s0) * P(t1, s1); }

private:
    const CompiledForm* A_;
    const Family* fam_;
    std::vector<double> u_;
    int steps_;
    const std::pair<Mat, Mat>& entry(double t, double s) const
    {
        auto key = std::make_pair(t, s);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        Mat w = slice(s).at(t);
        if (s != 0 && fam_->surface())
            w = left_edge().at(s) * w;
        Mat wi = w.inverse();
        return cache_.emplace(key, std::make_pair(std::move(w), std::move(wi))).first->second;
    }

    mutable std::map<double, TransportTable> slices_;
    mutable std::map<std::pair<double, double>, std::pair<Mat, Mat>> cache_;
    mutable std::optional<TransportTable> edge_;
};

} // namespace zz
