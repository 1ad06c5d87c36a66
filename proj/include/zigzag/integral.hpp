#pragma once

#include "chain.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"

#include <functional>

namespace zz {

struct QuadratureSpec {
    int points = 24;   // Gauss-Legendre order per simplex axis
    int trunc = 6;     // truncation order of series evaluations
    double h = 1e-4;   // finite-difference step on the parameter box
    int ode_steps = 400;
    int panels = 8;    // sub-intervals for ordered (path-ordered) series

    void check() const
    {
        if (points < 1 || trunc < 0 || ode_steps < 1 || panels < 1)
            throw std::invalid_argument("quadrature settings must be positive");
        if (!(h > 0 && h <= 1e-2))
            throw std::invalid_argument("finite-difference step must lie in (0, 1e-2]");
    }
};

using Dirs = std::vector<std::vector<double>>;

inline int chain_shifted_degree(const FormAlgebra& alg, const FormChain& c)
{
    int p = -1;
    for (auto& [w, k] : c) {
        int q = 0;
        for (auto& e : w.e) {
            int d = e.degree();
            if (d < 0)
                throw std::invalid_argument("entries must be homogeneous forms");
            q += d;
        }
        q -= w.n + w.interior_rows();
        if (p >= 0 && q != p)
            throw std::invalid_argument("chain is not homogeneous in shifted degree");
        p = q;
    }
    (void)alg;
    return p;
}

// Iterated integral of one word at parameter point u, paired with the tangent
// directions `dirs` on the parameter box. One-block words (zigzags or interval
// words) integrate over the time simplex; words with >= 2 blocks are rectangular
// and integrate over simplex(t) x simplex(s) with orientation dt_1..dt_n ds_1..ds_m
// placed to the left. With `transport`, the running product picks up the gap
// factor between consecutive marked points (resummed or truncated insertions).
inline Mat it_word(const FormWord& w, const Family& fam, const std::vector<double>& u, const Dirs& dirs,
                   const QuadratureSpec& q, const GapFactors* transport = nullptr)
{
    check_word(w);
    if (int(u.size()) != fam.params())
        throw std::invalid_argument("parameter point has wrong length");
    for (auto& v : dirs)
        if (int(v.size()) != fam.params())
            throw std::invalid_argument("direction has wrong length");
    int size = w.e[0].size();
    int n = w.n;
    bool rect = w.blocks() >= 2;
    if (rect && !fam.surface())
        throw std::invalid_argument("rectangular words need a bigon family");
    int m = rect ? w.blocks() - 2 : 0;
    int p = int(dirs.size());
    int G = n + m + p;
    if (G > 30)
        throw std::invalid_argument("too many fiber and parameter directions");
    int total = 0;
    for (auto& e : w.e) {
        if (e.dim() != fam.dim())
            throw std::invalid_argument("form dimension does not match the family");
        int d = e.degree();
        if (d < 0)
            throw std::invalid_argument("entries must be homogeneous forms");
        total += d;
    }
    if (total != n + m + p)
        throw std::invalid_argument("number of directions does not match the shifted degree");

    std::vector<CompiledForm> forms;
    for (auto& e : w.e)
        forms.emplace_back(e);
    auto slots = layout(n, w.strands);
    auto trule = simplex_rule(n, q.points);
    auto srule = simplex_rule(m, q.points);
    uint32_t full = G == 0 ? 0u : (uint32_t(1) << G) - 1;
    int d = fam.dim();

    Mat result = Mat::Zero(size, size);
    // entries sharing a (block, column) position share the point and pulled-back dx_i
    int ncols = n + 2, nblocks = w.blocks();
    std::vector<Family::Jet> jets(ncols * nblocks);
    std::vector<std::vector<OneForm>> thetas(ncols * nblocks, std::vector<OneForm>(d, OneForm(G, 0.0)));
    std::vector<char> ready(ncols * nblocks);
    ExtForm acc, tmp, ef;
    for (size_t si = 0; si < srule.size(); ++si) {
        const double* sv = srule.node(si);
        for (size_t ti = 0; ti < trule.size(); ++ti) {
            const double* tv = trule.node(ti);
            std::fill(ready.begin(), ready.end(), 0);
            acc.size = size;
            acc.terms.assign(1, {0u, Mat::Identity(size, size)});
            double t_last = 0, s_last = 0;
            for (size_t j = 0; j < w.e.size(); ++j) {
                int col = slots[j].col, b = slots[j].block;
                double t = col == 0 ? 0.0 : col == n + 1 ? 1.0 : tv[col - 1];
                double s = 0;
                if (rect)
                    s = b == 0 ? 0.0 : b == m + 1 ? 1.0 : sv[b - 1];
                int key = b * ncols + col;
                auto& jet = jets[key];
                auto& theta = thetas[key];
                if (!ready[key]) {
                    ready[key] = 1;
                    int tbit = (col >= 1 && col <= n) ? col - 1 : -1;
                    int sbit = (rect && b >= 1 && b <= m) ? n + b - 1 : -1;
                    fam.jet(u.data(), t, s, jet);
                    for (int i = 0; i < d; ++i) {
                        std::fill(theta[i].begin(), theta[i].end(), 0.0);
                        for (int e = 0; e < p; ++e) {
                            double c = 0;
                            for (int a = 0; a < fam.params(); ++a)
                                c += jet.du[i * fam.params() + a] * dirs[e][a];
                            theta[i][n + m + e] = c;
                        }
                        if (tbit >= 0)
                            theta[i][tbit] = jet.dt[i];
                        if (sbit >= 0)
                            theta[i][sbit] = jet.ds[i];
                    }
                }
                forms[j].pullback(jet.x.data(), theta, ef);
                if (transport && (t != t_last || s != s_last)) {
                    Mat T = transport->gap(t_last, s_last, t, s);
                    for (auto& [mask, v] : acc.terms)
                        v = v * T;
                }
                ext_wedge(acc, ef, tmp);
                std::swap(acc, tmp);
                t_last = t;
                s_last = s;
            }
            Mat c = acc.coefficient(full);
            result += trule.weights[ti] * srule.weights[si] * c;
        }
    }
    return result;
}

inline Mat it_chain(const FormChain& c, const Family& fam, const std::vector<double>& u, const Dirs& dirs,
                    const QuadratureSpec& q, int size, const GapFactors* transport = nullptr)
{
    Mat r = Mat::Zero(size, size);
    for (auto& [w, k] : c)
        r += to_double(k) * it_word(w, fam, u, dirs, q, transport);
    return r;
}

// --- forms on the parameter box -----------------------------------------------

// a p-form on R^r with matrix values, by components on dx_J (J increasing)
struct ParamForm {
    int r = 0;
    int p = 0;
    int size = 1;
    std::map<uint32_t, Mat> comps;

    Mat pair(const Dirs& dirs) const
    {
        Mat out = Mat::Zero(size, size);
        for (auto& [J, v] : comps) {
            auto idx = mask_indices(J);
            std::vector<std::vector<double>> m(p, std::vector<double>(p));
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b)
                    m[a][b] = dirs[b][idx[a]];
            out += det_small(m) * v;
        }
        return out;
    }
};

using FormFn = std::function<Mat(const std::vector<double>& u, const Dirs& dirs)>;

inline Dirs unit_dirs(int r, uint32_t J)
{
    Dirs d;
    for (int i : mask_indices(J)) {
        std::vector<double> v(r, 0.0);
        v[i] = 1.0;
        d.push_back(v);
    }
    return d;
}

inline ParamForm param_form(const FormFn& g, const std::vector<double>& u, int r, int p, int size)
{
    ParamForm f{r, p, size, {}};
    for (uint32_t J = 0; J < (1u << r); ++J)
        if (std::popcount(J) == p)
            f.comps[J] = g(u, unit_dirs(r, J));
    return f;
}

inline ParamForm wedge(const ParamForm& a, const ParamForm& b)
{
    ParamForm out{a.r, a.p + b.p, a.size, {}};
    for (auto& [I, x] : a.comps)
        for (auto& [J, y] : b.comps) {
            int s = wedge_sign(I, J);
            if (!s)
                continue;
            Mat v = x * y * double(s);
            auto [it, fresh] = out.comps.try_emplace(I | J, v);
            if (!fresh)
                it->second += v;
        }
    return out;
}

// exterior derivative of g on constant directions by central differences:
// dg(v_0..v_p) = sum_i (-1)^i D_{v_i} g(v_0..^v_i..v_p)
inline Mat d_param(const FormFn& g, const std::vector<double>& u, const Dirs& dirs, double h)
{
    if (!(h > 0))
        throw std::invalid_argument("finite-difference step must be positive");
    Mat out;
    for (size_t i = 0; i < dirs.size(); ++i) {
        Dirs rest;
        for (size_t j = 0; j < dirs.size(); ++j)
            if (j != i)
                rest.push_back(dirs[j]);
        auto up = u, dn = u;
        for (size_t a = 0; a < u.size(); ++a) {
            up[a] += h * dirs[i][a];
            dn[a] -= h * dirs[i][a];
        }
        Mat diff = (g(up, rest) - g(dn, rest)) / (2 * h);
        if (i % 2)
            diff = -diff;
        out = i == 0 ? diff : Mat(out + diff);
    }
    return out;
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Sample {
    std::vector<double> u;
    Dirs dirs; // p + 1 directions for a chain of shifted degree p
};

// max over samples of |d(It c) - It(D c)|, with D supplied by the caller
inline double chain_map_residual(const FormChain& c, const FormChain& Dc, const Family& fam,
                                 const std::vector<Sample>& samples, const QuadratureSpec& q, int size,
                                 const CompiledForm* connection = nullptr)
{
    double worst = 0;
    auto transport_at = [&](const std::vector<double>& u) -> std::unique_ptr<FamilyTransport> {
        if (!connection)
            return nullptr;
        return std::make_unique<FamilyTransport>(*connection, fam, u, q.ode_steps);
    };
    FormFn g = [&](const std::vector<double>& u, const Dirs& dirs) {
        auto tr = transport_at(u);
        return it_chain(c, fam, u, dirs, q, size, tr.get());
    };
    for (auto& smp : samples) {
        Mat lhs = d_param(g, smp.u, smp.dirs, q.h);
        auto tr = transport_at(smp.u);
        Mat rhs = it_chain(Dc, fam, smp.u, smp.dirs, q, size, tr.get());
        worst = std::max(worst, max_abs(lhs - rhs));
    }
    return worst;
}

} // namespace zz
