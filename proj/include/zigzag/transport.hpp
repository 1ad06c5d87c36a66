#pragma once

#include "integral.hpp"

namespace zz {

using MatFn = std::function<Mat(double)>;

// max row sum; submultiplicative, used for tail bounds
inline double op_norm(const Mat& m) { return m.size() ? m.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

// RK4 for W' = W g(tau) on [a, b], W(a) = I
inline Mat ode_ordered(const MatFn& g, int size, double a, double b, int steps)
{
    if (steps < 1)
        throw std::invalid_argument("need at least one ODE step");
    Mat W = Mat::Identity(size, size);
    double h = (b - a) / steps;
    for (int k = 0; k < steps; ++k) {
        double t = a + k * h;
        Mat g0 = g(t), g1 = g(t + 0.5 * h), g2 = g(t + h);
        Mat k1 = W * g0;
        Mat k2 = (W + 0.5 * h * k1) * g1;
        Mat k3 = (W + 0.5 * h * k2) * g1;
        Mat k4 = (W + h * k3) * g2;
        W += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return W;
}

// Graded pieces F_q = int_{a < tau_1 < ... < tau_q < b} g(tau_1) ... g(tau_q), q = 0..Q.
// Each panel uses collocation on P Gauss-Legendre nodes; panels are joined with
// (F o G)_q = sum_{i+j=q} F_i G_j, earlier panels on the left.
inline std::vector<Mat> ordered_integrals(const MatFn& g, int size, double a, double b, int Q, int P, int panels)
{
    if (Q < 0 || P < 1 || panels < 1)
        throw std::invalid_argument("ordered integrals: bad truncation or rule");
    auto col = collocation(P);
    std::vector<Mat> total(Q + 1, Mat::Zero(size, size));
    total[0] = Mat::Identity(size, size);
    double L = (b - a) / panels;
    std::vector<Mat> gv(P), F(P), Fn(P), G(Q + 1);
    for (int k = 0; k < panels; ++k) {
        double c0 = a + k * L;
        for (int i = 0; i < P; ++i) {
            gv[i] = g(c0 + L * col.rule.x[i]);
            F[i] = Mat::Identity(size, size);
        }
        G[0] = Mat::Identity(size, size);
        for (int q = 1; q <= Q; ++q) {
            std::vector<Mat> integrand(P);
            Mat end = Mat::Zero(size, size);
            for (int j = 0; j < P; ++j) {
                integrand[j] = F[j] * gv[j];
                end += L * col.rule.w[j] * integrand[j];
            }
            for (int i = 0; i < P; ++i) {
                Fn[i] = Mat::Zero(size, size);
                for (int j = 0; j < P; ++j)
                    Fn[i] += L * col.S(i, j) * integrand[j];
            }
            std::swap(F, Fn);
            G[q] = end;
        }
        std::vector<Mat> next(Q + 1, Mat::Zero(size, size));
        for (int i = 0; i <= Q; ++i)
            for (int j = 0; i + j <= Q; ++j)
                next[i + j] += total[i] * G[j];
        total = std::move(next);
    }
    return total;
}

inline Mat sum_of(const std::vector<Mat>& terms)
{
    Mat s = terms.at(0);
    for (size_t i = 1; i < terms.size(); ++i)
        s += terms[i];
    return s;
}

// int_a^b |g| with the rule's panels, for tail bounds
inline double norm_integral(const MatFn& g, double a, double b, int P, int panels)
{
    auto r = gauss_legendre(P);
    double L = (b - a) / panels, s = 0;
    for (int k = 0; k < panels; ++k)
        for (int i = 0; i < P; ++i)
            s += L * r.w[i] * op_norm(g(a + k * L + L * r.x[i]));
    return s;
}

// rho^{Q+1}/(Q+1)! e^rho bounds the tail of the ordered series beyond Q
inline double series_tail_bound(double rho, int Q)
{
    double t = std::exp(rho);
    for (int q = 1; q <= Q + 1; ++q)
        t *= rho / q;
    return t;
}

// A paired with the velocity of t -> fam(u, t, s)
inline MatFn connection_along_t(const CompiledForm& A, const Family& fam, const std::vector<double>& u, double s = 0)
{
    return [&A, &fam, u, s](double t) {
        double x[kMaxVars], v[kMaxVars];
        fam.eval(u.data(), t, s, x, v, nullptr);
        return A.pair1(x, v);
    };
}

enum class TransportMode { ode, series };

struct TransportResult {
    Mat value;
    double tail_bound = 0; // series mode only
};

// Parallel transport along the path t -> fam(u, t) from t0 to t1, with the
// ordering W' = W A(gamma'), so P(t0, t2) = P(t0, t1) P(t1, t2).
inline TransportResult parallel_transport(const CompiledForm& A, const Family& fam, const std::vector<double>& u,
                                          double t0, double t1, TransportMode mode, const QuadratureSpec& q)
{
    if (t0 > t1)
        throw std::invalid_argument("transport needs t0 <= t1");
    if (A.dim() != fam.dim())
        throw std::invalid_argument("connection dimension does not match the family");
    auto g = connection_along_t(A, fam, u);
    if (t0 == t1)
        return {Mat::Identity(A.size(), A.size()), 0.0};
    if (mode == TransportMode::ode)
        return {ode_ordered(g, A.size(), t0, t1, q.ode_steps), 0.0};
    auto terms = ordered_integrals(g, A.size(), t0, t1, q.trunc, q.points, q.panels);
    double rho = norm_integral(g, t0, t1, q.points, q.panels);
    return {sum_of(terms), series_tail_bound(rho, q.trunc)};
}

// sum_{n <= N} of the ordered iterated integrals of A along the whole path
inline TransportResult holonomy1(const CompiledForm& A, const Family& fam, const std::vector<double>& u, int N,
                                 const QuadratureSpec& q)
{
    QuadratureSpec s = q;
    s.trunc = N;
    return parallel_transport(A, fam, u, 0.0, 1.0, TransportMode::series, s);
}

// gap factors from the insertion series truncated at Q per gap, integrated over
// the ordered simplex of each gap. Only moves along the s = 0 slice, so only
// one-block words.
class SeriesInsertions : public GapFactors {
public:
    SeriesInsertions(const CompiledForm& A, const Family& fam, std::vector<double> u, int Q, const QuadratureSpec& q)
        : A_(&A), fam_(&fam), u_(std::move(u)), Q_(Q), q_(q)
    {
        if (Q < 0)
            throw std::invalid_argument("truncation must be >= 0");
    }

    Mat gap(double t0, double s0, double t1, double s1) const override
    {
        if (s0 != 0 || s1 != 0)
            throw std::invalid_argument("series insertions are only available for one-block words");
        auto g = connection_along_t(*A_, *fam_, u_);
        int size = A_->size();
        if (t0 <= t1)
            return sum_of(ordered_integrals(g, size, t0, t1, Q_, q_.points, q_.panels));
        // zag direction: the reversed curve has velocity -gamma'
        MatFn back = [&](double tau) { return Mat(-g(t0 + t1 - tau)); };
        return sum_of(ordered_integrals(back, size, t1, t0, Q_, q_.points, q_.panels));
    }

private:
    const CompiledForm* A_;
    const Family* fam_;
    std::vector<double> u_;
    int Q_;
    QuadratureSpec q_;
};

enum class InsertionMode { resummed, series };

// curved iterated integral: resummed uses ODE transport between marked points,
// series truncates every gap at q.trunc insertions
inline Mat it_curved(const CompiledForm& A, const FormChain& c, const Family& fam, const std::vector<double>& u,
                     const Dirs& dirs, const QuadratureSpec& q, InsertionMode mode)
{
    if (mode == InsertionMode::resummed) {
        FamilyTransport tr(A, fam, u, q.ode_steps);
        return it_chain(c, fam, u, dirs, q, A.size(), &tr);
    }
    SeriesInsertions ins(A, fam, u, q.trunc, q);
    return it_chain(c, fam, u, dirs, q, A.size(), &ins);
}

// the n-column word x^L = 1, zig (A, ..., A | 1), zag (1, ..., 1 | 1); its iterated
// integral is the n-th ordered integral of A
inline FormWord ordered_word(const PolyMatrixForm& A, int n)
{
    auto one = PolyMatrixForm::unit(A.dim(), A.size());
    FormWord w{n, {2}, {one}};
    for (int i = 0; i < n; ++i)
        w.e.push_back(A);
    for (int i = 0; i < n + 2; ++i)
        w.e.push_back(one);
    return w;
}

// --- 2-holonomy -------------------------------------------------------------

struct SurfaceData {
    const CompiledForm* A = nullptr; // may be empty (A = 0)
    const CompiledForm* B = nullptr;
};

inline void check_surface(const SurfaceData& data, const Family& fam)
{
    if (!data.A || !data.B)
        throw std::invalid_argument("2-holonomy needs both A and B");
    if (!fam.surface())
        throw std::invalid_argument("2-holonomy needs a bigon family");
    if (data.A->dim() != fam.dim() || data.B->dim() != fam.dim())
        throw std::invalid_argument("form dimension does not match the family");
    if (data.A->size() != data.B->size())
        throw std::invalid_argument("A and B have different matrix sizes");
}

// G(s) = int_0^1 P(t,s) B(d_t, d_s) P(t,s)^{-1} dt with P the transport from the corner
inline Mat surface_generator(const SurfaceData& data, const Family& fam, const std::vector<double>& u,
                             const FamilyTransport& tr, double s, const Rule1d& rule)
{
    int size = data.B->size();
    Mat G = Mat::Zero(size, size);
    double x[kMaxVars], vt[kMaxVars], vs[kMaxVars];
    for (size_t k = 0; k < rule.x.size(); ++k) {
        double t = rule.x[k];
        fam.eval(u.data(), t, s, x, vt, vs);
        Mat b = data.B->pair2(x, vt, vs);
        G += rule.w[k] * tr.P(t, s) * b * tr.P_inverse(t, s);
    }
    return G;
}

struct Holonomy2Result {
    Mat value;         // the surface-ordered series, times the left-edge transport unless square mode
    Mat series;        // sum_{m <= M} int_{Delta^m} G(s_1) ... G(s_m)
    Mat left_edge;     // transport along the t = 0 edge, s: 0 -> 1
    double tail_bound = 0;
};

// sum over m <= M of the iterated integrals of the B^m words; the last entry of
// each word sits at the corner (0, 1), which contributes the left-edge transport.
// For bigons that edge is constant and the factor is the identity; for squares
// `square_mode` removes it.
inline Holonomy2Result holonomy2(const SurfaceData& data, const Family& fam, const std::vector<double>& u, int M,
                                 const QuadratureSpec& q, bool square_mode = false)
{
    check_surface(data, fam);
    if (M < 0)
        throw std::invalid_argument("truncation must be >= 0");
    if (!fam.endpoint_constant() && !square_mode)
        throw std::invalid_argument("the family is not a bigon (edges t=0, t=1 move with s); use square mode");
    FamilyTransport tr(*data.A, fam, u, q.ode_steps);
    auto rule = gauss_legendre(q.points);
    MatFn G = [&](double s) { return surface_generator(data, fam, u, tr, s, rule); };
    Holonomy2Result r;
    int size = data.B->size();
    r.series = sum_of(ordered_integrals(G, size, 0.0, 1.0, M, q.points, q.panels));
    r.left_edge = tr.P(0.0, 1.0);
    r.value = square_mode ? r.series : Mat(r.series * r.left_edge);
    r.tail_bound = series_tail_bound(norm_integral(G, 0.0, 1.0, q.points, q.panels), M);
    return r;
}

// H' = H G(s), H(0) = I, integrated with classical RK4 in s
inline Mat ode_holonomy2(const SurfaceData& data, const Family& fam, const std::vector<double>& u, int steps,
                         const QuadratureSpec& q)
{
    check_surface(data, fam);
    FamilyTransport tr(*data.A, fam, u, q.ode_steps);
    auto rule = gauss_legendre(q.points);
    MatFn G = [&](double s) { return surface_generator(data, fam, u, tr, s, rule); };
    return ode_ordered(G, data.B->size(), 0.0, 1.0, steps);
}

// B^m word: blocks {0, 2, ..., 2, 0} on m columns, block j (1..m) carrying B on its
// zig at column col[j-1], units elsewhere
inline FormWord surface_word(const PolyMatrixForm& B, const std::vector<int>& col)
{
    int m = int(col.size());
    auto one = PolyMatrixForm::unit(B.dim(), B.size());
    std::vector<int> strands(m + 2, 2);
    strands.front() = strands.back() = 0;
    FormWord w{m, strands, {one}};
    for (int j = 0; j < m; ++j) {
        w.e.push_back(one);
        for (int c = 1; c <= m; ++c)
            w.e.push_back(c == col[j] ? B : one);
        w.e.push_back(one);
        for (int c = 0; c <= m; ++c)
            w.e.push_back(one);
    }
    w.e.push_back(one);
    return w;
}

// the signed sum over placements whose iterated integral is the m-th term of holonomy2
inline FormChain surface_chain(const PolyMatrixForm& B, int m)
{
    FormChain c;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 1);
    int kappa = sign_of(m * (m - 1) / 2);
    do {
        int inv = 0;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                inv += perm[a] > perm[b];
        c.add(surface_word(B, perm), Rational(kappa * sign_of(inv)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return c;
}

// --- abelian closed forms (1x1 matrices) ----------------------------------------

namespace detail {

inline void require_scalar(const PolyMatrixForm& f, int degree)
{
    if (f.size() != 1)
        throw std::invalid_argument("closed forms need 1x1 matrices");
    if (!f.is_zero() && f.degree() != degree)
        throw std::invalid_argument("closed forms need a homogeneous form of the right degree");
}

} // namespace detail

// exact int_0^1 A(gamma_u'(t)) dt as a polynomial in u1..ur (and s, unused)
inline Poly line_integral(const PolyMatrixForm& A, const Family& fam)
{
    detail::require_scalar(A, 1);
    int nv = fam.params() + 2;
    Poly total(nv);
    for (auto& [mask, mat] : A.components()) {
        int i = std::countr_zero(mask);
        Poly a = substitute_polys(mat[0], fam.components(), nv);
        total += a * fam.components()[i].derivative(fam.t_var());
    }
    return total.substitute(fam.s_var(), 0).integrate_unit(fam.t_var());
}

// exact int int B(d_t Sigma, d_s Sigma) dt ds as a polynomial in u
inline Poly surface_integral(const PolyMatrixForm& B, const Family& fam)
{
    detail::require_scalar(B, 2);
    int nv = fam.params() + 2;
    Poly total(nv);
    auto& comps = fam.components();
    for (auto& [mask, mat] : B.components()) {
        auto ij = mask_indices(mask);
        Poly b = substitute_polys(mat[0], comps, nv);
        Poly jac = comps[ij[0]].derivative(fam.t_var()) * comps[ij[1]].derivative(fam.s_var()) -
                   comps[ij[1]].derivative(fam.t_var()) * comps[ij[0]].derivative(fam.s_var());
        total += b * jac;
    }
    return total.integrate_unit(fam.t_var()).integrate_unit(fam.s_var());
}

inline double eval_at(const Poly& p, const std::vector<double>& u)
{
    double v[kMaxVars] = {};
    std::copy(u.begin(), u.end(), v);
    return p.eval(v);
}

inline double abelian_transport(const PolyMatrixForm& A, const Family& fam, const std::vector<double>& u)
{
    return std::exp(eval_at(line_integral(A, fam), u));
}

inline double abelian_holonomy2(const PolyMatrixForm& B, const Family& fam, const std::vector<double>& u)
{
    return std::exp(eval_at(surface_integral(B, fam), u));
}

} // namespace zz
