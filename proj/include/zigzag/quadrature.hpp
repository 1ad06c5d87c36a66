#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace zz {

struct Rule1d {
    std::vector<double> x; // nodes in [0,1], increasing
    std::vector<double> w;
};

// Gauss-Legendre on [0,1] via the Golub-Welsch eigenproblem
inline Rule1d gauss_legendre(int P)
{
    if (P < 1)
        throw std::invalid_argument("gauss_legendre: need at least one point");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(P, P);
    for (int k = 1; k < P; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule1d r;
    for (int i = 0; i < P; ++i) {
        double v = es.eigenvectors()(0, i);
        r.x.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
        r.w.push_back(v * v); // 2 v^2 on [-1,1], halved for [0,1]
    }
    return r;
}

// Nested rule on the ordered simplex 0 <= t_1 <= ... <= t_n <= 1:
// t_{i+1} = t_i + (1 - t_i) x with weight factor (1 - t_i).
struct SimplexRule {
    int dim = 0;
    std::vector<double> nodes; // dim values per node
    std::vector<double> weights;

    size_t size() const { return weights.size(); }
    const double* node(size_t i) const { return nodes.data() + i * dim; }
};

inline SimplexRule simplex_rule(int n, int P)
{
    SimplexRule s;
    s.dim = n;
    if (n == 0) {
        s.weights.push_back(1.0);
        return s;
    }
    auto g = gauss_legendre(P);
    std::vector<int> idx(n, 0);
    std::vector<double> t(n);
    for (;;) {
        double w = 1, lo = 0;
        for (int i = 0; i < n; ++i) {
            t[i] = lo + (1 - lo) * g.x[idx[i]];
            w *= (1 - lo) * g.w[idx[i]];
            lo = t[i];
        }
        s.nodes.insert(s.nodes.end(), t.begin(), t.end());
        s.weights.push_back(w);
        int j = n - 1;
        while (j >= 0 && ++idx[j] == P)
            idx[j--] = 0;
        if (j < 0)
            break;
    }
    return s;
}

// Collocation on P Gauss-Legendre nodes of [0,1]: S(i,j) such that
// sum_j S(i,j) f(x_j) = int_0^{x_i} f for polynomials of degree < P.
struct Collocation {
    Rule1d rule;
    Eigen::MatrixXd S;
};

inline double legendre(int j, double x)
{
    double p0 = 1, p1 = x;
    if (j == 0)
        return p0;
    for (int k = 1; k < j; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

inline Collocation collocation(int P)
{
    Collocation c{gauss_legendre(P), Eigen::MatrixXd(P, P)};
    Eigen::MatrixXd V(P, P), Q(P, P);
    for (int i = 0; i < P; ++i) {
        double x = 2 * c.rule.x[i] - 1;
        for (int j = 0; j < P; ++j) {
            V(i, j) = legendre(j, x);
            // antiderivative from -1 in the [-1,1] variable, then halved for [0,1]
            double a = j == 0 ? x + 1 : (legendre(j + 1, x) - legendre(j - 1, x)) / (2 * j + 1);
            Q(i, j) = 0.5 * a;
        }
    }
    c.S = Q * V.inverse();
    return c;
}

} // namespace zz
