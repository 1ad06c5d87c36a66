#pragma once

#include "poly.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace zz {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 8, 8>;
using Vec = Eigen::VectorXd;

// x^exps dx_mask (x) matrix unit E_{row,col}; row < 0 stands for the identity matrix
struct Basis {
    uint32_t mask = 0;
    Exps exps{};
    int8_t row = -1;
    int8_t col = -1;

    bool is_identity() const { return row < 0; }
    int degree() const { return std::popcount(mask); }
    // cheap total order (map keys); not the lexicographic order of the fields
    std::strong_ordering operator<=>(const Basis& o) const
    {
        uint64_t a[3], b[3];
        pack(a);
        o.pack(b);
        for (int i = 0; i < 3; ++i)
            if (a[i] != b[i])
                return a[i] <=> b[i];
        return std::strong_ordering::equal;
    }
    bool operator==(const Basis&) const = default;

private:
    void pack(uint64_t* out) const
    {
        std::memcpy(out, exps.data(), 16);
        out[2] = uint64_t(mask) << 16 | uint64_t(uint8_t(row)) << 8 | uint8_t(col);
    }
};

// sign of dx_a ^ dx_b written in increasing order, 0 if they overlap
inline int wedge_sign(uint32_t a, uint32_t b)
{
    if (a & b)
        return 0;
    int swaps = 0;
    while (b) {
        int k = std::countr_zero(b);
        b &= b - 1;
        swaps += std::popcount(a >> (k + 1));
    }
    return sign_of(swaps);
}

// returns the sign of the product, 0 if it vanishes
inline int basis_mul(const Basis& a, const Basis& b, Basis& out)
{
    int s = wedge_sign(a.mask, b.mask);
    if (!s)
        return 0;
    if (a.is_identity()) {
        out.row = b.row;
        out.col = b.col;
    } else if (b.is_identity()) {
        out.row = a.row;
        out.col = a.col;
    } else {
        if (a.col != b.row)
            return 0;
        out.row = a.row;
        out.col = b.col;
    }
    out.mask = a.mask | b.mask;
    out.exps = add_exps(a.exps, b.exps);
    return s;
}

// d(x^a dx_I E) = sum_k a_k x^{a-e_k} dx_k ^ dx_I E
template <class Emit>
void basis_d(const Basis& a, int dim, Emit&& emit)
{
    for (int k = 0; k < dim; ++k) {
        if (a.exps[k] == 0 || (a.mask >> k & 1u))
            continue;
        Basis b = a;
        --b.exps[k];
        b.mask |= 1u << k;
        int s = sign_of(std::popcount(a.mask & ((1u << k) - 1)));
        emit(s * int(a.exps[k]), b);
    }
}

inline std::vector<int> mask_indices(uint32_t mask)
{
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

// exact matrix-valued polynomial differential form on R^d
class PolyMatrixForm {
public:
    PolyMatrixForm() = default;
    PolyMatrixForm(int dim, int size) : dim_(dim), size_(size)
    {
        if (dim < 1 || dim > kMaxVars)
            throw std::invalid_argument("form dimension out of range");
        if (size < 1 || size > 8)
            throw std::invalid_argument("matrix size out of range");
    }

    static PolyMatrixForm unit(int dim, int size)
    {
        PolyMatrixForm f(dim, size);
        for (int i = 0; i < size; ++i)
            f.add(Basis{0, {}, int8_t(i), int8_t(i)}, 1);
        return f;
    }

    // c * x^exps dx_mask E_{i,j}
    static PolyMatrixForm monomial(int dim, int size, const Rational& c, uint32_t mask, const Exps& exps, int i, int j)
    {
        PolyMatrixForm f(dim, size);
        f.add(Basis{mask, exps, int8_t(i), int8_t(j)}, c);
        return f;
    }

    // (poly matrix, row-major) dx_mask
    static PolyMatrixForm from_matrix(int dim, int size, uint32_t mask, const std::vector<Poly>& entries)
    {
        PolyMatrixForm f(dim, size);
        f.add_matrix(mask, entries);
        return f;
    }

    void add_matrix(uint32_t mask, const std::vector<Poly>& entries)
    {
        if (int(entries.size()) != size_ * size_)
            throw std::invalid_argument("coefficient matrix has wrong size");
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j < size_; ++j) {
                auto& p = entries[i * size_ + j];
                if (!p.is_zero() && p.nvars() != dim_)
                    throw std::invalid_argument("coefficient polynomial has wrong variable count");
                for (auto& [e, c] : p.terms())
                    add(Basis{mask, e, int8_t(i), int8_t(j)}, c);
            }
    }

    // identity basis elements are expanded into diagonal units
    void add(const Basis& b, const Rational& c)
    {
        if (c == 0)
            return;
        if (b.mask >> dim_)
            throw std::invalid_argument("wedge index beyond dimension");
        if (b.is_identity()) {
            for (int i = 0; i < size_; ++i)
                add(Basis{b.mask, b.exps, int8_t(i), int8_t(i)}, c);
            return;
        }
        if (b.row >= size_ || b.col >= size_)
            throw std::invalid_argument("matrix unit out of range");
        auto [it, fresh] = terms_.try_emplace(b, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    int dim() const { return dim_; }
    int size() const { return size_; }
    const std::map<Basis, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // -1 when inhomogeneous; the zero form reports 0
    int degree() const
    {
        int deg = -2;
        for (auto& [b, c] : terms_) {
            int p = b.degree();
            if (deg == -2)
                deg = p;
            else if (deg != p)
                return -1;
        }
        return deg == -2 ? 0 : deg;
    }

    PolyMatrixForm homogeneous_part(int p) const
    {
        PolyMatrixForm f(dim_, size_);
        for (auto& [b, c] : terms_)
            if (b.degree() == p)
                f.terms_.emplace(b, c);
        return f;
    }

    int max_degree() const
    {
        int d = 0;
        for (auto& [b, c] : terms_)
            d = std::max(d, b.degree());
        return d;
    }

    // wedge multi-index -> row-major matrix of polynomials
    std::map<uint32_t, std::vector<Poly>> components() const
    {
        std::map<uint32_t, std::vector<Poly>> out;
        for (auto& [b, c] : terms_) {
            auto [it, fresh] = out.try_emplace(b.mask, std::vector<Poly>(size_ * size_, Poly(dim_)));
            it->second[b.row * size_ + b.col].add_term(b.exps, c);
        }
        return out;
    }

    PolyMatrixForm& operator+=(const PolyMatrixForm& o)
    {
        check(o);
        for (auto& [b, c] : o.terms_)
            add(b, c);
        return *this;
    }
    PolyMatrixForm& operator-=(const PolyMatrixForm& o)
    {
        check(o);
        for (auto& [b, c] : o.terms_)
            add(b, -c);
        return *this;
    }
    PolyMatrixForm& operator*=(const Rational& s)
    {
        if (s == 0)
            terms_.clear();
        for (auto& [b, c] : terms_)
            c *= s;
        return *this;
    }
    friend PolyMatrixForm operator+(PolyMatrixForm a, const PolyMatrixForm& b) { return a += b; }
    friend PolyMatrixForm operator-(PolyMatrixForm a, const PolyMatrixForm& b) { return a -= b; }
    friend PolyMatrixForm operator-(PolyMatrixForm a) { return a *= Rational(-1); }
    friend PolyMatrixForm operator*(const Rational& s, PolyMatrixForm a) { return a *= s; }

    friend bool operator==(const PolyMatrixForm& a, const PolyMatrixForm& b)
    {
        return a.dim_ == b.dim_ && a.size_ == b.size_ && a.terms_ == b.terms_;
    }
    friend bool operator<(const PolyMatrixForm& a, const PolyMatrixForm& b)
    {
        if (a.dim_ != b.dim_)
            return a.dim_ < b.dim_;
        if (a.size_ != b.size_)
            return a.size_ < b.size_;
        return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
                                            [](auto& x, auto& y) {
                                                if (x.first != y.first)
                                                    return x.first < y.first;
                                                return x.second < y.second;
                                            });
    }

    void check(const PolyMatrixForm& o) const
    {
        if (o.dim_ != dim_ || o.size_ != size_)
            throw std::invalid_argument("form dimension/matrix-size mismatch");
    }

private:
    int dim_ = 1;
    int size_ = 1;
    std::map<Basis, Rational> terms_;
};

inline PolyMatrixForm wedge(const PolyMatrixForm& a, const PolyMatrixForm& b)
{
    a.check(b);
    PolyMatrixForm r(a.dim(), a.size());
    Basis out;
    for (auto& [ba, ca] : a.terms())
        for (auto& [bb, cb] : b.terms()) {
            int s = basis_mul(ba, bb, out);
            if (s)
                r.add(out, s > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
        }
    return r;
}

inline PolyMatrixForm exterior_d(const PolyMatrixForm& a)
{
    PolyMatrixForm r(a.dim(), a.size());
    for (auto& [b, c] : a.terms())
        basis_d(b, a.dim(), [&](int k, const Basis& e) { r.add(e, c * k); });
    return r;
}

inline PolyMatrixForm curvature(const PolyMatrixForm& A)
{
    if (A.degree() != 1 && !A.is_zero())
        throw std::invalid_argument("curvature: connection must be a 1-form");
    return exterior_d(A) + wedge(A, A);
}

// A^x - (-1)^{|x|} x^A, extended over homogeneous parts
inline PolyMatrixForm graded_bracket(const PolyMatrixForm& A, const PolyMatrixForm& x)
{
    if (A.degree() != 1 && !A.is_zero())
        throw std::invalid_argument("graded_bracket: connection must be a 1-form");
    PolyMatrixForm r(x.dim(), x.size());
    for (int p = 0; p <= x.max_degree(); ++p) {
        auto xp = x.homogeneous_part(p);
        if (xp.is_zero())
            continue;
        r += wedge(A, xp);
        if (p % 2)
            r += wedge(xp, A);
        else
            r -= wedge(xp, A);
    }
    return r;
}

inline double det_small(const std::vector<std::vector<double>>& m)
{
    int n = int(m.size());
    if (n == 0)
        return 1;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = m[i][j];
    return a.determinant();
}

// degree-p part of a paired with p tangent vectors at a point
inline Mat evaluate(const PolyMatrixForm& a, const std::vector<double>& point, const std::vector<std::vector<double>>& tangents)
{
    if (int(point.size()) != a.dim())
        throw std::invalid_argument("evaluate: point has wrong dimension");
    int p = int(tangents.size());
    for (auto& v : tangents)
        if (int(v.size()) != a.dim())
            throw std::invalid_argument("evaluate: tangent has wrong dimension");
    if (!a.is_zero() && a.degree() >= 0 && a.degree() != p)
        throw std::invalid_argument("evaluate: wrong number of tangents for the form degree");
    Mat out = Mat::Zero(a.size(), a.size());
    std::map<uint32_t, double> dets;
    for (auto& [b, c] : a.terms()) {
        if (b.degree() != p)
            continue;
        auto it = dets.find(b.mask);
        if (it == dets.end()) {
            auto idx = mask_indices(b.mask);
            std::vector<std::vector<double>> m(p, std::vector<double>(p));
            for (int r = 0; r < p; ++r)
                for (int s = 0; s < p; ++s)
                    m[r][s] = tangents[s][idx[r]];
            it = dets.emplace(b.mask, det_small(m)).first;
        }
        double v = to_double(c) * it->second;
        for (int k = 0; k < a.dim(); ++k)
            for (int e = 0; e < b.exps[k]; ++e)
                v *= point[k];
        out(b.row, b.col) += v;
    }
    return out;
}

// exact pairing at a rational point with rational tangents
inline std::vector<Rational> evaluate_exact(const PolyMatrixForm& a, const std::vector<Rational>& point,
                                            const std::vector<std::vector<Rational>>& tangents)
{
    int p = int(tangents.size());
    int m = a.size();
    std::vector<Rational> out(m * m, Rational(0));
    for (auto& [b, c] : a.terms()) {
        if (b.degree() != p)
            continue;
        auto idx = mask_indices(b.mask);
        // Leibniz expansion of the determinant; p is tiny
        std::vector<int> perm(p);
        for (int i = 0; i < p; ++i)
            perm[i] = i;
        Rational det = 0;
        do {
            int inv = 0;
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j)
                    inv += perm[i] > perm[j];
            Rational t = sign_of(inv);
            for (int r = 0; r < p; ++r)
                t *= tangents[perm[r]][idx[r]];
            det += t;
        } while (std::next_permutation(perm.begin(), perm.end()));
        Rational v = c * det;
        for (int k = 0; k < a.dim(); ++k)
            for (int e = 0; e < b.exps[k]; ++e)
                v *= point[k];
        out[b.row * m + b.col] += v;
    }
    return out;
}

// --- literals -------------------------------------------------------------

inline nlohmann::json to_json(const PolyMatrixForm& f)
{
    auto names = indexed_names("x", f.dim());
    auto comps = f.components();
    std::vector<std::pair<uint32_t, std::vector<Poly>>> sorted(comps.begin(), comps.end());
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) {
        auto ia = mask_indices(a.first), ib = mask_indices(b.first);
        if (ia.size() != ib.size())
            return ia.size() < ib.size();
        return ia < ib;
    });
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [mask, mat] : sorted) {
        nlohmann::json dx = nlohmann::json::array();
        for (int i : mask_indices(mask))
            dx.push_back(i + 1);
        nlohmann::json coeff = nlohmann::json::array();
        for (int i = 0; i < f.size(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < f.size(); ++j)
                row.push_back(to_string(mat[i * f.size() + j], names));
            coeff.push_back(row);
        }
        terms.push_back({{"dx", dx}, {"coeff", coeff}});
    }
    return {{"dim", f.dim()}, {"matrix_size", f.size()}, {"terms", terms}};
}

inline PolyMatrixForm form_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix_size"))
        throw std::invalid_argument("form literal needs dim and matrix_size");
    int d = j.at("dim").get<int>(), m = j.at("matrix_size").get<int>();
    PolyMatrixForm f(d, m);
    auto names = indexed_names("x", d);
    if (!j.contains("terms"))
        return f;
    for (auto& t : j.at("terms")) {
        uint32_t mask = 0;
        int last = 0;
        for (auto& idx : t.at("dx")) {
            int i = idx.get<int>();
            if (i <= last || i > d)
                throw std::invalid_argument("dx indices must be strictly increasing within 1..dim");
            last = i;
            mask |= 1u << (i - 1);
        }
        auto& coeff = t.at("coeff");
        if (!coeff.is_array() || int(coeff.size()) != m)
            throw std::invalid_argument("coeff must be an m x m array");
        std::vector<Poly> entries;
        for (auto& row : coeff) {
            if (!row.is_array() || int(row.size()) != m)
                throw std::invalid_argument("coeff must be an m x m array");
            for (auto& s : row)
                entries.push_back(parse_poly(s.get<std::string>(), names));
        }
        f.add_matrix(mask, entries);
    }
    return f;
}

// terms as (1-based dx indices, row-major coefficient strings over x1..xd)
inline PolyMatrixForm make_form(int dim, int size,
                                const std::vector<std::pair<std::vector<int>, std::vector<std::string>>>& terms)
{
    PolyMatrixForm f(dim, size);
    auto names = indexed_names("x", dim);
    for (auto& [dx, coeff] : terms) {
        uint32_t mask = 0;
        for (int i : dx) {
            if (i < 1 || i > dim || (mask >> (i - 1)) & 1)
                throw std::invalid_argument("bad dx index list");
            mask |= 1u << (i - 1);
        }
        std::vector<Poly> entries;
        for (auto& s : coeff)
            entries.push_back(parse_poly(s, names));
        // reordering dx indices into increasing order costs a sign
        int parity = 0;
        for (size_t a = 0; a < dx.size(); ++a)
            for (size_t b = a + 1; b < dx.size(); ++b)
                parity += dx[a] > dx[b];
        if (parity & 1)
            for (auto& p : entries)
                p = -p;
        f.add_matrix(mask, entries);
    }
    return f;
}

inline std::string dx_text(uint32_t mask)
{
    std::string s;
    for (int i : mask_indices(mask)) {
        if (!s.empty())
            s += "^";
        s += "dx" + std::to_string(i + 1);
    }
    return s;
}

// compact one-line text used inside grid literals
inline std::string to_text(const PolyMatrixForm& f)
{
    if (f.is_zero())
        return "0";
    if (f == PolyMatrixForm::unit(f.dim(), f.size()))
        return "1";
    auto names = indexed_names("x", f.dim());
    std::string out;
    for (auto& [mask, mat] : f.components()) {
        if (!out.empty())
            out += " + ";
        std::string c;
        if (f.size() == 1) {
            c = "(" + to_string(mat[0], names) + ")";
        } else {
            c = "[";
            for (int i = 0; i < f.size(); ++i) {
                c += i ? "; " : "";
                for (int j = 0; j < f.size(); ++j)
                    c += (j ? ", " : "") + to_string(mat[i * f.size() + j], names);
            }
            c += "]";
        }
        out += mask ? c + " " + dx_text(mask) : c;
    }
    return out;
}

inline std::string to_text(const Basis& b, int dim)
{
    std::string s;
    for (int k = 0; k < dim; ++k) {
        if (!b.exps[k])
            continue;
        s += (s.empty() ? "" : " ") + std::string("x") + std::to_string(k + 1);
        if (b.exps[k] > 1)
            s += "^" + std::to_string(b.exps[k]);
    }
    if (b.mask)
        s += (s.empty() ? "" : " ") + dx_text(b.mask);
    if (!b.is_identity())
        s += (s.empty() ? "" : " ") + std::string("E") + std::to_string(b.row + 1) + std::to_string(b.col + 1);
    return s.empty() ? "1" : s;
}

} // namespace zz
