#pragma once

#include "rational.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace zz {

inline constexpr int kMaxVars = 8;
using Exps = std::array<uint16_t, kMaxVars>;

inline int total_degree(const Exps& e)
{
    int s = 0;
    for (auto v : e)
        s += v;
    return s;
}

inline Exps add_exps(const Exps& a, const Exps& b)
{
    Exps r{};
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(a[i]) + b[i];
        if (s > 0xffffu)
            throw std::overflow_error("exponent overflow");
        r[i] = uint16_t(s);
    }
    return r;
}

// multivariate polynomial with rational coefficients
class Poly {
public:
    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars)
    {
        if (nvars < 0 || nvars > kMaxVars)
            throw std::invalid_argument("Poly: variable count out of range");
    }

    static Poly constant(int nvars, const Rational& c)
    {
        Poly p(nvars);
        p.add_term(Exps{}, c);
        return p;
    }
    static Poly variable(int nvars, int i)
    {
        Poly p(nvars);
        Exps e{};
        e.at(i) = 1;
        p.add_term(e, 1);
        return p;
    }

    int nvars() const { return nvars_; }
    const std::map<Exps, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exps& e, const Rational& c)
    {
        if (c == 0)
            return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o)
    {
        check(o);
        for (auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        check(o);
        for (auto& [e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }
    Poly& operator*=(const Rational& s)
    {
        if (s == 0)
            terms_.clear();
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a)
    {
        for (auto& [e, c] : a.terms_)
            c = -c;
        return a;
    }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        a.check(b);
        Poly r(a.nvars_);
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_)
                r.add_term(add_exps(ea, eb), ca * cb);
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Poly derivative(int i) const
    {
        Poly r(nvars_);
        for (auto& [e, c] : terms_) {
            if (e[i] == 0)
                continue;
            Exps f = e;
            --f[i];
            r.add_term(f, c * int(e[i]));
        }
        return r;
    }

    // replace variable i by a constant (variable count unchanged)
    Poly substitute(int i, const Rational& v) const
    {
        Poly r(nvars_);
        for (auto& [e, c] : terms_) {
            Exps f = e;
            f[i] = 0;
            Rational pw = 1;
            for (int k = 0; k < e[i]; ++k)
                pw *= v;
            r.add_term(f, c * pw);
        }
        return r;
    }

    // definite integral over variable i from 0 to 1
    Poly integrate_unit(int i) const
    {
        Poly r(nvars_);
        for (auto& [e, c] : terms_) {
            Exps f = e;
            f[i] = 0;
            r.add_term(f, c / Rational(int(e[i]) + 1));
        }
        return r;
    }

    // compose: variable i replaced by polynomial q
    Poly compose(int i, const Poly& q) const
    {
        check(q);
        Poly r(nvars_);
        for (auto& [e, c] : terms_) {
            Exps f = e;
            f[i] = 0;
            Poly t(nvars_);
            t.add_term(f, c);
            for (int k = 0; k < e[i]; ++k)
                t = t * q;
            r += t;
        }
        return r;
    }

    bool depends_on(int i) const
    {
        for (auto& [e, c] : terms_)
            if (e[i] != 0)
                return true;
        return false;
    }

    int degree() const
    {
        int d = 0;
        for (auto& [e, c] : terms_)
            d = std::max(d, total_degree(e));
        return d;
    }

    double eval(const double* x) const
    {
        double s = 0;
        for (auto& [e, c] : terms_) {
            double t = to_double(c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k)
                    t *= x[i];
            s += t;
        }
        return s;
    }

    Rational eval(const std::vector<Rational>& x) const
    {
        Rational s = 0;
        for (auto& [e, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k)
                    t *= x.at(i);
            s += t;
        }
        return s;
    }

    Rational constant_term() const
    {
        auto it = terms_.find(Exps{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

private:
    void check(const Poly& o) const
    {
        if (o.nvars_ != nvars_)
            throw std::invalid_argument("Poly: variable count mismatch");
    }

    int nvars_ = 0;
    std::map<Exps, Rational> terms_;
};

// p(q_1, ..., q_d): every variable of p replaced by a polynomial in a new ring
inline Poly substitute_polys(const Poly& p, const std::vector<Poly>& q, int nvars)
{
    if (int(q.size()) != p.nvars())
        throw std::invalid_argument("substitute_polys: need one polynomial per variable");
    std::vector<std::vector<Poly>> powers(q.size());
    Poly r(nvars);
    for (auto& [e, c] : p.terms()) {
        Poly t = Poly::constant(nvars, c);
        for (size_t i = 0; i < q.size(); ++i) {
            auto& pw = powers[i];
            if (pw.empty())
                pw.push_back(Poly::constant(nvars, 1));
            while (int(pw.size()) <= e[i])
                pw.push_back(pw.back() * q[i]);
            if (e[i])
                t = t * pw[e[i]];
        }
        r += t;
    }
    return r;
}

inline std::vector<std::string> indexed_names(const std::string& prefix, int count)
{
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i)
        out.push_back(prefix + std::to_string(i));
    return out;
}

// print order: higher total degree first, then lexicographically larger exponents
inline std::string to_string(const Poly& p, const std::vector<std::string>& names)
{
    if (p.is_zero())
        return "0";
    std::vector<std::pair<Exps, Rational>> ts(p.terms().begin(), p.terms().end());
    std::stable_sort(ts.begin(), ts.end(), [](auto& a, auto& b) {
        int da = total_degree(a.first), db = total_degree(b.first);
        if (da != db)
            return da > db;
        return a.first > b.first;
    });
    std::string out;
    bool first = true;
    for (auto& [e, c] : ts) {
        bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        std::string mono;
        for (int i = 0; i < p.nvars(); ++i) {
            if (e[i] == 0)
                continue;
            if (!mono.empty())
                mono += ' ';
            mono += names.at(i);
            if (e[i] > 1)
                mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            out += to_string(a);
        else if (a == 1)
            out += mono;
        else
            out += to_string(a) + " " + mono;
    }
    return out;
}

namespace detail {

class PolyParser {
public:
    PolyParser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

    Poly parse()
    {
        Poly p = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg)
    {
        throw std::invalid_argument("polynomial '" + s_ + "': " + msg);
    }

    Poly expr()
    {
        Poly acc = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += term();
            } else if (c == '-') {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Poly term()
    {
        Poly acc = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * unary();
            } else if (c == '/') {
                ++pos_;
                Poly den = unary();
                if (den.degree() != 0 || den.is_zero())
                    fail("division only by nonzero constants");
                acc *= Rational(1) / den.constant_term();
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.') {
                acc = acc * unary();
            } else {
                return acc;
            }
        }
    }

    Poly unary()
    {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    Poly power()
    {
        Poly base = atom();
        if (peek() == '^') {
            ++pos_;
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected exponent");
            int k = std::stoi(s_.substr(start, pos_ - start));
            Poly r = Poly::constant(int(names_.size()), 1);
            for (int i = 0; i < k; ++i)
                r = r * base;
            return r;
        }
        return base;
    }

    Poly atom()
    {
        char c = peek();
        int nv = int(names_.size());
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (peek() != ')')
                fail("missing ')'");
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                ++pos_;
            return Poly::constant(nv, parse_decimal(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            for (int i = 0; i < nv; ++i)
                if (names_[i] == id)
                    return Poly::variable(nv, i);
            fail("unknown variable '" + id + "'");
        }
        fail(c ? "unexpected '" + std::string(1, c) + "'" : "unexpected end");
    }

    const std::string& s_;
    const std::vector<std::string>& names_;
    size_t pos_ = 0;
};

} // namespace detail

inline Poly parse_poly(const std::string& s, const std::vector<std::string>& names)
{
    return detail::PolyParser(s, names).parse();
}

// fast double evaluation of a fixed polynomial
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Poly& p) : nvars_(p.nvars())
    {
        for (auto& [e, c] : p.terms()) {
            terms_.push_back({to_double(c), {}});
            for (int i = 0; i < nvars_; ++i)
                terms_.back().exps[i] = e[i];
        }
    }
    double operator()(const double* x) const
    {
        double s = 0;
        for (auto& t : terms_) {
            double v = t.coeff;
            for (int i = 0; i < nvars_; ++i)
                v *= ipow(x[i], t.exps[i]);
            s += v;
        }
        return s;
    }
    bool empty() const { return terms_.empty(); }

private:
    static double ipow(double x, int k)
    {
        double r = 1;
        while (k > 0) {
            if (k & 1)
                r *= x;
            x *= x;
            k >>= 1;
        }
        return r;
    }
    struct Term {
        double coeff;
        std::array<int, kMaxVars> exps;
    };
    int nvars_ = 0;
    std::vector<Term> terms_;
};

} // namespace zz
