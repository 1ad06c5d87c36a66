#pragma once

#include "poly.hpp"

#include <nlohmann/json.hpp>

namespace zz {

// Polynomial family of paths (u, t) -> R^d or bigons (u, t, s) -> R^d.
// Component polynomials use the variables u1..ur, t, s (in that order).
class Family {
public:
    Family() = default;
    Family(int r, std::vector<Poly> comps, bool surface, bool endpoint_constant = false)
        : r_(r), surface_(surface), endpoint_constant_(endpoint_constant), comps_(std::move(comps))
    {
        if (r < 0 || r + 2 > kMaxVars)
            throw std::invalid_argument("family: parameter count out of range");
        if (comps_.empty() || int(comps_.size()) > kMaxVars)
            throw std::invalid_argument("family: bad number of components");
        for (auto& p : comps_) {
            if (p.nvars() != r + 2)
                throw std::invalid_argument("family: component has wrong variable count");
            if (!surface && p.depends_on(s_var()))
                throw std::invalid_argument("family: path components may not use s");
        }
        if (endpoint_constant_ && !check_endpoint_constant())
            throw std::invalid_argument("family: bigon edges t=0 and t=1 depend on s");
        compile();
    }

    static std::vector<std::string> names(int r)
    {
        auto v = indexed_names("u", r);
        v.push_back("t");
        v.push_back("s");
        return v;
    }

    static Family parse(int r, const std::vector<std::string>& comps, bool surface, bool endpoint_constant = false)
    {
        std::vector<Poly> ps;
        auto nm = names(r);
        for (auto& c : comps)
            ps.push_back(parse_poly(c, nm));
        return Family(r, std::move(ps), surface, endpoint_constant);
    }

    int params() const { return r_; }
    int dim() const { return int(comps_.size()); }
    bool surface() const { return surface_; }
    bool endpoint_constant() const { return endpoint_constant_; }
    const std::vector<Poly>& components() const { return comps_; }
    int t_var() const { return r_; }
    int s_var() const { return r_ + 1; }

    // the t = 0 and t = 1 edges are independent of s (symbolic check)
    bool check_endpoint_constant() const
    {
        for (auto& p : comps_)
            for (int e : {0, 1})
                if (p.substitute(t_var(), e).depends_on(s_var()))
                    return false;
        return true;
    }

    // position and first partials at (u, t, s)
    struct Jet {
        std::vector<double> x;  // d
        std::vector<double> du; // d * r, row-major by component
        std::vector<double> dt; // d
        std::vector<double> ds; // d
    };

    void jet(const double* u, double t, double s, Jet& out) const
    {
        double v[kMaxVars] = {};
        for (int a = 0; a < r_; ++a)
            v[a] = u[a];
        v[t_var()] = t;
        v[s_var()] = s;
        int d = dim();
        out.x.resize(d);
        out.du.resize(d * r_);
        out.dt.resize(d);
        out.ds.resize(d);
        for (int i = 0; i < d; ++i) {
            out.x[i] = value_[i](v);
            for (int a = 0; a < r_; ++a)
                out.du[i * r_ + a] = d_u_[i * r_ + a](v);
            out.dt[i] = d_t_[i](v);
            out.ds[i] = d_s_[i](v);
        }
    }

    // position and the t / s velocities without allocating (any output may be null)
    void eval(const double* u, double t, double s, double* x, double* dt, double* ds) const
    {
        double v[kMaxVars] = {};
        for (int a = 0; a < r_; ++a)
            v[a] = u[a];
        v[t_var()] = t;
        v[s_var()] = s;
        for (int i = 0; i < dim(); ++i) {
            if (x)
                x[i] = value_[i](v);
            if (dt)
                dt[i] = d_t_[i](v);
            if (ds)
                ds[i] = d_s_[i](v);
        }
    }

    std::vector<double> point(const std::vector<double>& u, double t, double s = 0) const
    {
        Jet j;
        jet(u.data(), t, s, j);
        return j.x;
    }

    // the same family with t replaced by phi(t) (phi a polynomial in t)
    Family reparametrized(const Poly& phi) const
    {
        std::vector<Poly> ps;
        for (auto& p : comps_)
            ps.push_back(p.compose(t_var(), phi));
        return Family(r_, std::move(ps), surface_, endpoint_constant_);
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["params"] = r_;
        j["kind"] = surface_ ? "bigon" : "path";
        if (surface_)
            j["endpoint_constant"] = endpoint_constant_;
        auto nm = names(r_);
        for (auto& p : comps_)
            j["components"].push_back(to_string(p, nm));
        return j;
    }

    static Family from_json(const nlohmann::json& j)
    {
        int r = j.at("params").get<int>();
        std::string kind = j.value("kind", "path");
        if (kind != "path" && kind != "bigon")
            throw std::invalid_argument("family kind must be 'path' or 'bigon'");
        bool surface = kind == "bigon";
        bool ec = surface && j.value("endpoint_constant", false);
        return parse(r, j.at("components").get<std::vector<std::string>>(), surface, ec);
    }

    friend bool operator==(const Family& a, const Family& b)
    {
        return a.r_ == b.r_ && a.surface_ == b.surface_ && a.endpoint_constant_ == b.endpoint_constant_ &&
               a.comps_ == b.comps_;
    }

private:
    void compile()
    {
        value_.clear();
        d_u_.clear();
        d_t_.clear();
        d_s_.clear();
        for (auto& p : comps_) {
            value_.emplace_back(p);
            for (int a = 0; a < r_; ++a)
                d_u_.emplace_back(p.derivative(a));
            d_t_.emplace_back(p.derivative(t_var()));
            d_s_.emplace_back(p.derivative(s_var()));
        }
    }

    int r_ = 0;
    bool surface_ = false;
    bool endpoint_constant_ = false;
    std::vector<Poly> comps_;
    std::vector<CompiledPoly> value_, d_u_, d_t_, d_s_;
};

} // namespace zz
