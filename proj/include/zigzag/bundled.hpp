#pragma once

// Test data shared by the acceptance runner, the CLI defaults and configs/.

#include "integral.hpp"

namespace zz::bundled {

// 2-parameter path families in R^2; high t-degree so that a 12-point rule is
// visibly worse than a 24-point one
inline std::vector<Family> path_families()
{
    return {
        Family::parse(2, {"t + u1 t (1 - t) / 5 + t^9 (1 - t) / 2", "t^2 + u2 t^3 / 5 - t^11 / 3 + u1 / 10"}, false),
        Family::parse(2, {"t^2 + u2 t / 4 + t^10 / 2 + u1 / 8", "t - t^9 (1 - t) + u1 u2 t^2 / 8"}, false),
        Family::parse(2, {"t (1 - t)^8 + t + u1 u2 / 10", "t^12 - t^3 / 2 + (u1 - u2) t^2 / 6"}, false),
    };
}

inline FormAlgebra chain_algebra() { return FormAlgebra{2, 2}; }

// entries for the test chains
inline PolyMatrixForm entry(const std::string& which)
{
    if (which == "f")
        return make_form(2, 2, {{{}, {"1 + x1 x2^2", "x2", "x1^2", "1"}}});
    if (which == "g")
        return make_form(2, 2, {{{}, {"x1^3 x2", "1", "x2 - x1", "x1 x2"}}});
    if (which == "a")
        return make_form(2, 2, {{{1}, {"x2^2", "1", "x1 x2", "x1^3"}}, {{2}, {"x1", "x1^2 x2", "1", "x2"}}});
    if (which == "b")
        return make_form(2, 2, {{{2}, {"1 + x1^2", "x2^3", "x1", "x2^2"}}, {{1}, {"x1 x2", "0", "x2", "1"}}});
    if (which == "c")
        return make_form(2, 2, {{{1}, {"x1^3", "x2", "1", "0"}}, {{2}, {"x2^2 x1", "1", "0", "x1"}}});
    if (which == "1")
        return PolyMatrixForm::unit(2, 2);
    throw std::invalid_argument("unknown bundled entry " + which);
}

inline FormWord word(int n, std::vector<int> strands, const std::vector<std::string>& entries)
{
    FormWord w{n, std::move(strands), {}};
    for (auto& e : entries)
        w.e.push_back(entry(e));
    check_word(w);
    return w;
}

struct NamedChain {
    std::string name;
    FormChain chain;
};

// five zigzag chains of shifted degree 0 or 1
inline std::vector<NamedChain> chains()
{
    std::vector<NamedChain> out;
    out.push_back({"n1k2-deg1", FormChain(word(1, {2}, {"f", "a", "g", "1", "b"}))});
    out.push_back({"n1k2-deg0", FormChain(word(1, {2}, {"f", "a", "g", "1", "g"}))});
    out.push_back({"n2k2-deg1", FormChain(word(2, {2}, {"f", "a", "g", "b", "c", "1", "g"}))});
    out.push_back({"n0k2-deg1", FormChain(word(0, {2}, {"f", "a", "g"}))});
    FormChain mix(word(1, {4}, {"g", "a", "1", "1", "g", "1", "f", "c", "1"}));
    mix.add(word(1, {2}, {"f", "c", "1", "g", "b"}), Rational(-3, 2));
    out.push_back({"mixed", mix});
    return out;
}

// commuting (1x1) versions for the collapse comparison
inline PolyMatrixForm scalar_entry(const std::string& which)
{
    if (which == "f")
        return make_form(2, 1, {{{}, {"1 + x1 x2^2"}}});
    if (which == "g")
        return make_form(2, 1, {{{}, {"x1^3 x2 - x2 + 1"}}});
    if (which == "a")
        return make_form(2, 1, {{{1}, {"x2^2"}}, {{2}, {"x1"}}});
    if (which == "b")
        return make_form(2, 1, {{{2}, {"1 + x1^2"}}, {{1}, {"x1 x2"}}});
    if (which == "c")
        return make_form(2, 1, {{{1}, {"x1^3 - 1"}}, {{2}, {"x2^2 x1"}}});
    if (which == "1")
        return PolyMatrixForm::unit(2, 1);
    throw std::invalid_argument("unknown bundled entry " + which);
}

inline std::vector<NamedChain> scalar_chains()
{
    auto w = [](int n, std::vector<int> strands, const std::vector<std::string>& names) {
        FormWord out{n, std::move(strands), {}};
        for (auto& e : names)
            out.e.push_back(scalar_entry(e));
        check_word(out);
        return FormChain(out);
    };
    return {{"n1k2-deg1", w(1, {2}, {"f", "a", "g", "1", "b"})},
            {"n1k2-deg0", w(1, {2}, {"f", "a", "g", "1", "g"})},
            {"n2k2-deg1", w(2, {2}, {"f", "a", "g", "b", "c", "1", "g"})},
            {"n1k4-deg1", w(1, {4}, {"g", "a", "1", "1", "g", "1", "f", "c", "1"})},
            {"n0k2-deg1", w(0, {2}, {"f", "a", "g"})}};
}

// sample points and tangent directions on the parameter box
inline std::vector<Sample> samples(int p)
{
    std::vector<std::vector<double>> dirs = {{0.8, -0.35}, {0.25, 0.9}};
    std::vector<std::vector<double>> points = {{0.35, 0.6}, {0.7, 0.25}};
    std::vector<Sample> out;
    for (auto& u : points)
        out.push_back({u, Dirs(dirs.begin(), dirs.begin() + p + 1)});
    return out;
}

// --- connections ------------------------------------------------------------------

// bounded nonabelian connection on R^2, 2x2
inline PolyMatrixForm connection()
{
    return make_form(2, 2, {{{1}, {"x2/2", "1/3", "-x1/4", "1/5"}}, {{2}, {"1/6", "x1/2", "1/5", "x2/3"}}});
}

inline PolyMatrixForm nilpotent_connection() { return make_form(2, 2, {{{1}, {"0", "1", "0", "0"}}}); }

inline Family nilpotent_path() { return Family::parse(1, {"t", "0"}, false); }

inline Family transport_path() { return Family::parse(1, {"t + u1 t (1 - t)", "t^2 - u1 t / 2"}, false); }

// scalar data for the closed forms
inline PolyMatrixForm abelian_connection()
{
    return make_form(2, 1, {{{1}, {"x1 x2 + 1/2"}}, {{2}, {"x1^2 - x2/3"}}});
}

inline PolyMatrixForm abelian_curving() { return make_form(2, 1, {{{1, 2}, {"1 + x1 x2 - x2^2/2"}}}); }

// nonabelian curvings for the bigons
inline PolyMatrixForm curving()
{
    return make_form(2, 2, {{{1, 2}, {"1/2 + x1", "x2/3", "-x1 x2/2", "1/4"}}});
}

inline PolyMatrixForm curving_alt()
{
    return make_form(2, 2, {{{1, 2}, {"x2^2", "1/2", "-1/3", "x1 - x2"}}});
}

// bigons: the edges t = 0 and t = 1 do not move with s
inline std::vector<Family> bigons()
{
    return {
        Family::parse(1, {"t + u1 t (1 - t) s", "t^2 + s t (1 - t) + u1 t"}, true, true),
        Family::parse(1, {"t - s t (1 - t) (1 + u1 t)", "u1 + t^3 + 3 s t (1 - t) / 2"}, true, true),
    };
}

// a square whose left edge moves with s
inline Family square()
{
    return Family::parse(1, {"t / 2 + s / 3 + u1 t s / 4", "s / 2 + t^2 / 2 + u1 s t / 4"}, true, false);
}

inline std::vector<double> base_point() { return {0.4}; }

} // namespace zz::bundled
