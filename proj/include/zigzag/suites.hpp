#pragma once

#include "differential.hpp"
#include "random.hpp"
#include "shuffle.hpp"

#include <chrono>
#include <functional>
#include <regex>

namespace zz {

struct CheckResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    double seconds = 0;
    std::string note;

    bool pass() const { return cases > 0 && failures == 0; }
};

// "n<=2,k<=2": column and strand bounds of the exhaustive zigzag shapes
struct ShapeSpec {
    int max_n = 2;
    int max_k = 2;

    std::string text() const { return "n<=" + std::to_string(max_n) + ",k<=" + std::to_string(max_k); }

    static ShapeSpec parse(const std::string& s)
    {
        static const std::regex re(R"(\s*n\s*<=\s*(\d+)\s*,\s*k\s*<=\s*(\d+)\s*)");
        std::smatch m;
        if (!std::regex_match(s, m, re))
            throw std::invalid_argument("shape spec must look like 'n<=2,k<=2'");
        ShapeSpec r{std::stoi(m[1]), std::stoi(m[2])};
        if (r.max_k % 2)
            throw std::invalid_argument("strand bound k must be even");
        if (r.max_n > 3 || r.max_k > 4)
            throw std::invalid_argument("exhaustive shapes are limited to n<=3, k<=4");
        return r;
    }

    // every (n, k, degree pattern) with entries of degree 0..dim
    std::vector<std::tuple<int, int, std::vector<int>>> enumerate(int dim) const
    {
        std::vector<std::tuple<int, int, std::vector<int>>> out;
        for (int n = 0; n <= max_n; ++n)
            for (int k = 0; k <= max_k; k += 2)
                for (auto& d : degree_patterns(block_size(n, k), dim))
                    out.emplace_back(n, k, d);
        return out;
    }

    long count(int dim) const
    {
        long c = 0;
        for (int n = 0; n <= max_n; ++n)
            for (int k = 0; k <= max_k; k += 2) {
                long p = 1;
                for (int i = 0; i < block_size(n, k); ++i)
                    p *= dim + 1;
                c += p;
            }
        return c;
    }
};

struct SuiteOptions {
    uint64_t seed = 1;
    ShapeSpec shapes;
    int random_words = 500; // n <= 3, k <= 4
    int pairs = 200;        // derivation / associativity / collapse cases
    int rect_draws = 3;     // random entry draws per rectangular shape
    Signs signs;            // convention under test (default: the frozen one)
};

// nonflat connection on R^2 with 2x2 matrices used by the exact curved suites
inline PolyMatrixForm suite_connection()
{
    return make_form(2, 2, {{{1}, {"x2", "1", "0", "0"}}, {{2}, {"0", "0", "x1", "0"}}});
}

namespace detail {

using Clock = std::chrono::steady_clock;

template <class F>
CheckResult timed(const std::string& name, F&& body)
{
    CheckResult r{name};
    auto t0 = Clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

inline void tally(CheckResult& r, bool ok)
{
    ++r.cases;
    if (!ok)
        ++r.failures;
}

// shifted degree parity of a single-word chain, the sign in the derivation law
template <class Alg>
int derivation_parity(const Alg& alg, const Chain<typename Alg::Elem>& x, const Signs& s)
{
    int p = 0;
    for (auto& [w, c] : x)
        p = entry_degree_sum(w, alg) + (s.derivation_unshifted ? 0 : w.n);
    return p;
}

inline std::vector<std::vector<int>> rect_shapes(int max_blocks, int max_total)
{
    std::vector<std::vector<int>> out;
    for (int b = 2; b <= max_blocks; ++b) {
        std::vector<int> k(b, 0);
        for (;;) {
            int total = std::accumulate(k.begin(), k.end(), 0);
            if (total <= max_total)
                out.push_back(k);
            int j = 0;
            while (j < b && (k[j] += 2) > max_total)
                k[j++] = 0;
            if (j == b)
                break;
        }
    }
    return out;
}

} // namespace detail

// --- 1-d zigzag complex -----------------------------------------------------------

inline CheckResult check_zz_square_exhaustive(const SuiteOptions& o, bool stop_early = false)
{
    return detail::timed("zigzag D^2 = 0, exhaustive " + o.shapes.text(), [&](CheckResult& r) {
        BasisAlgebra alg{2, 2};
        WordGen g(2, 2, o.seed);
        for (auto& [n, k, deg] : o.shapes.enumerate(2)) {
            ExactChain c(g.zigzag(n, k, deg));
            detail::tally(r, is_zero_chain(zz_D(alg, zz_D(alg, c, o.signs), o.signs), 2));
            if (stop_early && r.failures)
                return;
        }
    });
}

inline CheckResult check_zz_square_random(const SuiteOptions& o)
{
    return detail::timed("zigzag D^2 = 0, random n<=3,k<=4", [&](CheckResult& r) {
        BasisAlgebra alg{2, 2};
        WordGen g(2, 2, o.seed + 1);
        for (int i = 0; i < o.random_words; ++i) {
            ExactChain c(g.zigzag(g.uniform(0, 3), 2 * g.uniform(0, 2)));
            detail::tally(r, is_zero_chain(zz_D(alg, zz_D(alg, c, o.signs), o.signs), 2));
        }
    });
}

inline ExactWord random_small_word(WordGen& g, int max_n = 2, int max_half_k = 1)
{
    return g.zigzag(g.uniform(0, max_n), 2 * g.uniform(0, max_half_k));
}

inline ExactChain random_small_zigzag(WordGen& g, int max_n = 2, int max_half_k = 1)
{
    return ExactChain(random_small_word(g, max_n, max_half_k));
}

// adjust y^L so that the glued product (last left endpoint of x) * y^L is nonzero
inline void glue_compatible(const ExactWord& x, ExactWord& y)
{
    const Basis& a = x.e.back();
    Basis& b = y.e.front();
    b.mask &= ~a.mask;
    if (!a.is_identity() && !b.is_identity())
        b.row = a.col;
}

inline std::vector<ExactChain> random_factors(WordGen& g, int count, int max_n = 2, int max_half_k = 1)
{
    std::vector<ExactWord> w;
    for (int i = 0; i < count; ++i) {
        w.push_back(random_small_word(g, max_n, max_half_k));
        if (i)
            glue_compatible(w[i - 1], w[i]);
    }
    return {w.begin(), w.end()};
}

inline CheckResult check_derivation(const SuiteOptions& o, int cases, bool stop_early = false)
{
    return detail::timed("D is a derivation of the shuffle product", [&](CheckResult& r) {
        BasisAlgebra alg{2, 2};
        WordGen g(2, 2, o.seed + 2);
        long nonzero = 0;
        for (int i = 0; i < cases; ++i) {
            auto f = random_factors(g, 2);
            auto &x = f[0], &y = f[1];
            auto lhs = zz_D(alg, zz_shuffle(alg, x, y, o.signs), o.signs);
            nonzero += !is_zero_chain(lhs, 2);
            auto rhs = zz_shuffle(alg, zz_D(alg, x, o.signs), y, o.signs) +
                       Rational(sign_of(detail::derivation_parity(alg, x, o.signs))) *
                           zz_shuffle(alg, x, zz_D(alg, y, o.signs), o.signs);
            detail::tally(r, is_zero_chain(lhs - rhs, 2));
            if (stop_early && r.failures)
                return;
        }
        r.note = std::to_string(nonzero) + " cases with nonzero D(x.y)";
    });
}

inline CheckResult check_associativity(const SuiteOptions& o)
{
    return detail::timed("shuffle product is associative and unital", [&](CheckResult& r) {
        BasisAlgebra alg{2, 2};
        WordGen g(2, 2, o.seed + 3);
        auto one = unit_chain(alg);
        long nonzero = 0;
        for (int i = 0; i < o.pairs; ++i) {
            auto f = random_factors(g, 3, 1);
            auto &x = f[0], &y = f[1], &z = f[2];
            auto lhs = zz_shuffle(alg, zz_shuffle(alg, x, y, o.signs), z, o.signs);
            nonzero += !is_zero_chain(lhs, 2);
            auto rhs = zz_shuffle(alg, x, zz_shuffle(alg, y, z, o.signs), o.signs);
            bool unital = is_zero_chain(zz_shuffle(alg, x, one, o.signs) - x, 2) &&
                          is_zero_chain(zz_shuffle(alg, one, x, o.signs) - x, 2);
            detail::tally(r, is_zero_chain(lhs - rhs, 2) && unital);
        }
        r.note = std::to_string(nonzero) + " cases with nonzero triple product";
    });
}

// --- collapse -----------------------------------------------------------------------

inline WordGen collapse_generator(int size, uint64_t seed)
{
    // dimension 4 with mostly low degrees keeps most column products nonzero
    WordGen g(4, size, seed);
    g.set_degree_weights({5, 3, 1});
    return g;
}

inline CheckResult check_collapse(const SuiteOptions& o)
{
    return detail::timed("Col is a chain map and an algebra map (1x1)", [&](CheckResult& r) {
        BasisAlgebra alg{4, 1};
        auto g = collapse_generator(1, o.seed + 4);
        long nonzero = 0;
        for (int i = 0; i < o.pairs; ++i) {
            auto f = random_factors(g, 2);
            auto &x = f[0], &y = f[1];
            auto cx = collapse(alg, x);
            bool chain = is_zero_chain(collapse(alg, zz_D(alg, x)) - interval_D(alg, cx), 1);
            bool algebra =
                is_zero_chain(collapse(alg, zz_shuffle(alg, x, y)) - interval_shuffle_comm(alg, cx, collapse(alg, y)), 1);
            nonzero += !cx.empty();
            detail::tally(r, chain && algebra);
        }
        r.note = std::to_string(nonzero) + " cases with nonzero collapse";
    });
}

inline CheckResult check_collapse_mat(const SuiteOptions& o)
{
    return detail::timed("Col_Mat is a chain map and an algebra map", [&](CheckResult& r) {
        BasisAlgebra alg{4, 2};
        auto g = collapse_generator(2, o.seed + 5);
        long nonzero = 0;
        for (int i = 0; i < o.pairs; ++i) {
            auto f = random_factors(g, 2);
            auto &x = f[0], &y = f[1];
            auto cx = collapse_mat(alg, x);
            bool chain = is_zero_chain(collapse_mat(alg, zz_D(alg, x)) - interval_D(alg, cx), 2);
            bool algebra = is_zero_chain(
                collapse_mat(alg, zz_shuffle(alg, x, y)) - interval_shuffle_mat(alg, cx, collapse_mat(alg, y)), 2);
            nonzero += !cx.empty();
            detail::tally(r, chain && algebra);
        }
        r.note = std::to_string(nonzero) + " cases with nonzero collapse";
    });
}

inline ExactChain random_interval(WordGen& g, int max_n)
{
    return ExactChain(g.word(g.uniform(0, max_n), {1}));
}

inline CheckResult check_interval(const SuiteOptions& o)
{
    return detail::timed("interval complex: D^2 = 0, D derivation of both shuffles", [&](CheckResult& r) {
        BasisAlgebra comm{4, 1}, mat{4, 2};
        auto g1 = collapse_generator(1, o.seed + 6);
        auto g2 = collapse_generator(2, o.seed + 7);
        auto parity = [&](auto& alg, const ExactChain& x) {
            int p = 0;
            for (auto& [w, c] : x)
                p = entry_degree_sum(w, alg) + w.n;
            return p;
        };
        for (int i = 0; i < o.pairs; ++i) {
            auto x = random_interval(g1, 3), y = random_interval(g1, 2);
            bool sq = is_zero_chain(interval_D(comm, interval_D(comm, x)), 1);
            auto lhs = interval_D(comm, interval_shuffle_comm(comm, x, y));
            auto rhs = interval_shuffle_comm(comm, interval_D(comm, x), y) +
                       Rational(sign_of(parity(comm, x))) * interval_shuffle_comm(comm, x, interval_D(comm, y));
            bool der = is_zero_chain(lhs - rhs, 1);
            auto u = random_interval(g2, 2), v = random_interval(g2, 2);
            auto lm = interval_D(mat, interval_shuffle_mat(mat, u, v));
            auto rm = interval_shuffle_mat(mat, interval_D(mat, u), v) +
                      Rational(sign_of(parity(mat, u))) * interval_shuffle_mat(mat, u, interval_D(mat, v));
            detail::tally(r, sq && der && is_zero_chain(lm - rm, 2) &&
                                 is_zero_chain(interval_D(mat, interval_D(mat, u)), 2));
        }
    });
}

// --- curved complex -------------------------------------------------------------------

inline CheckResult check_curved_square_exhaustive(const SuiteOptions& o)
{
    return detail::timed("curved D^2 = 0, exhaustive " + o.shapes.text(), [&](CheckResult& r) {
        BasisAlgebra alg{2, 2};
        CurvedContext<BasisAlgebra> ctx(alg, suite_connection(), o.signs);
        WordGen g(2, 2, o.seed + 8);
        for (auto& [n, k, deg] : o.shapes.enumerate(2)) {
            ExactChain c(g.zigzag(n, k, deg));
            detail::tally(r, is_zero_chain(curved_D(ctx, curved_D(ctx, c)), 2));
        }
    });
}

// the five pieces of curved D^2 = 0, plus D^2 and the derivation law
struct CurvedIdentities {
    CheckResult parts[7];
};

inline const char* curved_identity_name(int i)
{
    static const char* names[7] = {"b^2 = 0",
                                   "c^2 = 0",
                                   "nabla b + b nabla = 0",
                                   "nabla c + c nabla = 0",
                                   "nabla^2 + c b + b c = 0",
                                   "curved D^2 = 0",
                                   "curved D is a derivation"};
    return names[i];
}

inline bool curved_piece(const CurvedContext<BasisAlgebra>& ctx, int which, const ExactChain& c)
{
    auto N = [&](const ExactChain& x) { return nabla_component(ctx, x); };
    auto B = [&](const ExactChain& x) { return curved_b(ctx, x); };
    auto C = [&](const ExactChain& x) { return c_component(ctx, x); };
    switch (which) {
    case 0:
        return is_zero_chain(B(B(c)), 2);
    case 1:
        return is_zero_chain(C(C(c)), 2);
    case 2:
        return is_zero_chain(N(B(c)) + B(N(c)), 2);
    case 3:
        return is_zero_chain(N(C(c)) + C(N(c)), 2);
    case 4:
        return is_zero_chain(N(N(c)) + C(B(c)) + B(C(c)), 2);
    default:
        return is_zero_chain(curved_D(ctx, curved_D(ctx, c)), 2);
    }
}

inline bool curved_derivation_case(const CurvedContext<BasisAlgebra>& ctx, const ExactChain& x, const ExactChain& y)
{
    auto& alg = ctx.alg;
    auto lhs = curved_D(ctx, zz_shuffle(alg, x, y, ctx.signs));
    auto rhs = zz_shuffle(alg, curved_D(ctx, x), y, ctx.signs) +
               Rational(sign_of(detail::derivation_parity(alg, x, ctx.signs))) *
                   zz_shuffle(alg, x, curved_D(ctx, y), ctx.signs);
    return is_zero_chain(lhs - rhs, 2);
}

// per_shape = 0: every degree pattern of every shape (exhaustive); otherwise that
// many random entry draws per shape
inline CurvedIdentities check_curved_identities(const SuiteOptions& o, int per_shape, int derivation_pairs,
                                                bool stop_early = false)
{
    CurvedIdentities out;
    BasisAlgebra alg{2, 2};
    CurvedContext<BasisAlgebra> ctx(alg, suite_connection(), o.signs);
    std::string scope = per_shape ? ", random draws " + o.shapes.text() : ", exhaustive " + o.shapes.text();
    for (int i = 0; i < 6; ++i) {
        out.parts[i] = detail::timed(curved_identity_name(i) + scope, [&](CheckResult& r) {
            WordGen g(2, 2, o.seed + 9);
            auto run = [&](const ExactWord& w) {
                detail::tally(r, curved_piece(ctx, i, ExactChain(w)));
                return !(stop_early && r.failures);
            };
            if (per_shape == 0) {
                for (auto& [n, k, deg] : o.shapes.enumerate(2))
                    if (!run(g.zigzag(n, k, deg)))
                        return;
                return;
            }
            for (int n = 0; n <= o.shapes.max_n; ++n)
                for (int k = 0; k <= o.shapes.max_k; k += 2)
                    for (int d = 0; d < per_shape; ++d)
                        if (!run(g.zigzag(n, k)))
                            return;
        });
        if (stop_early && out.parts[i].failures)
            return out;
    }
    out.parts[6] = detail::timed(curved_identity_name(6), [&](CheckResult& r) {
        WordGen g(2, 2, o.seed + 10);
        for (int i = 0; i < derivation_pairs; ++i) {
            auto f = random_factors(g, 2, 1);
            detail::tally(r, curved_derivation_case(ctx, f[0], f[1]));
            if (stop_early && r.failures)
                return;
        }
    });
    return out;
}

// --- rectangular complex ---------------------------------------------------------------

struct RectIdentities {
    CheckResult parts[6];
};

inline RectIdentities check_rect(const SuiteOptions& o, bool curved_only = false, bool stop_early = false)
{
    RectIdentities out;
    const char* names[6] = {"rect D^2 = 0",          "star d + d star = 0", "star^2 = 0", "star b + b star = 0",
                            "star is associative", "rect curved D^2 = 0"};
    BasisAlgebra alg{2, 2};
    CurvedContext<BasisAlgebra> ctx(alg, suite_connection(), o.signs);
    auto shapes = detail::rect_shapes(4, 4);
    std::string suffix = ", all shapes n<=2, total strands<=4, m<=2";
    for (int i = 0; i < 6; ++i) {
        if (curved_only && i != 5)
            continue;
        out.parts[i] = detail::timed(std::string(names[i]) + (i == 4 ? "" : suffix), [&](CheckResult& r) {
            WordGen g(2, 2, o.seed + 11 + i);
            if (i == 4) {
                long nonzero = 0;
                for (int c = 0; c < o.pairs; ++c) {
                    int n = g.uniform(0, 2);
                    auto a = g.word(n, {2 * g.uniform(0, 1)}), b = g.word(n, {2 * g.uniform(0, 1)}),
                         d = g.word(n, {2 * g.uniform(0, 1)});
                    glue_compatible(a, b);
                    glue_compatible(b, d);
                    int s1 = 0, s2 = 0, s3 = 0, s4 = 0;
                    auto ab = star(alg, a, b, &s1);
                    auto l = s1 ? star(alg, ab, d, &s2) : ab;
                    auto bd = star(alg, b, d, &s3);
                    auto rr = s3 ? star(alg, a, bd, &s4) : bd;
                    nonzero += s1 * s2 != 0;
                    bool ok = (s1 * s2 == 0 && s3 * s4 == 0) ||
                              is_zero_chain(ExactChain(l, s1 * s2) - ExactChain(rr, s3 * s4), 2);
                    detail::tally(r, ok);
                }
                r.note = std::to_string(nonzero) + " cases with nonzero product";
                return;
            }
            for (int n = 0; n <= 2; ++n)
                for (auto& sh : shapes)
                    for (int d = 0; d < o.rect_draws; ++d) {
                        ExactChain c(g.word(n, sh));
                        bool ok = false;
                        switch (i) {
                        case 0:
                            ok = is_zero_chain(rect_D(alg, rect_D(alg, c)), 2);
                            break;
                        case 1:
                            ok = is_zero_chain(rect_star(alg, rect_d(alg, c)) + rect_d(alg, rect_star(alg, c)), 2);
                            break;
                        case 2:
                            ok = is_zero_chain(rect_star(alg, rect_star(alg, c)), 2);
                            break;
                        case 3:
                            ok = is_zero_chain(rect_star(alg, rect_b(alg, c)) + rect_b(alg, rect_star(alg, c)), 2);
                            break;
                        default:
                            ok = is_zero_chain(rect_curved_D(ctx, rect_curved_D(ctx, c)), 2);
                        }
                        detail::tally(r, ok);
                        if (stop_early && r.failures)
                            return;
                    }
        });
    }
    return out;
}

// --- sign-convention search ----------------------------------------------------------------

struct SearchResult {
    std::string name;
    std::vector<std::string> flags;
    std::vector<Signs> passing;
    long candidates = 0;
    double seconds = 0;

    bool unique_frozen() const { return passing.size() == 1 && passing[0] == Signs{}; }
};

// enumerate every on/off combination of `flags`, keep those passing `test`
inline SearchResult search_signs(const std::string& name, const std::vector<std::string>& flags,
                                 const std::function<bool(const Signs&)>& test)
{
    SearchResult r{name, flags};
    auto all = sign_flags();
    auto t0 = detail::Clock::now();
    for (uint32_t mask = 0; mask < (1u << flags.size()); ++mask) {
        Signs s;
        for (size_t i = 0; i < flags.size(); ++i)
            if (mask >> i & 1)
                for (auto& [fname, member] : all)
                    if (fname == flags[i])
                        s.*member = true;
        ++r.candidates;
        if (test(s))
            r.passing.push_back(s);
    }
    r.seconds = std::chrono::duration<double>(detail::Clock::now() - t0).count();
    return r;
}

inline SearchResult search_zigzag_signs(const SuiteOptions& base)
{
    return search_signs("zigzag conventions (D^2 exhaustive n<=2,k<=2, derivation law)",
                        {"beta", "b-last", "derivation", "shuffle"}, [&](const Signs& s) {
                            SuiteOptions o = base;
                            o.signs = s;
                            o.shapes = ShapeSpec{2, 2};
                            return check_derivation(o, 40, true).pass() && check_zz_square_exhaustive(o, true).pass();
                        });
}

inline SearchResult search_curved_signs(const SuiteOptions& base)
{
    return search_signs("curved conventions (five sub-identities, D^2, derivation law)",
                        {"bracket", "nabla-R", "nabla-L", "c-zag-sign", "c-zag-place"}, [&](const Signs& s) {
                            SuiteOptions o = base;
                            o.signs = s;
                            o.shapes = ShapeSpec{2, 2};
                            auto r = check_curved_identities(o, 4, 20, true);
                            for (auto& p : r.parts)
                                if (!p.pass())
                                    return false;
                            return true;
                        });
}

inline SearchResult search_rect_signs(const SuiteOptions& base)
{
    return search_signs("rectangular curvature conventions (rect curved D^2)", {"rect-horizontal", "rect-vertical"},
                        [&](const Signs& s) {
                            SuiteOptions o = base;
                            o.signs = s;
                            o.rect_draws = 1;
                            return check_rect(o, true, true).parts[5].pass();
                        });
}

} // namespace zz
