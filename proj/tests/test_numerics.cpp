#include "zigzag/bundled.hpp"
#include "zigzag/differential.hpp"
#include "zigzag/shuffle.hpp"
#include "zigzag/transport.hpp"

#include <gtest/gtest.h>

using namespace zz;

namespace {

PolyMatrixForm s1(std::vector<int> dx, const std::string& c) { return make_form(2, 1, {{dx, {c}}}); }

Family line() { return Family::parse(1, {"t", "0"}, false); }

const std::vector<double> u0{0.4};

double scalar_it(const FormWord& w, const Family& fam, const QuadratureSpec& q = {})
{
    return it_word(w, fam, u0, {}, q)(0, 0);
}

} // namespace

TEST(IteratedIntegral, ZeroColumnsEvaluateAtTheStart)
{
    auto fam = Family::parse(1, {"2 + t", "u1 + 3 t"}, false);
    FormWord w{0, {0}, {s1({}, "x1 x2 + 1")}};
    EXPECT_NEAR(scalar_it(w, fam), 2 * 0.4 + 1, 1e-14);
}

TEST(IteratedIntegral, SingleColumnIsLineIntegral)
{
    EXPECT_NEAR(scalar_it(ordered_word(s1({1}, "1"), 1), line()), 1.0, 1e-14);
    EXPECT_NEAR(scalar_it(ordered_word(s1({1}, "x1"), 1), line()), 0.5, 1e-14);
    // n-th ordered integral of dx1 along [0, 1] is 1/n!
    EXPECT_NEAR(scalar_it(ordered_word(s1({1}, "1"), 3), line()), 1.0 / 6, 1e-13);
}

TEST(IteratedIntegral, UnitWordIsIdentity)
{
    auto fam = bundled::path_families()[0];
    Mat v = it_word(FormWord{0, {0}, {PolyMatrixForm::unit(2, 2)}}, fam, {0.1, -0.2}, {}, QuadratureSpec{});
    EXPECT_LT(max_abs(v - Mat::Identity(2, 2)), 1e-15);
}

TEST(IteratedIntegral, ZeroConnectionTransportChangesNothing)
{
    auto fam = bundled::path_families()[1];
    CompiledForm zero(PolyMatrixForm(2, 2));
    QuadratureSpec q;
    for (auto& c : bundled::chains()) {
        int p = chain_shifted_degree(bundled::chain_algebra(), c.chain);
        if (p > fam.params())
            continue;
        auto smp = bundled::samples(p)[0];
        Dirs dirs(smp.dirs.begin(), smp.dirs.begin() + p);
        FamilyTransport tr(zero, fam, smp.u, q.ode_steps);
        Mat plain = it_chain(c.chain, fam, smp.u, dirs, q, 2);
        EXPECT_LT(max_abs(plain - it_chain(c.chain, fam, smp.u, dirs, q, 2, &tr)), 1e-14) << c.name;
    }
}

TEST(ParamDerivative, Examples)
{
    FormFn constant = [](const std::vector<double>&, const Dirs&) { return Mat::Identity(2, 2).eval(); };
    FormFn coord = [](const std::vector<double>& u, const Dirs&) { return Mat::Constant(1, 1, u[0]); };
    EXPECT_LT(max_abs(d_param(constant, {0.3}, {{1.0}}, 1e-4)), 1e-15);
    EXPECT_NEAR(d_param(coord, {0.3}, {{1.0}}, 1e-4)(0, 0), 1.0, 1e-12);
    EXPECT_THROW(d_param(coord, {0.3}, {{1.0}}, 0), std::invalid_argument);
}

TEST(ChainMap, ConstantZeroColumnChain)
{
    FormChain c(FormWord{0, {0}, {bundled::entry("f")}});
    std::vector<Sample> smp{{u0, {{1.0}}}};
    // a 0-form evaluated at a fixed start point does not depend on u
    auto still = Family::parse(1, {"t", "t^2"}, false);
    EXPECT_LT(chain_map_residual(c, zz_D(bundled::chain_algebra(), c), still, smp, QuadratureSpec{}, 2), 1e-9);
}

TEST(ChainMap, BundledChainOnFirstFamily)
{
    auto fam = bundled::path_families()[0];
    auto alg = bundled::chain_algebra();
    QuadratureSpec q;
    for (auto& c : bundled::chains()) {
        int p = chain_shifted_degree(alg, c.chain);
        if (p + 1 > fam.params())
            continue;
        auto r = chain_map_residual(c.chain, zz_D(alg, c.chain), fam, bundled::samples(p), q, 2);
        EXPECT_LE(r, 1e-6) << c.name;
    }
}

TEST(AlgebraMap, DegreeZeroChainSquared)
{
    auto fam = bundled::path_families()[2];
    auto alg = bundled::chain_algebra();
    auto ch = bundled::chains();
    QuadratureSpec q;
    for (auto& x : ch) {
        if (chain_shifted_degree(alg, x.chain) != 0)
            continue;
        auto u = bundled::samples(0)[0].u;
        auto it = [&](const FormChain& c) { return it_chain(c, fam, u, {}, q, 2); };
        Mat lhs = it(zz_shuffle(alg, x.chain, x.chain));
        EXPECT_LT(max_abs(lhs - it(x.chain) * it(x.chain)), 1e-9) << x.name;
    }
}

TEST(Transport, ZeroConnectionIsIdentity)
{
    CompiledForm zero(PolyMatrixForm(2, 2));
    auto r = parallel_transport(zero, bundled::transport_path(), u0, 0, 1, TransportMode::ode, QuadratureSpec{});
    EXPECT_LT(max_abs(r.value - Mat::Identity(2, 2)), 1e-15);
}

TEST(Transport, AbelianIsExponential)
{
    auto a = bundled::abelian_connection();
    CompiledForm A(a);
    auto path = bundled::transport_path();
    double exact = abelian_transport(a, path, u0);
    QuadratureSpec q;
    EXPECT_NEAR(parallel_transport(A, path, u0, 0, 1, TransportMode::ode, q).value(0, 0), exact, 1e-9);
    EXPECT_NEAR(holonomy1(A, path, u0, 14, q).value(0, 0), exact, 1e-9);
}

TEST(Transport, NilpotentSeriesStopsAfterOneTerm)
{
    CompiledForm A(bundled::nilpotent_connection());
    Mat expect = Mat::Identity(2, 2);
    expect(0, 1) = 1;
    for (int N = 1; N <= 4; ++N)
        EXPECT_LT(max_abs(holonomy1(A, bundled::nilpotent_path(), u0, N, QuadratureSpec{}).value - expect), 1e-14);
}

TEST(Transport, CompositionAndTrivialInterval)
{
    CompiledForm A(bundled::connection());
    auto path = bundled::transport_path();
    QuadratureSpec q;
    q.ode_steps = 2000;
    auto P = [&](double a, double b) { return parallel_transport(A, path, u0, a, b, TransportMode::ode, q).value; };
    EXPECT_LT(max_abs(P(0.3, 0.3) - Mat::Identity(2, 2)), 1e-15);
    EXPECT_LT(max_abs(P(0, 0.3) * P(0.3, 1) - P(0, 1)), 1e-9);
    EXPECT_THROW(P(0.5, 0.2), std::invalid_argument);
}

TEST(Transport, ReparametrizationInvariant)
{
    CompiledForm A(bundled::connection());
    QuadratureSpec q;
    q.ode_steps = 2000;
    auto a = Family::parse(1, {"t", "t^2"}, false), b = Family::parse(1, {"t^2", "t^4"}, false);
    auto P = [&](const Family& f) { return parallel_transport(A, f, u0, 0, 1, TransportMode::ode, q).value; };
    EXPECT_LT(max_abs(P(a) - P(b)), 1e-9);
}

TEST(Transport, SeriesMatchesOrderedWords)
{
    auto Af = bundled::connection();
    CompiledForm A(Af);
    auto path = bundled::transport_path();
    QuadratureSpec q;
    for (int N = 0; N <= 3; ++N) {
        Mat words = Mat::Zero(2, 2);
        for (int n = 0; n <= N; ++n)
            words += it_word(ordered_word(Af, n), path, u0, {}, q);
        EXPECT_LT(max_abs(holonomy1(A, path, u0, N, q).value - words), 1e-10) << N;
    }
}

TEST(Holonomy2, ZeroCurvingIsIdentityOnBigons)
{
    CompiledForm A(bundled::connection()), zero(PolyMatrixForm(2, 2));
    for (auto& fam : bundled::bigons()) {
        auto h = holonomy2({&A, &zero}, fam, u0, 4, QuadratureSpec{});
        EXPECT_LT(max_abs(h.value - Mat::Identity(2, 2)), 1e-12);
    }
}

TEST(Holonomy2, AbelianIsExponentialOfArea)
{
    auto B = bundled::abelian_curving();
    CompiledForm cB(B), zero(PolyMatrixForm(2, 1));
    QuadratureSpec q;
    for (auto& fam : bundled::bigons())
        EXPECT_NEAR(holonomy2({&zero, &cB}, fam, u0, 14, q).value(0, 0), abelian_holonomy2(B, fam, u0), 1e-9);
}

TEST(Holonomy2, UnitSquareArea)
{
    auto sq = Family::parse(1, {"t", "s"}, true);
    auto B = s1({1, 2}, "1");
    FormChain c = surface_chain(B, 1);
    EXPECT_NEAR(it_chain(c, sq, u0, {}, QuadratureSpec{}, 1)(0, 0), 1.0, 1e-13);
}

TEST(Holonomy2, SeriesMatchesSurfaceWords)
{
    auto Bf = bundled::curving();
    CompiledForm A(bundled::connection()), B(Bf);
    QuadratureSpec q;
    auto fam = bundled::bigons()[0];
    FamilyTransport tr(A, fam, u0, q.ode_steps);
    Mat words = Mat::Zero(2, 2);
    for (int m = 0; m <= 2; ++m) {
        words += it_chain(surface_chain(Bf, m), fam, u0, {}, q, 2, &tr);
        EXPECT_LT(max_abs(holonomy2({&A, &B}, fam, u0, m, q).value - words), 1e-9) << m;
    }
}

TEST(Holonomy2, BigonAgreesWithOde)
{
    CompiledForm A(bundled::connection()), B(bundled::curving());
    QuadratureSpec q;
    auto fam = bundled::bigons()[0];
    SurfaceData s{&A, &B};
    EXPECT_LT(max_abs(holonomy2(s, fam, u0, 6, q).value - ode_holonomy2(s, fam, u0, 400, q)), 1e-6);
}

TEST(Holonomy2, SquareNeedsSquareMode)
{
    CompiledForm A(bundled::connection()), B(bundled::curving());
    QuadratureSpec q;
    SurfaceData s{&A, &B};
    auto sq = bundled::square();
    EXPECT_THROW(holonomy2(s, sq, u0, 6, q), std::invalid_argument);
    auto h = holonomy2(s, sq, u0, 6, q, true);
    Mat ode = ode_holonomy2(s, sq, u0, 400, q);
    EXPECT_LT(max_abs(h.value - ode), 1e-6);
    EXPECT_GT(max_abs(h.series * h.left_edge - ode), 1e-6);
}

TEST(Holonomy2, RejectsMismatchedData)
{
    CompiledForm A(bundled::connection()), B1(make_form(2, 1, {{{1, 2}, {"1"}}}));
    auto fam = bundled::bigons()[0];
    EXPECT_THROW(holonomy2({&A, &B1}, fam, u0, 2, QuadratureSpec{}), std::invalid_argument);
    EXPECT_THROW(holonomy2({&A, nullptr}, fam, u0, 2, QuadratureSpec{}), std::invalid_argument);
    EXPECT_THROW(holonomy2({&A, &A}, bundled::transport_path(), u0, 2, QuadratureSpec{}), std::invalid_argument);
}

TEST(CurvedIntegral, ZeroConnectionMatchesFlat)
{
    auto fam = bundled::path_families()[2];
    CompiledForm zero(PolyMatrixForm(2, 2));
    auto c = bundled::chains()[1].chain;
    auto u = bundled::samples(0)[0].u;
    QuadratureSpec q;
    Mat flat = it_chain(c, fam, u, {}, q, 2);
    EXPECT_LT(max_abs(it_curved(zero, c, fam, u, {}, q, InsertionMode::resummed) - flat), 1e-14);
    EXPECT_LT(max_abs(it_curved(zero, c, fam, u, {}, q, InsertionMode::series) - flat), 1e-14);
}

TEST(CurvedIntegral, UnitWordIsIdentity)
{
    CompiledForm A(bundled::connection());
    FormChain one(FormWord{0, {0}, {PolyMatrixForm::unit(2, 2)}});
    for (auto mode : {InsertionMode::resummed, InsertionMode::series})
        EXPECT_LT(max_abs(it_curved(A, one, bundled::transport_path(), u0, {}, QuadratureSpec{}, mode) -
                          Mat::Identity(2, 2)),
                  1e-15);
}

TEST(CurvedIntegral, NilpotentSeriesIsExact)
{
    CompiledForm A(bundled::nilpotent_connection());
    auto path = Family::parse(1, {"t", "u1 t"}, false);
    auto f = make_form(2, 2, {{{}, {"1 + x1", "x2", "x1^2", "2"}}});
    auto a = make_form(2, 2, {{{2}, {"x1", "1", "0", "x2"}}});
    FormChain c(FormWord{1, {2}, {f, a, f, f, f}});
    QuadratureSpec q;
    q.ode_steps = 200;
    Mat r = it_curved(A, c, path, u0, {}, q, InsertionMode::resummed);
    for (int Q : {1, 6}) {
        q.trunc = Q;
        EXPECT_LT(max_abs(r - it_curved(A, c, path, u0, {}, q, InsertionMode::series)), 1e-13) << Q;
    }
}

TEST(CurvedIntegral, SeriesApproachesResummed)
{
    CompiledForm A(bundled::connection());
    auto fam = bundled::path_families()[0];
    auto c = bundled::chains()[1].chain;
    auto u = bundled::samples(0)[0].u;
    QuadratureSpec q;
    q.points = 12;
    Mat r = it_curved(A, c, fam, u, {}, q, InsertionMode::resummed);
    double prev = 1e300;
    for (int Q : {1, 3, 6}) {
        q.trunc = Q;
        double gap = max_abs(r - it_curved(A, c, fam, u, {}, q, InsertionMode::series));
        EXPECT_LT(gap, prev) << Q;
        prev = gap;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(CurvedIntegral, SeriesRejectsRectangularWords)
{
    CompiledForm A(bundled::connection()), B(bundled::curving());
    auto fam = bundled::bigons()[0];
    SeriesInsertions ins(A, fam, u0, 4, QuadratureSpec{});
    EXPECT_THROW(it_chain(surface_chain(bundled::curving(), 1), fam, u0, {}, QuadratureSpec{}, 2, &ins),
                 std::invalid_argument);
}

TEST(RectIntegral, BareBlocksMultiplyPointValues)
{
    auto fam = bundled::bigons()[0];
    auto f = s1({}, "1 + x1"), g = s1({}, "x2^2 - 3");
    FormWord w{0, {0, 0}, {f, g}};
    // both k = 0 blocks sit at t = 0: s = 0 and s = 1 ends of the left edge
    double x[kMaxVars], v[kMaxVars];
    fam.eval(u0.data(), 0, 0, x, v, nullptr);
    double fv = 1 + x[0];
    fam.eval(u0.data(), 0, 1, x, v, nullptr);
    double gv = x[1] * x[1] - 3;
    EXPECT_NEAR(scalar_it(w, fam), fv * gv, 1e-13);
}

TEST(RectIntegral, ChainMapOnBigon)
{
    auto fam = bundled::bigons()[0];
    auto alg = bundled::chain_algebra();
    using bundled::entry;
    QuadratureSpec q;
    q.points = 12;
    std::vector<Sample> smp{{u0, {{1.0}}}, {{0.7}, {{-1.0}}}};
    // one column, blocks {2, 2, 0}, two 1-forms: shifted degree 0
    FormWord w{1, {2, 2, 0}, {}};
    for (int j = 0; j < word_size(w.n, w.strands); ++j)
        w.e.push_back(entry(j == 1 ? "a" : j == 6 ? "c" : j % 2 ? "f" : "g"));
    FormChain c(w);
    ASSERT_EQ(chain_shifted_degree(alg, c), 0);
    auto Dc = rect_D(alg, c);
    EXPECT_GT(max_abs(it_chain(Dc, fam, u0, {{1.0}}, q, 2)), 1.0);
    EXPECT_LE(chain_map_residual(c, Dc, fam, smp, q, 2), 1e-5);
    EXPECT_GT(chain_map_residual(c, Dc - rect_star(alg, c), fam, smp, q, 2), 1e-2);

    CompiledForm A(bundled::connection());
    CurvedContext<FormAlgebra> ctx(alg, bundled::connection());
    EXPECT_LE(chain_map_residual(c, rect_curved_D(ctx, c), fam, smp, q, 2, &A), 1e-5);
}
