#include "zigzag/suites.hpp"

#include <gtest/gtest.h>

using namespace zz;

namespace {

const FormAlgebra F22{2, 2};

bool same(const FormChain& a, const FormChain& b, int dim = 2, int size = 2)
{
    return is_zero_chain(expand_chain(BasisAlgebra{dim, size}, a - b), size);
}

PolyMatrixForm m22(std::vector<int> dx, std::vector<std::string> c) { return make_form(2, 2, {{dx, c}}); }

FormWord with_entry(FormWord w, int j, const PolyMatrixForm& e)
{
    w.e[j] = e;
    return w;
}

// entries (a; b, c; d, e) with nonzero differentials
FormWord generic_n1k2()
{
    return {1,
            {2},
            {m22({}, {"x1 x2", "0", "1", "0"}), m22({1}, {"0", "x2", "0", "0"}), m22({}, {"x1^2", "0", "0", "x2"}),
             m22({2}, {"0", "0", "x1", "0"}), m22({}, {"0", "x1 + x2^2", "0", "0"})}};
}

} // namespace

TEST(ZigzagD, SingleEntryIsPlainD)
{
    auto f = m22({}, {"x1 x2", "0", "0", "1"});
    FormChain c(FormWord{0, {0}, {f}});
    EXPECT_TRUE(same(zz_d(F22, c), FormChain(FormWord{0, {0}, {exterior_d(f)}})));
}

TEST(ZigzagD, ConstantEntriesGiveZero)
{
    auto k = m22({}, {"1", "2", "0", "3"});
    auto dx = m22({1}, {"1", "0", "0", "1"});
    FormChain c(FormWord{1, {2}, {k, dx, k, k, dx}});
    EXPECT_TRUE(zz_d(F22, c).empty());
}

TEST(ZigzagD, GenericWordMatchesSignBookkeeping)
{
    auto w = generic_n1k2();
    FormChain expect;
    int beta = 0;
    for (int j = 0; j < 5; ++j) {
        expect.add(with_entry(w, j, exterior_d(w.e[j])), Rational(sign_of(w.n + beta)));
        beta += w.e[j].degree();
    }
    auto got = zz_d(F22, FormChain(w));
    EXPECT_EQ(got.size(), 5u);
    EXPECT_TRUE(same(got, expect));
}

TEST(ZigzagB, NoColumnsGiveZero)
{
    auto f = m22({}, {"x1", "0", "0", "1"});
    FormChain c(FormWord{0, {2}, {f, f, f}});
    EXPECT_TRUE(zz_b(F22, c).empty());
}

TEST(ZigzagB, OneColumnTwoPasses)
{
    auto w = generic_n1k2();
    auto &a = w.e[0], &b = w.e[1], &c = w.e[2], &d = w.e[3], &e = w.e[4];
    // face t1 = 0 merges column 1 into the left end, face t1 = 1 into the right end
    FormChain expect;
    expect.add(FormWord{0, {2}, {wedge(a, b), c, wedge(d, e)}}, Rational(-1));
    expect.add(FormWord{0, {2}, {a, wedge(wedge(b, c), d), e}}, Rational(1));
    auto got = zz_b(F22, FormChain(w));
    EXPECT_EQ(got.size(), 2u);
    EXPECT_TRUE(same(got, expect));
}

TEST(ZigzagB, AllUnitsCollapseToOneWord)
{
    auto one = PolyMatrixForm::unit(2, 2);
    FormChain c(FormWord{2, {2}, std::vector<PolyMatrixForm>(7, one)});
    // faces p = 0, 1, 2 with signs +, -, + all give the n = 1 unit word
    FormChain expect(FormWord{1, {2}, std::vector<PolyMatrixForm>(5, one)});
    EXPECT_TRUE(same(zz_b(F22, c), expect));
}

TEST(ZigzagD, UnitWordIsClosed)
{
    EXPECT_TRUE(zz_D(F22, unit_chain(F22)).empty());
}

TEST(ZigzagD, SquaresToZeroOnGenericWords)
{
    BasisAlgebra alg{2, 2};
    WordGen g(2, 2, 7);
    ExactChain c(g.zigzag(2, 2, {1, 0, 2, 1, 0, 1, 1}));
    EXPECT_FALSE(zz_D(alg, c).empty());
    EXPECT_TRUE(is_zero_chain(zz_D(alg, zz_D(alg, c)), 2));
    for (uint64_t seed = 0; seed < 100; ++seed) {
        WordGen h(2, 2, 1000 + seed);
        ExactChain r(h.zigzag(3, 4));
        EXPECT_TRUE(is_zero_chain(zz_D(alg, zz_D(alg, r)), 2)) << "seed " << seed;
    }
}

TEST(ZigzagD, ExhaustiveSmallShapes)
{
    SuiteOptions o;
    auto r = check_zz_square_exhaustive(o);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.cases, o.shapes.count(2));
}

TEST(ZigzagD, FlippedLastFaceIsDetected)
{
    SuiteOptions o;
    o.signs.b_last_negated = true;
    EXPECT_FALSE(check_zz_square_exhaustive(o, true).pass());
}

TEST(Shuffles, Counts)
{
    EXPECT_EQ(shuffles(1, 1).size(), 2u);
    EXPECT_EQ(shuffles(2, 2).size(), 6u);
    EXPECT_EQ(shuffles(3, 0).size(), 1u);
}

TEST(Shuffles, ReversedSignDiffersByNM)
{
    for (auto& s : shuffles(2, 1))
        EXPECT_EQ(shuffle_sign(s, true), sign_of(2 * 1) * shuffle_sign(s, false));
    for (auto& s : shuffles(2, 3))
        EXPECT_EQ(shuffle_sign(s, true), sign_of(2 * 3) * shuffle_sign(s, false));
}

TEST(Shuffle, UnitLaw)
{
    BasisAlgebra alg{2, 2};
    WordGen g(2, 2, 3);
    auto one = unit_chain(alg);
    for (int i = 0; i < 20; ++i) {
        auto x = random_small_zigzag(g);
        EXPECT_TRUE(is_zero_chain(zz_shuffle(alg, x, one) - x, 2));
        EXPECT_TRUE(is_zero_chain(zz_shuffle(alg, one, x) - x, 2));
    }
}

TEST(Shuffle, SummandCountIsBinomial)
{
    BasisAlgebra alg{2, 2};
    WordGen g(2, 2, 5);
    auto x = g.zigzag(2, 2);
    auto y = g.zigzag(1, 2);
    glue_compatible(x, y);
    EXPECT_EQ(zz_shuffle(alg, ExactChain(x), ExactChain(y)).size(), 3u);
    auto z = g.zigzag(2, 0);
    glue_compatible(x, z);
    EXPECT_EQ(zz_shuffle(alg, ExactChain(x), ExactChain(z)).size(), 6u);
}

TEST(Shuffle, AssociativeAndDerivation)
{
    SuiteOptions o;
    o.pairs = 60;
    EXPECT_TRUE(check_associativity(o).pass());
    EXPECT_TRUE(check_derivation(o, 60).pass());
}

TEST(SignSearch, ZigzagConventionIsUnique)
{
    auto r = search_zigzag_signs(SuiteOptions{});
    EXPECT_TRUE(r.unique_frozen()) << r.passing.size() << " passing";
}

TEST(Interval, DegreeZeroWordIsD)
{
    FormAlgebra alg{2, 1};
    auto f = make_form(2, 1, {{{}, {"x1^2 x2"}}});
    FormChain c(FormWord{0, {1}, {f, PolyMatrixForm::unit(2, 1)}});
    FormChain expect(FormWord{0, {1}, {exterior_d(f), PolyMatrixForm::unit(2, 1)}});
    EXPECT_TRUE(same(interval_D(alg, c), expect, 2, 1));
}

TEST(Interval, SquaresToZero)
{
    BasisAlgebra alg{3, 1};
    WordGen g(3, 1, 11);
    for (int i = 0; i < 30; ++i) {
        ExactChain c(g.word(3, {1}));
        EXPECT_TRUE(is_zero_chain(interval_D(alg, interval_D(alg, c)), 1));
    }
}

TEST(Interval, MatrixShuffleConcatenatesMatrices)
{
    BasisAlgebra alg{2, 2};
    Basis x0{}, x1{}, y0{}, y1{};
    x0.row = 0, x0.col = 1; // E12
    y1.row = 1, y1.col = 0; // E21
    y1.exps[0] = 1;
    ExactChain x(ExactWord{0, {1}, {x0, x1}}), y(ExactWord{0, {1}, {y0, y1}});
    auto xy = interval_shuffle_mat(alg, x, y);
    ASSERT_EQ(xy.size(), 1u);
    auto& w = xy.begin()->first;
    EXPECT_EQ(w.e.back().row, 0); // E12 E21 = E11
    EXPECT_EQ(w.e.back().col, 0);
    EXPECT_TRUE(w.e.front().is_identity());
    auto yx = interval_shuffle_mat(alg, y, x);
    ASSERT_EQ(yx.size(), 1u);
    EXPECT_EQ(yx.begin()->first.e.back().row, 1); // E21 E12 = E22
}

TEST(Collapse, NoPassesIsIdentity)
{
    FormAlgebra alg{2, 1};
    auto f = make_form(2, 1, {{{1}, {"x2"}}});
    auto c = collapse(alg, FormChain(FormWord{0, {0}, {f}}));
    FormChain expect(FormWord{0, {1}, {f, PolyMatrixForm::unit(2, 1)}});
    EXPECT_TRUE(same(c, expect, 2, 1));
}

TEST(Collapse, OneColumnTwoPasses)
{
    FormAlgebra alg{4, 1};
    auto f = [](std::vector<int> dx, std::string c) { return make_form(4, 1, {{dx, {c}}}); };
    auto a = f({}, "x4"), b = f({1}, "1"), c = f({}, "x1"), d = f({}, "x2"), e = f({3}, "1");
    // reordering a b c d e into a e | b d | c passes e over b, c, d: sign (-1)^{1*1}
    FormChain expect(FormWord{1, {1}, {wedge(a, e), wedge(b, d), c}}, Rational(-1));
    EXPECT_TRUE(same(collapse(alg, FormChain(FormWord{1, {2}, {a, b, c, d, e}})), expect, 4, 1));
}

TEST(Collapse, ChainAndAlgebraMap)
{
    SuiteOptions o;
    o.pairs = 100;
    EXPECT_TRUE(check_collapse(o).pass());
    EXPECT_TRUE(check_collapse_mat(o).pass());
    EXPECT_TRUE(check_interval(o).pass());
}

TEST(Collapse, MatrixPartsMultiplyInTraversalOrder)
{
    BasisAlgebra alg{4, 2};
    std::vector<std::pair<int, int>> units = {{0, 1}, {1, 0}, {0, 1}, {1, 1}, {1, 0}};
    ExactWord w{1, {2}, {}};
    for (int j = 0; j < 5; ++j) {
        Basis b{};
        b.row = int8_t(units[j].first);
        b.col = int8_t(units[j].second);
        b.exps[j % 4] = 1;
        w.e.push_back(b);
    }
    auto c = collapse_mat(alg, ExactChain(w));
    ASSERT_EQ(c.size(), 1u);
    auto& v = c.begin()->first;
    // E12 E21 E12 E22 E21 = E11
    EXPECT_EQ(v.e.back().row, 0);
    EXPECT_EQ(v.e.back().col, 0);
    for (int j = 0; j + 1 < int(v.e.size()); ++j)
        EXPECT_TRUE(v.e[j].is_identity());
}

TEST(Collapse, IdentityMatricesAgreeWithScalarCollapse)
{
    BasisAlgebra scalar{4, 1}, mat{4, 2};
    auto g = collapse_generator(1, 9);
    for (int i = 0; i < 30; ++i) {
        auto w = g.zigzag(g.uniform(0, 2), 2 * g.uniform(0, 1));
        for (auto& e : w.e)
            e.row = e.col = -1;
        EXPECT_EQ(collapse_mat(mat, ExactChain(w)), collapse(scalar, ExactChain(w)));
    }
}

TEST(GridText, ShowsPassesAndEndpoints)
{
    auto w = generic_n1k2();
    auto s = grid_text(F22, w);
    EXPECT_NE(s.find("n=1"), std::string::npos);
    EXPECT_EQ(std::count(s.begin(), s.end(), '|'), 2);
}
