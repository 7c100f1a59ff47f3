#include "doctest.h"
#include "pfafflab/series.hpp"

#include <random>

using namespace pfl;

namespace {

LayoutPtr lay2(int cap) { return make_layout({{"t", cap}, {"u", cap}}, cap); }

TruncatedSeries rand_series(const LayoutPtr& lay, std::mt19937_64& rng, int nterms) {
    TruncatedSeries s(lay);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
    for (int t = 0; t < nterms; ++t) {
        Mono m;
        m.e.assign(lay->var_count(), 0);
        int w = 0;
        for (int tries = 0; tries < 4; ++tries) {
            int p = static_cast<int>(rng() % lay->var_count());
            int wt = lay->var_weight(p);
            if (w + wt > lay->total_cap()) continue;
            m.e[p] += 1;
            w += wt;
        }
        m.w = w;
        s.add_term(m, Rat(num(rng), den(rng)));
    }
    return s;
}

}  // namespace

TEST_CASE("basic arithmetic and grading truncation") {
    auto lay = lay2(2);
    auto t1 = TruncatedSeries::variable(lay, 0, 1);
    auto t2 = TruncatedSeries::variable(lay, 0, 2);
    auto one = TruncatedSeries::constant(lay, Rat(1));

    auto sq = t1 * t1;
    CHECK(sq.degree() == 2);
    CHECK(!sq.is_zero());
    CHECK((t1 * one) == t1);
    // weight 3 exceeds cap 2
    CHECK((t2 * t1).is_zero());
}

TEST_CASE("channel mismatch is a structural error") {
    auto a = TruncatedSeries::variable(lay2(3), 0, 1);
    auto b = TruncatedSeries::variable(make_layout({{"t", 3}}, 3), 0, 1);
    CHECK_THROWS_AS((void)(a + b), structural_error);
}

TEST_CASE("ring laws on random samples") {
    auto lay = lay2(5);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 25; ++it) {
        auto a = rand_series(lay, rng, 4);
        auto b = rand_series(lay, rng, 4);
        auto c = rand_series(lay, rng, 4);
        CHECK((a * b) == (b * a));
        CHECK(((a * b) * c) == (a * (b * c)));
        CHECK((a * (b + c)) == (a * b + a * c));
    }
}

TEST_CASE("truncation coherence: product at higher cap restricts to lower cap") {
    std::mt19937_64 rng(11);
    auto hi = lay2(8);
    for (int it = 0; it < 10; ++it) {
        auto a = rand_series(hi, rng, 5);
        auto b = rand_series(hi, rng, 5);
        auto prod_hi = (a * b).truncated(4);
        auto prod_lo = a.truncated(4) * b.truncated(4);
        CHECK(prod_hi == prod_lo);
    }
}

TEST_CASE("miwa shift: base examples") {
    auto lay = lay2(3);
    auto t1 = TruncatedSeries::variable(lay, 0, 1);
    auto one = TruncatedSeries::constant(lay, Rat(1));

    // f = t_1, shift by -[z^{-1}] -> t_1 - z^{-1}
    auto L = t1.miwa_shift(0, -1, Rat(1), -1);
    CHECK(L.coeff_z(0) == t1);
    CHECK(L.coeff_z(-1) == -one);
    CHECK(L.coeff_z(-2).is_zero());

    // constants are unmoved
    auto Lc = one.miwa_shift(0, -1, Rat(1), -1);
    CHECK(Lc.coeff_z(0) == one);
    CHECK(Lc.coeff_z(-1).is_zero());

    // s_2 = t_2 + t_1^2/2 shifted by -[z^{-1}] -> s_2 - s_1 z^{-1}, z^{-2} parts cancel
    auto t2 = TruncatedSeries::variable(lay, 0, 2);
    auto s2 = t2 + (t1 * t1).scaled(Rat(1, 2));
    auto Ls = s2.miwa_shift(0, -1, Rat(1), -1);
    CHECK(Ls.coeff_z(0) == s2);
    CHECK(Ls.coeff_z(-1) == -t1);
    CHECK(Ls.coeff_z(-2).is_zero());
}

TEST_CASE("miwa involution: +c then -c recovers f in the z-free part") {
    std::mt19937_64 rng(3);
    auto lay = lay2(5);
    for (int it = 0; it < 10; ++it) {
        auto f = rand_series(lay, rng, 5);
        auto L1 = f.miwa_shift(0, +1, Rat(2, 3), -1);
        // apply the opposite shift to every z-coefficient, collect z^0
        TruncatedSeries back(lay);
        for (const auto& [p, s] : L1.parts()) {
            auto L2 = s.miwa_shift(0, -1, Rat(2, 3), -1);
            back += L2.coeff_z(-p);
        }
        CHECK(back == f);
    }
}

TEST_CASE("residue examples and total-derivative annihilation") {
    auto lay = lay2(3);
    auto one = TruncatedSeries::constant(lay, Rat(1));
    auto t1 = TruncatedSeries::variable(lay, 0, 1);
    auto t2 = TruncatedSeries::variable(lay, 0, 2);

    LaurentSeries L(lay);
    L.add_part(-1, one);
    CHECK(L.residue() == one);
    CHECK(LaurentSeries::from_series(one, 0).residue().is_zero());

    LaurentSeries M(lay);
    M.add_part(-1, t1);
    M.add_part(-2, t2);
    CHECK(M.residue() == t1);

    std::mt19937_64 rng(5);
    for (int it = 0; it < 10; ++it) {
        LaurentSeries R(lay);
        for (int p = -3; p <= 3; ++p) R.add_part(p, rand_series(lay, rng, 3));
        CHECK(R.dz().residue().is_zero());
    }
}

TEST_CASE("partial derivatives") {
    auto lay = lay2(4);
    auto t1 = TruncatedSeries::variable(lay, 0, 1);
    auto t2 = TruncatedSeries::variable(lay, 0, 2);

    CHECK((t1 * t1).partial(0, 1) == t1.scaled(Rat(2)));
    CHECK(t1.partial(0, 2).is_zero());
    // d/dt_1 s_2 = s_1
    auto s2 = t2 + (t1 * t1).scaled(Rat(1, 2));
    CHECK(s2.partial(0, 1) == t1);
}

TEST_CASE("per-channel caps") {
    auto lay = make_layout({{"s", 4}, {"sb", 4}}, 8, {2, 2});
    auto s1 = TruncatedSeries::variable(lay, 0, 1);
    auto b1 = TruncatedSeries::variable(lay, 1, 1);
    auto p = s1 * s1 * b1;  // s-weight 2, sb-weight 1: fits
    CHECK(!p.is_zero());
    CHECK((p * s1).is_zero());  // s-weight 3 over channel cap
    CHECK(!(p * b1).is_zero());
}

TEST_CASE("exp_series of a quadratic cross term") {
    auto lay = make_layout({{"s", 2}, {"sb", 2}}, 4);
    auto u = TruncatedSeries::variable(lay, 0, 1) * TruncatedSeries::variable(lay, 1, 1);
    auto e = exp_series(u);
    // 1 + u + u^2/2
    auto expect = TruncatedSeries::constant(lay, Rat(1)) + u + (u * u).scaled(Rat(1, 2));
    CHECK(e == expect);
}

TEST_CASE("miwa shift into a graded x variable") {
    auto lay = make_layout({{"t", 3}, {"x", 1}}, 6, {3, 3});
    auto t1 = TruncatedSeries::variable(lay, 0, 1);
    auto t2 = TruncatedSeries::variable(lay, 0, 2);
    auto x = TruncatedSeries::variable(lay, 1, 1);
    auto s2 = t2 + (t1 * t1).scaled(Rat(1, 2));
    // t_k -> t_k - x^k/k
    auto sh = s2.miwa_shift_var(0, -1, 1);
    auto expect = s2 - t1 * x + (x * x).scaled(Rat(1, 2)) - (x * x).scaled(Rat(1, 2)) * TruncatedSeries::constant(lay, Rat(0));
    // s_2(t - [x]) = s_2 - s_1 x + 0*x^2  (since s_2([x]) pattern: x^2/2 - x^2/2... compute directly)
    // direct: t2 - x^2/2 + (t1 - x)^2/2 = t2 + t1^2/2 - t1 x + x^2/2 - x^2/2
    CHECK(sh == (s2 - t1 * x));
    (void)expect;
}
