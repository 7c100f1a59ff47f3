#include "doctest.h"
#include "pfafflab/schur.hpp"

using namespace pfl;

namespace {
LayoutPtr tlay(int cap) { return make_layout({{"t", cap}}, cap); }
}

TEST_CASE("elementary schur polynomials from the generating function") {
    auto lay = tlay(4);
    auto ring = series_ring(lay);
    auto vals = channel_values(lay, 0, 4);
    auto s = schur_row(vals, 4, ring);

    CHECK(s[0] == ring.one);
    CHECK(s[1] == TruncatedSeries::variable(lay, 0, 1));
    auto t1 = vals[0], t2 = vals[1], t3 = vals[2];
    CHECK(s[2] == t2 + (t1 * t1).scaled(Rat(1, 2)));
    auto s3 = t3 + t1 * t2 + (t1 * t1 * t1).scaled(Rat(1, 6));
    CHECK(s[3] == s3);
    // homogeneity
    for (int k = 0; k <= 4; ++k)
        for (const auto& [m, c] : s[k].terms()) CHECK(m.w == k);
}

TEST_CASE("specialization at the miwa point t_k = x^k/k gives s_k = x^k") {
    // channels: t (symbolic is replaced by values built from x)
    auto lay = make_layout({{"x", 1}}, 5);
    auto ring = series_ring(lay);
    auto x = TruncatedSeries::variable(lay, 0, 1);
    std::vector<TruncatedSeries> vals;
    TruncatedSeries xp = x;
    for (int k = 1; k <= 5; ++k) {
        vals.push_back(xp.scaled(Rat(1, k)));
        xp = xp * x;
    }
    auto s = schur_row(vals, 5, ring);
    TruncatedSeries xk = ring.one;
    for (int k = 0; k <= 5; ++k) {
        CHECK(s[k] == xk);
        xk = xk * x;
    }
}

TEST_CASE("jacobi-trudi base cases fix the index convention") {
    auto lay = tlay(4);
    auto ring = series_ring(lay);
    auto srow = schur_row(channel_values(lay, 0, 4), 4, ring);

    CHECK(schur_jt({}, srow, ring) == ring.one);
    CHECK(schur_jt({0}, srow, ring) == ring.one);
    CHECK(schur_jt({1}, srow, ring) == srow[1]);
    CHECK(schur_jt({2}, srow, ring) == srow[2]);
    // staircase normalizes to 1
    CHECK(schur_jt({1, 0}, srow, ring) == ring.one);
    CHECK(schur_jt({2, 1, 0}, srow, ring) == ring.one);
    CHECK_THROWS_AS(schur_jt({1, 1}, srow, ring), structural_error);
}

TEST_CASE("jacobi-trudi homogeneity") {
    auto lay = tlay(6);
    auto ring = series_ring(lay);
    auto srow = schur_row(channel_values(lay, 0, 6), 6, ring);
    for (const StrictSeq& h : {StrictSeq{3, 1}, StrictSeq{4, 2, 0}, StrictSeq{3, 2, 1}}) {
        auto s = schur_jt(h, srow, ring);
        int w = strict_weight(h);
        for (const auto& [m, c] : s.terms()) CHECK(m.w == w);
        CHECK(!s.is_zero());
    }
}

TEST_CASE("single-variable vanishing at t = [x]") {
    auto lay = make_layout({{"x", 1}}, 6);
    auto ring = series_ring(lay);
    auto x = TruncatedSeries::variable(lay, 0, 1);
    std::vector<TruncatedSeries> vals;
    TruncatedSeries xp = x;
    for (int k = 1; k <= 6; ++k) {
        vals.push_back(xp.scaled(Rat(1, k)));
        xp = xp * x;
    }
    auto srow = schur_row(vals, 6, ring);

    // lambda with one nonzero row: h = (m + N - 1, N-2, ..., 0) -> x^m
    auto one_row = schur_jt({4, 1, 0}, srow, ring);  // lambda = (2,0,0), N=3
    TruncatedSeries x2 = x * x;
    CHECK(one_row == x2);
    // more than one nonzero row vanishes
    CHECK(schur_jt({4, 2, 0}, srow, ring).is_zero());  // lambda = (2,1,0)
    CHECK(schur_jt({2, 1}, srow, ring).is_zero());     // lambda = (1,1)
}
