#include "doctest.h"
#include "pfafflab/skewlin.hpp"

#include <random>

using namespace pfl;

namespace {

Rat rrat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
    int n = num(rng);
    if (n == 0) n = 1;
    return Rat(n, den(rng));
}

DenseMat<Rat> rand_skew(std::mt19937_64& rng, int n) {
    DenseMat<Rat> M(n, n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            M.at(i, j) = rrat(rng);
            M.at(j, i) = -M.at(i, j);
        }
    return M;
}

DenseMat<Rat> rand_mat(std::mt19937_64& rng, int n) {
    DenseMat<Rat> M(n, n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M.at(i, j) = rrat(rng);
    return M;
}

QuasiSkew rand_quasi(std::mt19937_64& rng, int n, bool with_a = true) {
    QuasiSkew q;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) q.set_A(i, j, rrat(rng));
    if (with_a)
        for (int i = 0; i < n; ++i) q.a[i] = rrat(rng);
    return q;
}

}  // namespace

TEST_CASE("determinant basics") {
    auto ring = rat_ring();
    DenseMat<Rat> one(1, 1, Rat(1));
    CHECK(det_bareiss(one) == 1);
    DenseMat<Rat> neg(1, 1, Rat(-4));
    CHECK(det_bareiss(neg) == -4);
    DenseMat<Rat> sk(2, 2, Rat(0));
    sk.at(0, 1) = Rat(3);
    sk.at(1, 0) = Rat(-3);
    CHECK(det_bareiss(sk) == 9);
    CHECK(det_expand(sk, ring) == 9);
    DenseMat<Rat> empty(0, 0, Rat(0));
    CHECK(det_bareiss(empty) == 1);
}

TEST_CASE("bareiss equals permutation expansion up to order 5") {
    std::mt19937_64 rng(17);
    auto ring = rat_ring();
    for (int n = 1; n <= 5; ++n)
        for (int it = 0; it < 8; ++it) {
            auto M = rand_mat(rng, n);
            Rat d1 = det_bareiss(M);
            Rat d2 = det_leibniz(M);
            Rat d3 = det_expand(M, ring);
            CHECK(d1 == d2);
            CHECK(d2 == d3);
        }
}

TEST_CASE("pfaffian basics") {
    auto ring = rat_ring();
    DenseMat<Rat> empty(0, 0, Rat(0));
    CHECK(pfaffian_expand(empty, ring) == 1);
    DenseMat<Rat> two(2, 2, Rat(0));
    two.at(0, 1) = Rat(5);
    two.at(1, 0) = Rat(-5);
    CHECK(pfaffian_expand(two, ring) == 5);
    DenseMat<Rat> odd(3, 3, Rat(0));
    CHECK_THROWS_AS(pfaffian_expand(odd, ring), structural_error);

    std::mt19937_64 rng(2);
    auto A = rand_skew(rng, 4);
    Rat expect = A.at(0, 1) * A.at(2, 3) - A.at(0, 2) * A.at(1, 3) + A.at(0, 3) * A.at(1, 2);
    CHECK(pfaffian_expand(A, ring) == expect);
}

TEST_CASE("pf^2 = det and elimination agrees with expansion, orders 2..8") {
    std::mt19937_64 rng(23);
    auto ring = rat_ring();
    for (int n = 2; n <= 8; n += 2)
        for (int it = 0; it < 10; ++it) {
            auto A = rand_skew(rng, n);
            Rat p1 = pfaffian_expand(A, ring);
            Rat p2 = pfaffian_elim(A);
            CHECK(p1 == p2);
            CHECK(p1 * p1 == det_bareiss(A));
        }
}

TEST_CASE("congruence covariance Pf(P A P^T) = det(P) Pf(A)") {
    std::mt19937_64 rng(31);
    auto ring = rat_ring();
    for (int it = 0; it < 10; ++it) {
        int n = 4 + 2 * static_cast<int>(rng() % 2);
        auto A = rand_skew(rng, n);
        // random triangular P
        DenseMat<Rat> P(n, n, Rat(0));
        for (int i = 0; i < n; ++i) {
            P.at(i, i) = rrat(rng);
            for (int j = 0; j < i; ++j) P.at(i, j) = rrat(rng);
        }
        DenseMat<Rat> B(n, n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rat s(0);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) s += P.at(i, k) * A.at(k, l) * P.at(j, l);
                B.at(i, j) = s;
            }
        CHECK(pfaffian_expand(B, ring) == det_bareiss(P) * pfaffian_expand(A, ring));
    }
}

TEST_CASE("quasi-skew augmentation shapes") {
    std::mt19937_64 rng(5);
    auto ring = rat_ring();
    auto q = rand_quasi(rng, 4);

    auto B2 = quasi_skew_augment(q, {3, 1}, ring);
    CHECK(B2.n == 2);
    CHECK(B2.at(0, 1) == q.A_at(3, 1, Rat(0)));

    QuasiSkew q1;
    q1.a[0] = Rat(7);
    auto B1 = quasi_skew_augment(q1, {0}, ring);
    CHECK(B1.n == 2);
    CHECK(B1.at(0, 1) == 7);
    CHECK(B1.at(1, 0) == -7);

    auto B3 = quasi_skew_augment(q, {3, 2, 0}, ring);
    CHECK(B3.n == 4);
    CHECK(B3.at(0, 3) == q.a_at(3, Rat(0)));
    CHECK(B3.at(1, 3) == q.a_at(2, Rat(0)));
    CHECK(B3.at(2, 3) == q.a_at(0, Rat(0)));
}

TEST_CASE("quasi-skew lemma: even ratio 1, odd ratio -1, N=1 forced value") {
    std::mt19937_64 rng(41);
    // N = 1 with a_1 = 1: lhs = 1, rhs = -1
    QuasiSkew q1;
    q1.a[0] = Rat(1);
    auto rep1 = verify_quasi_skew_lemma(q1, {0});
    CHECK(rep1.lhs == 1);
    CHECK(rep1.rhs == -1);
    CHECK(rep1.ratio == -1);

    for (int n = 1; n <= 6; ++n) {
        for (int it = 0; it < 6; ++it) {
            auto q = rand_quasi(rng, n + 2);
            StrictSeq h;
            for (int i = n - 1; i >= 0; --i) h.push_back(i + 1);
            auto rep = verify_quasi_skew_lemma(q, h);
            if (!rep.ratio_defined) continue;
            CHECK(rep.ratio == (n % 2 == 0 ? Rat(1) : Rat(-1)));
        }
    }
}

TEST_CASE("minor determinant of sparse selections") {
    SparseMat<Rat> M;
    M.entries[{0, 0}] = Rat(5);
    auto ring = rat_ring();
    CHECK(minor_det(M, {0}, {0}, ring) == 5);
    // a row fully outside support vanishes
    CHECK(minor_det(M, {3}, {0}, ring) == 0);

    std::mt19937_64 rng(6);
    SparseMat<Rat> R;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (rng() % 2) R.entries[{i, j}] = rrat(rng);
    StrictSeq h{3, 1}, hp{2, 0};
    Rat direct = R.find(3, 2) && R.find(1, 0) ? (*R.find(3, 2)) * (*R.find(1, 0)) : Rat(0);
    Rat anti = R.find(3, 0) && R.find(1, 2) ? (*R.find(3, 0)) * (*R.find(1, 2)) : Rat(0);
    CHECK(minor_det(R, h, hp, ring) == direct - anti);
    CHECK_THROWS_AS(minor_det(R, {1, 0}, {0}, ring), structural_error);
}
