#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "pfafflab/linalg.hpp"
#include "pfafflab/schur.hpp"

namespace pfl {

// Sparse rectangular matrix over an exact entry type; missing entries are 0.
template <class E>
struct SparseMat {
    std::map<std::pair<int, int>, E> entries;

    bool has(int i, int j) const { return entries.count({i, j}) != 0; }
    const E* find(int i, int j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? nullptr : &it->second;
    }
    std::vector<int> row_support() const {
        std::set<int> s;
        for (const auto& [k, v] : entries) s.insert(k.first);
        return {s.begin(), s.end()};
    }
    std::vector<int> col_support() const {
        std::set<int> s;
        for (const auto& [k, v] : entries) s.insert(k.second);
        return {s.begin(), s.end()};
    }
};

// Skew matrix A (finite support, indices >= 0, stored with i < j) plus a
// vector a; the data behind every B-type tau function.
template <class E>
struct QuasiSkewT {
    std::map<std::pair<int, int>, E> A;  // i < j only
    std::map<int, E> a;

    void set_A(int i, int j, E v) {
        if (i == j) throw structural_error("quasi-skew: diagonal must be zero");
        if (i < j)
            A[{i, j}] = std::move(v);
        else
            A[{j, i}] = negated(std::move(v));
    }

    bool A_nonzero(int i, int j) const {
        if (i == j) return false;
        return A.count(i < j ? std::make_pair(i, j) : std::make_pair(j, i)) != 0;
    }

    E A_at(int i, int j, const E& zero) const {
        if (i == j) return zero;
        if (i < j) {
            auto it = A.find({i, j});
            return it == A.end() ? zero : it->second;
        }
        auto it = A.find({j, i});
        return it == A.end() ? zero : negated(it->second);
    }

    E a_at(int i, const E& zero) const {
        auto it = a.find(i);
        return it == a.end() ? zero : it->second;
    }

    // sorted ascending union of all indices carrying data
    std::vector<int> support() const {
        std::set<int> s;
        for (const auto& [k, v] : A) {
            s.insert(k.first);
            s.insert(k.second);
        }
        for (const auto& [i, v] : a) s.insert(i);
        return {s.begin(), s.end()};
    }

private:
    static E negated(E v) { return -v; }
};

using QuasiSkew = QuasiSkewT<Rat>;

// Restriction of A to the rows/cols selected by h (descending order, matching
// the h_1 > ... > h_N labels); for odd |h| the extra last column carries the
// a-vector, per the quasi-skew lemma.
template <class E>
DenseMat<E> quasi_skew_augment(const QuasiSkewT<E>& q, const StrictSeq& h, const RingCtx<E>& ring) {
    validate_strict(h);
    int n = static_cast<int>(h.size());
    int sz = (n % 2 == 0) ? n : n + 1;
    DenseMat<E> B(sz, sz, ring.zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B.at(i, j) = q.A_at(h[i], h[j], ring.zero);
    if (n % 2 != 0) {
        for (int i = 0; i < n; ++i) {
            B.at(i, n) = q.a_at(h[i], ring.zero);
            B.at(n, i) = -B.at(i, n);
        }
    }
    return B;
}

struct LemmaReport {
    Rat lhs;  // Pf(B_h)^2
    Rat rhs;  // det(A_h - a_h a_h^T)
    bool ratio_defined = false;
    Rat ratio;
};

LemmaReport verify_quasi_skew_lemma(const QuasiSkew& q, const StrictSeq& h);

// det of the submatrix with rows h, columns h' (descending selections)
template <class E>
E minor_det(const SparseMat<E>& M, const StrictSeq& h, const StrictSeq& hp, const RingCtx<E>& ring) {
    validate_strict(h);
    validate_strict(hp);
    if (h.size() != hp.size()) throw structural_error("minor_det: selection size mismatch");
    int n = static_cast<int>(h.size());
    DenseMat<E> S(n, n, ring.zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (const E* e = M.find(h[i], hp[j])) S.at(i, j) = *e;
    return det_expand(S, ring);
}

}  // namespace pfl
