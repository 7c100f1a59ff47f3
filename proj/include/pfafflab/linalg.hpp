#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pfafflab/core.hpp"
#include "pfafflab/series.hpp"

namespace pfl {

template <class T>
struct DenseMat {
    int n = 0, m = 0;
    std::vector<T> a;

    DenseMat() = default;
    DenseMat(int n_, int m_, const T& fill) : n(n_), m(m_), a(static_cast<size_t>(n_) * m_, fill) {}

    T& at(int i, int j) { return a[static_cast<size_t>(i) * m + j]; }
    const T& at(int i, int j) const { return a[static_cast<size_t>(i) * m + j]; }
};

// seed elements so generic code can build 0/1 in rings that carry context
// (a TruncatedSeries needs its layout)
template <class T>
struct RingCtx {
    T zero, one;
};

inline RingCtx<Rat> rat_ring() { return {Rat(0), Rat(1)}; }
inline RingCtx<TruncatedSeries> series_ring(const LayoutPtr& lay) {
    return {TruncatedSeries(lay), TruncatedSeries::constant(lay, Rat(1))};
}

template <class T>
bool ring_is_zero(const T& x) { return x.is_zero(); }
inline bool ring_is_zero(const Rat& x) { return x == 0; }

// division-free determinant by expansion over column subsets, memoized;
// fine for the small orders the tau forms need, any commutative ring
template <class T>
T det_expand(const DenseMat<T>& M, const RingCtx<T>& ring) {
    if (M.n != M.m) throw structural_error("det: matrix not square");
    int n = M.n;
    if (n == 0) return ring.one;
    if (n > 20) throw structural_error("det_expand: order too large");
    std::map<uint32_t, T> memo;
    // det of rows [n-popcount(mask)..n) on column set `mask`
    auto rec = [&](auto&& self, uint32_t mask) -> T {
        int sz = __builtin_popcount(mask);
        if (sz == 0) return ring.one;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int row = n - sz;
        T acc = ring.zero;
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            const T& e = M.at(row, j);
            if (!ring_is_zero(e)) {
                T sub = self(self, mask & ~(1u << j));
                T term = e * sub;
                if (sign < 0) term = -term;
                acc += term;
            }
            sign = -sign;
        }
        memo.emplace(mask, acc);
        return acc;
    };
    return rec(rec, n >= 32 ? ~0u : ((1u << n) - 1));
}

// fraction-free Bareiss elimination with row pivoting; exact over Rat
Rat det_bareiss(DenseMat<Rat> M);

// Leibniz permutation-expansion determinant (oracle for small orders)
Rat det_leibniz(const DenseMat<Rat>& M);

// restricted-permutation Pfaffian by recursive expansion along the first
// remaining row, memoized on the index subset; ground-truth definition
template <class T>
T pfaffian_expand(const DenseMat<T>& M, const RingCtx<T>& ring) {
    if (M.n != M.m) throw structural_error("pfaffian: matrix not square");
    int n = M.n;
    if (n == 0) return ring.one;
    if (n % 2 != 0) throw structural_error("pfaffian undefined for odd order");
    if (n > 20) throw structural_error("pfaffian_expand: order too large");
    std::map<uint32_t, T> memo;
    auto rec = [&](auto&& self, uint32_t mask) -> T {
        if (mask == 0) return ring.one;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int i = __builtin_ctz(mask);
        uint32_t rest = mask & ~(1u << i);
        T acc = ring.zero;
        int sign = 1;
        for (int j = i + 1; j < n; ++j) {
            if (!(rest & (1u << j))) continue;
            const T& e = M.at(i, j);
            if (!ring_is_zero(e)) {
                T sub = self(self, rest & ~(1u << j));
                T term = e * sub;
                if (sign < 0) term = -term;
                acc += term;
            }
            sign = -sign;
        }
        memo.emplace(mask, acc);
        return acc;
    };
    return rec(rec, n >= 32 ? ~0u : ((1u << n) - 1));
}

// skew-symmetric elimination Pfaffian (performance path over Rat)
Rat pfaffian_elim(DenseMat<Rat> M);

bool is_skew(const DenseMat<Rat>& M);

}  // namespace pfl
