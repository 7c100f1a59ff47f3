#pragma once

#include <functional>

#include "pfafflab/fock.hpp"
#include "pfafflab/tau_data.hpp"

namespace pfl {

// channel assignment for one logical time set
//   value of t_k is (neg ? -1 : +1) * (channel variable k)
std::vector<TruncatedSeries> slot_values(const LayoutPtr& lay, const SlotRef& slot, int kmax);

// s_0..s_kmax evaluated at a slot's (possibly negated) variables
std::vector<TruncatedSeries> slot_schur_row(const LayoutPtr& lay, const SlotRef& slot, int kmax,
                                            const RingCtx<TruncatedSeries>& ring);

// enumerate strict descending sequences of length N from a sorted-ascending
// support set
void for_each_strict(const std::vector<int>& support, int N,
                     const std::function<void(const StrictSeq&)>& fn);

// --- determinantal side -------------------------------------------------------

// m_ij = sum_{k,l >= 0} M_{i+k, j+l} s_k(t1) s_l(-t2)
template <class E>
TruncatedSeries tl_m_entry(const SparseMat<E>& M, int i, int j,
                           const std::vector<TruncatedSeries>& srow1,
                           const std::vector<TruncatedSeries>& srow2,
                           const RingCtx<TruncatedSeries>& ring) {
    TruncatedSeries acc = ring.zero;
    for (const auto& [ij, v] : M.entries) {
        int k = ij.first - i, l = ij.second - j;
        if (k < 0 || l < 0) continue;
        if (static_cast<size_t>(k) >= srow1.size() || static_cast<size_t>(l) >= srow2.size())
            continue;
        auto term = srow1[k] * srow2[l];
        if constexpr (std::is_same_v<E, Rat>)
            acc += term.scaled(v);
        else
            acc += term * v;
    }
    return acc;
}

// tau^TL_N = det(m_ij)_{i,j=0..N-1}; N = 0 -> 1; N < 0 -> 0
template <class E>
TruncatedSeries tl_tau_det(const SparseMat<E>& M, int N, const LayoutPtr& lay, const SlotRef& t1,
                           const SlotRef& t2) {
    auto ring = series_ring(lay);
    if (N < 0) return ring.zero;
    if (N == 0) return ring.one;
    int order = 0;
    for (const auto& [ij, v] : M.entries) order = std::max({order, ij.first, ij.second});
    order = std::max(order, N - 1);
    auto srow1 = slot_schur_row(lay, t1, order, ring);
    SlotRef t2n{t2.channel, !t2.neg};  // s_l(-t2)
    auto srow2 = slot_schur_row(lay, t2n, order, ring);
    DenseMat<TruncatedSeries> m(N, N, ring.zero);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m.at(i, j) = tl_m_entry(M, i, j, srow1, srow2, ring);
    return det_expand(m, ring);
}

// Takasaki form: sum over strict h, h' of det(M_{h,h'}) s_h(t1) s_h'(-t2)
TruncatedSeries tl_tau_schur(const MomentMatrix& M, int N, const LayoutPtr& lay, const SlotRef& t1,
                             const SlotRef& t2);

// --- pfaffian side --------------------------------------------------------------

// tau^B_N = sum over strict h of Pf(augment(q, h)) s_h(t); N = 0 -> 1, N < 0 -> 0
template <class E>
TruncatedSeries b_tau_pf(const QuasiSkewT<E>& q, int N, const LayoutPtr& lay, const SlotRef& s,
                         const RingCtx<E>& ering) {
    auto ring = series_ring(lay);
    if (N < 0) return ring.zero;
    if (N == 0) return ring.one;
    auto sup = q.support();
    int order = sup.empty() ? 0 : sup.back();
    auto srow = slot_schur_row(lay, s, order, ring);
    TruncatedSeries acc = ring.zero;
    for_each_strict(sup, N, [&](const StrictSeq& h) {
        auto B = quasi_skew_augment(q, h, ering);
        E pf = pfaffian_expand(B, ering);
        if (ring_is_zero(pf)) return;
        auto sh = schur_jt(h, srow, ring);
        if constexpr (std::is_same_v<E, Rat>)
            acc += sh.scaled(pf);
        else
            acc += sh * pf;
    });
    return acc;
}

// quasi-skew m_ij = sum A_{i+k,j+l} s_k(t) s_l(t) - (sum a_{i+k} s_k)(sum a_{j+l} s_l)
template <class E>
TruncatedSeries b_quasi_skew_m(const QuasiSkewT<E>& q, int i, int j, const LayoutPtr& lay,
                               const SlotRef& s, const RingCtx<E>& ering) {
    auto ring = series_ring(lay);
    auto sup = q.support();
    int order = sup.empty() ? 0 : sup.back();
    auto srow = slot_schur_row(lay, s, order, ring);
    auto dressed_a = [&](int base) {
        TruncatedSeries acc = ring.zero;
        for (const auto& [idx, v] : q.a) {
            int k = idx - base;
            if (k < 0 || static_cast<size_t>(k) >= srow.size()) continue;
            if constexpr (std::is_same_v<E, Rat>)
                acc += srow[k].scaled(v);
            else
                acc += srow[k] * v;
        }
        return acc;
    };
    TruncatedSeries acc = ring.zero;
    for (const auto& [ij, v] : q.A) {
        // A is stored i<j; both orientations contribute
        auto add = [&](int I, int J, bool negate) {
            int k = I - i, l = J - j;
            if (k < 0 || l < 0) return;
            if (static_cast<size_t>(k) >= srow.size() || static_cast<size_t>(l) >= srow.size())
                return;
            auto term = srow[k] * srow[l];
            if constexpr (std::is_same_v<E, Rat>)
                acc += term.scaled(negate ? -v : v);
            else
                acc += negate ? -(term * v) : term * v;
        };
        add(ij.first, ij.second, false);
        add(ij.second, ij.first, true);
    }
    acc -= dressed_a(i) * dressed_a(j);
    return acc;
}

// e^{kappa * sum_k k t_k tbar_k} to the layout caps
TruncatedSeries pairing_exponential(const LayoutPtr& lay, const SlotRef& t, const SlotRef& tbar,
                                    int kappa);

}  // namespace pfl
