#include "pfafflab/tau_forms.hpp"

namespace pfl {

std::vector<TruncatedSeries> slot_values(const LayoutPtr& lay, const SlotRef& slot, int kmax) {
    return channel_values(lay, slot.channel, kmax, slot.neg);
}

std::vector<TruncatedSeries> slot_schur_row(const LayoutPtr& lay, const SlotRef& slot, int kmax,
                                            const RingCtx<TruncatedSeries>& ring) {
    return schur_row(slot_values(lay, slot, kmax), kmax, ring);
}

void for_each_strict(const std::vector<int>& support, int N,
                     const std::function<void(const StrictSeq&)>& fn) {
    int sz = static_cast<int>(support.size());
    if (N > sz) return;
    if (N == 0) {
        fn({});
        return;
    }
    std::vector<int> pick(N);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == N) {
            StrictSeq h(N);
            for (int r = 0; r < N; ++r) h[r] = support[pick[N - 1 - r]];  // descending
            fn(h);
            return;
        }
        for (int p = start; p < sz; ++p) {
            pick[depth] = p;
            self(self, p + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
}

TruncatedSeries tl_tau_schur(const MomentMatrix& M, int N, const LayoutPtr& lay, const SlotRef& t1,
                             const SlotRef& t2) {
    auto ring = series_ring(lay);
    if (N < 0) return ring.zero;
    if (N == 0) return ring.one;
    auto rows = M.row_support();
    auto cols = M.col_support();
    int order = 0;
    for (int r : rows) order = std::max(order, r);
    for (int c : cols) order = std::max(order, c);
    auto srow1 = slot_schur_row(lay, t1, order, ring);
    SlotRef t2n{t2.channel, !t2.neg};
    auto srow2 = slot_schur_row(lay, t2n, order, ring);
    auto rring = rat_ring();

    TruncatedSeries acc = ring.zero;
    for_each_strict(rows, N, [&](const StrictSeq& h) {
        auto sh = schur_jt(h, srow1, ring);
        if (sh.is_zero()) return;
        for_each_strict(cols, N, [&](const StrictSeq& hp) {
            Rat minor = minor_det(M, h, hp, rring);
            if (minor == 0) return;
            auto shp = schur_jt(hp, srow2, ring);
            if (shp.is_zero()) return;
            acc += (sh * shp).scaled(minor);
        });
    });
    return acc;
}

TruncatedSeries pairing_exponential(const LayoutPtr& lay, const SlotRef& t, const SlotRef& tbar,
                                    int kappa) {
    if (kappa == 0) return TruncatedSeries::constant(lay, Rat(1));
    TruncatedSeries u(lay);
    int kmax = std::min(lay->channel(t.channel).nvars, lay->channel(tbar.channel).nvars);
    for (int k = 1; k <= kmax; ++k) {
        auto tk = TruncatedSeries::variable(lay, t.channel, k);
        auto bk = TruncatedSeries::variable(lay, tbar.channel, k);
        int sgn = kappa * (t.neg ? -1 : 1) * (tbar.neg ? -1 : 1);
        u += (tk * bk).scaled(Rat(sgn * k));
    }
    return exp_series(u);
}

}  // namespace pfl
