#include "pfafflab/schur.hpp"

namespace pfl {

void validate_strict(const StrictSeq& h) {
    for (size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0) throw structural_error("strict sequence entries must be >= 0");
        if (i + 1 < h.size() && h[i] <= h[i + 1])
            throw structural_error("sequence not strictly decreasing");
    }
}

int strict_weight(const StrictSeq& h) {
    int n = static_cast<int>(h.size());
    int s = 0;
    for (int v : h) s += v;
    return s - n * (n - 1) / 2;
}

std::vector<TruncatedSeries> schur_row(const std::vector<TruncatedSeries>& tvals, int kmax,
                                       const RingCtx<TruncatedSeries>& ring) {
    std::vector<TruncatedSeries> s;
    s.reserve(kmax + 1);
    s.push_back(ring.one);
    for (int k = 1; k <= kmax; ++k) {
        TruncatedSeries acc = ring.zero;
        for (int j = 1; j <= k; ++j) {
            const TruncatedSeries* tj = (static_cast<size_t>(j - 1) < tvals.size()) ? &tvals[j - 1] : nullptr;
            if (!tj || tj->is_zero()) continue;
            acc += (*tj * s[k - j]).scaled(Rat(j));
        }
        s.push_back(acc.scaled(Rat(1, k)));
    }
    return s;
}

std::vector<TruncatedSeries> channel_values(const LayoutPtr& lay, int channel, int kmax,
                                            bool negate) {
    std::vector<TruncatedSeries> vals;
    vals.reserve(kmax);
    int width = lay->channel(channel).nvars;
    for (int k = 1; k <= kmax; ++k) {
        if (k <= width) {
            auto v = TruncatedSeries::variable(lay, channel, k);
            vals.push_back(negate ? -v : v);
        } else {
            vals.push_back(TruncatedSeries(lay));
        }
    }
    return vals;
}

TruncatedSeries schur_jt(const StrictSeq& h, const std::vector<TruncatedSeries>& srow,
                         const RingCtx<TruncatedSeries>& ring) {
    validate_strict(h);
    int n = static_cast<int>(h.size());
    if (n == 0) return ring.one;
    DenseMat<TruncatedSeries> M(n, n, ring.zero);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int idx = h[i] - n + (j + 1);
            if (idx < 0) continue;
            if (static_cast<size_t>(idx) >= srow.size())
                throw structural_error("schur_jt: s-row too short for this sequence");
            M.at(i, j) = srow[idx];
        }
    }
    return det_expand(M, ring);
}

}  // namespace pfl
