#pragma once

#include <cstdint>
#include <vector>

#include "pfafflab/schur.hpp"
#include "pfafflab/skewlin.hpp"

namespace pfl {

// M_{ij}, i,j >= 0, finite support: the general moment matrix seeding the
// determinantal tau functions.
using MomentMatrix = SparseMat<Rat>;
using SeriesMoment = SparseMat<TruncatedSeries>;

// skew A_{ij} plus vector a_i: the B-type data
using BData = QuasiSkew;
using SeriesBData = QuasiSkewT<TruncatedSeries>;

// finite list of rational support points with rational weights
struct DiscreteMeasure {
    struct PairPt {
        Rat z1, z2, w;
    };
    struct SinglePt {
        Rat z, w;
    };
    std::vector<PairPt> pair_pts;  // complete table (both orientations listed)
    std::vector<SinglePt> single_pts;
    bool antisym = false;

    void validate() const;
};

// e^{sum_k tvals[k-1] z^{-k}} as a capped series; z must be nonzero when any
// tvals are present (negative powers occur)
TruncatedSeries point_dressing(const Rat& z, const std::vector<TruncatedSeries>& tvals,
                               const RingCtx<TruncatedSeries>& ring);

// B-side moment transform: A_ij(tbar,m) = sum_p w z1^{i+m} z2^{j+m} dress(z1) dress(z2),
// a_i(tbar,m) = sum_q w z^{i+m} dress(z), for 0 <= i,j <= imax
SeriesBData moment_transform_b(const DiscreteMeasure& mu, const std::vector<TruncatedSeries>& tbar,
                               int m, int imax, const RingCtx<TruncatedSeries>& ring);

// charged-KP moment transform with independent offsets:
// M_ij = sum_p w z1^{i+m1} z2^{j+m2} e^{sum_k (tb1_k z1^{-k} - tb2_k z2^{-k})}
SeriesMoment moment_transform_2kp(const DiscreteMeasure& mu,
                                  const std::vector<TruncatedSeries>& tb1,
                                  const std::vector<TruncatedSeries>& tb2, int m1, int m2,
                                  int imax, const RingCtx<TruncatedSeries>& ring);

// rational specializations at tbar = 0
BData measure_bdata_at_zero(const DiscreteMeasure& mu, int m, int imax);
MomentMatrix measure_moment_at_zero(const DiscreteMeasure& mu, int m1, int m2, int imax);

// quasi-skew combination M = A - a a^T over any entry ring
template <class E>
SparseMat<E> quasi_skew_to_moment(const QuasiSkewT<E>& q, const RingCtx<E>& ring) {
    SparseMat<E> M;
    auto sup = q.support();
    for (int i : sup)
        for (int j : sup) {
            E v = q.A_at(i, j, ring.zero) - q.a_at(i, ring.zero) * q.a_at(j, ring.zero);
            if (!ring_is_zero(v)) M.entries[{i, j}] = v;
        }
    return M;
}

// --- deterministic data generation -----------------------------------------

// SplitMix64: tiny, portable, documented; the one PRNG of the artifact
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [lo, hi]
    int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }
};

// numerator in [-9,9] minus {0}, denominator in {1,2,3}
Rat small_rat(SplitMix64& rng);

MomentMatrix gen_moment(uint64_t seed, int entries, int idx_range);
BData gen_bdata(uint64_t seed, int entries, int idx_range, bool with_a = true);
DiscreteMeasure gen_measure(uint64_t seed, int npairs, int nsingles, bool antisym);

}  // namespace pfl
