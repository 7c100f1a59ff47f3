#include "pfafflab/tau_data.hpp"

namespace pfl {

void DiscreteMeasure::validate() const {
    if (!antisym) return;
    // every (z1,z2,w) must be mirrored by (z2,z1,-w)
    for (const auto& p : pair_pts) {
        bool found = false;
        for (const auto& q : pair_pts)
            if (q.z1 == p.z2 && q.z2 == p.z1 && q.w == -p.w) {
                found = true;
                break;
            }
        if (!found) throw structural_error("measure flagged antisymmetric is not");
    }
}

namespace {

Rat rat_pow(const Rat& z, int e) {
    if (e == 0) return Rat(1);
    if (z == 0) {
        if (e > 0) return Rat(0);
        throw structural_error("zero support point raised to a negative power");
    }
    Rat acc(1);
    Rat base = e > 0 ? z : Rat(1) / z;
    for (int i = 0; i < (e > 0 ? e : -e); ++i) acc *= base;
    return acc;
}

bool all_zero(const std::vector<TruncatedSeries>& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

}  // namespace

TruncatedSeries point_dressing(const Rat& z, const std::vector<TruncatedSeries>& tvals,
                               const RingCtx<TruncatedSeries>& ring) {
    if (all_zero(tvals)) return ring.one;
    if (z == 0) throw structural_error("zero support point with negative power in dressing");
    std::vector<TruncatedSeries> u;
    u.reserve(tvals.size());
    for (size_t k = 1; k <= tvals.size(); ++k)
        u.push_back(tvals[k - 1].scaled(rat_pow(z, -static_cast<int>(k))));
    int cap = ring.one.layout()->total_cap();
    auto srow = schur_row(u, cap, ring);
    TruncatedSeries acc = ring.zero;
    for (const auto& s : srow) acc += s;
    return acc;
}

SeriesBData moment_transform_b(const DiscreteMeasure& mu, const std::vector<TruncatedSeries>& tbar,
                               int m, int imax, const RingCtx<TruncatedSeries>& ring) {
    SeriesBData out;
    for (int i = 0; i <= imax; ++i) {
        TruncatedSeries av = ring.zero;
        for (const auto& q : mu.single_pts)
            av += point_dressing(q.z, tbar, ring).scaled(q.w * rat_pow(q.z, i + m));
        if (!av.is_zero()) out.a[i] = av;
        for (int j = i + 1; j <= imax; ++j) {
            TruncatedSeries Av = ring.zero;
            for (const auto& p : mu.pair_pts) {
                auto d = point_dressing(p.z1, tbar, ring) * point_dressing(p.z2, tbar, ring);
                Av += d.scaled(p.w * rat_pow(p.z1, i + m) * rat_pow(p.z2, j + m));
            }
            if (!Av.is_zero()) out.A[{i, j}] = Av;
        }
    }
    return out;
}

SeriesMoment moment_transform_2kp(const DiscreteMeasure& mu,
                                  const std::vector<TruncatedSeries>& tb1,
                                  const std::vector<TruncatedSeries>& tb2, int m1, int m2,
                                  int imax, const RingCtx<TruncatedSeries>& ring) {
    std::vector<TruncatedSeries> tb2n;
    tb2n.reserve(tb2.size());
    for (const auto& s : tb2) tb2n.push_back(-s);
    SeriesMoment out;
    for (int i = 0; i <= imax; ++i)
        for (int j = 0; j <= imax; ++j) {
            TruncatedSeries v = ring.zero;
            for (const auto& p : mu.pair_pts) {
                auto d = point_dressing(p.z1, tb1, ring) * point_dressing(p.z2, tb2n, ring);
                v += d.scaled(p.w * rat_pow(p.z1, i + m1) * rat_pow(p.z2, j + m2));
            }
            if (!v.is_zero()) out.entries[{i, j}] = v;
        }
    return out;
}

BData measure_bdata_at_zero(const DiscreteMeasure& mu, int m, int imax) {
    BData out;
    for (int i = 0; i <= imax; ++i) {
        Rat av(0);
        for (const auto& q : mu.single_pts) av += q.w * rat_pow(q.z, i + m);
        if (av != 0) out.a[i] = av;
        for (int j = i + 1; j <= imax; ++j) {
            Rat Av(0);
            for (const auto& p : mu.pair_pts) Av += p.w * rat_pow(p.z1, i + m) * rat_pow(p.z2, j + m);
            if (Av != 0) out.A[{i, j}] = Av;
        }
    }
    return out;
}

MomentMatrix measure_moment_at_zero(const DiscreteMeasure& mu, int m1, int m2, int imax) {
    MomentMatrix out;
    for (int i = 0; i <= imax; ++i)
        for (int j = 0; j <= imax; ++j) {
            Rat v(0);
            for (const auto& p : mu.pair_pts) v += p.w * rat_pow(p.z1, i + m1) * rat_pow(p.z2, j + m2);
            if (v != 0) out.entries[{i, j}] = v;
        }
    return out;
}

Rat small_rat(SplitMix64& rng) {
    int num = rng.range(-9, 9);
    if (num == 0) num = 1;
    int den = rng.range(1, 3);
    return Rat(num, den);
}

MomentMatrix gen_moment(uint64_t seed, int entries, int idx_range) {
    SplitMix64 rng(seed);
    MomentMatrix M;
    for (int t = 0; t < entries; ++t) {
        int i = rng.range(0, idx_range - 1);
        int j = rng.range(0, idx_range - 1);
        M.entries[{i, j}] = small_rat(rng);
    }
    return M;
}

BData gen_bdata(uint64_t seed, int entries, int idx_range, bool with_a) {
    SplitMix64 rng(seed);
    BData q;
    for (int t = 0; t < entries; ++t) {
        int i = rng.range(0, idx_range - 1);
        int j = rng.range(0, idx_range - 1);
        if (i == j) continue;
        q.set_A(std::min(i, j), std::max(i, j), small_rat(rng));
    }
    if (with_a) {
        int na = std::max(1, entries / 2);
        for (int t = 0; t < na; ++t) q.a[rng.range(0, idx_range - 1)] = small_rat(rng);
    }
    return q;
}

DiscreteMeasure gen_measure(uint64_t seed, int npairs, int nsingles, bool antisym) {
    SplitMix64 rng(seed);
    DiscreteMeasure mu;
    mu.antisym = antisym;
    for (int t = 0; t < npairs; ++t) {
        Rat z1 = small_rat(rng), z2 = small_rat(rng), w = small_rat(rng);
        if (antisym && z1 == z2) continue;
        mu.pair_pts.push_back({z1, z2, w});
        if (antisym) mu.pair_pts.push_back({z2, z1, -w});
    }
    for (int t = 0; t < nsingles; ++t) {
        Rat z = small_rat(rng), w = small_rat(rng);
        mu.single_pts.push_back({z, w});
    }
    mu.validate();
    return mu;
}

}  // namespace pfl
