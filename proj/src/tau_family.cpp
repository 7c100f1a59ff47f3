#include "pfafflab/tau_family.hpp"

#include <sstream>

namespace pfl {

namespace {

std::string cache_key(const std::vector<int>& charges, const LayoutPtr& lay,
                      const std::vector<SlotRef>& slots) {
    std::ostringstream os;
    for (int c : charges) os << c << ",";
    os << "|";
    for (const auto& s : slots) os << s.channel << (s.neg ? "-" : "+");
    os << "|" << lay.get() << "|" << lay->total_cap();
    for (int c = 0; c < lay->channel_count(); ++c)
        os << ":" << lay->channel(c).name << lay->channel(c).nvars << "c" << lay->channel_cap(c);
    return os.str();
}

int slot_cap(const LayoutPtr& lay, const SlotRef& s) {
    return std::min(lay->total_cap(), lay->channel_cap(s.channel));
}

}  // namespace

TruncatedSeries TauFamily::eval(const std::vector<int>& charges, const LayoutPtr& lay,
                                const std::vector<SlotRef>& slots) const {
    if (static_cast<int>(charges.size()) != arity()) throw structural_error("family: bad charge arity");
    if (static_cast<int>(slots.size()) != slot_count()) throw structural_error("family: bad slot count");
    auto key = cache_key(charges, lay, slots);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto val = compute(charges, lay, slots);
    cache_.emplace(std::move(key), val);
    return val;
}

int DetFamily::degree_bound(const std::vector<int>& charges) const {
    int N = charges[0];
    if (N <= 0) return 0;
    int mi = 0, mj = 0;
    for (const auto& [ij, v] : M_.entries) {
        mi = std::max(mi, ij.first);
        mj = std::max(mj, ij.second);
    }
    return N * mi + N * mj - N * (N - 1);
}

TruncatedSeries DetFamily::compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                   const std::vector<SlotRef>& slots) const {
    auto tau = tl_tau_det(M_, charges[0], lay, slots[0], slots[1]);
    if (sign_mode_ == 1 && tri_sign(charges[0]) < 0) return -tau;
    return tau;
}

int BFamily::degree_bound(const std::vector<int>& charges) const {
    int N = charges[0];
    if (N <= 0) return 0;
    auto sup = q_.support();
    if (static_cast<int>(sup.size()) < N) return 0;
    int s = 0;
    for (int r = 0; r < N; ++r) s += sup[sup.size() - 1 - r];
    return s - N * (N - 1) / 2;
}

TruncatedSeries BFamily::compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                 const std::vector<SlotRef>& slots) const {
    return b_tau_pf(q_, charges[0], lay, slots[0], rat_ring());
}

int b2_sign(int n, int m) {
    // pinned by the oracle calibration grid (see the family tests):
    // -1 exactly when the base charge m and the level N = n - m are both odd
    return parity_sign(static_cast<long>(m) * (n - m));
}

int tc2_sign(int n, int m, int l) {
    // pinned by the oracle calibration grid (see the family tests)
    long N = n - m;
    return tri_sign(N) * parity_sign(N * (m - l));
}

TruncatedSeries TwoSidedBFamily::compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                         const std::vector<SlotRef>& slots) const {
    int n = charges[0], m = charges[1];
    int N = n - m;
    auto ring = series_ring(lay);
    if (N < 0) return ring.zero;
    const SlotRef& s = slots[0];
    const SlotRef& sbar = slots[1];
    int imax = std::max(0, N - 1 + slot_cap(lay, s));
    // dressing at -sbar (the spec transform carries e^{+V}; the + right
    // evolution of the definition dresses with e^{-V})
    auto tbar_vals = slot_values(lay, {sbar.channel, !sbar.neg}, slot_cap(lay, sbar));
    auto data = moment_transform_b(mu_, tbar_vals, m, imax, ring);
    auto pf = b_tau_pf(data, N, lay, s, ring);
    auto E = pairing_exponential(lay, s, sbar, +1);
    auto tau = E * pf;
    return b2_sign(n, m) < 0 ? -tau : tau;
}

TruncatedSeries TwoSidedMFamily::compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                         const std::vector<SlotRef>& slots) const {
    int n = charges[0], m = charges[1], l = charges[2];
    int N = n - m;
    auto ring = series_ring(lay);
    if (N < 0) return ring.zero;
    const SlotRef& t1 = slots[0];
    const SlotRef& t2 = slots[1];
    const SlotRef& tb1 = slots[2];
    const SlotRef& tb2 = slots[3];
    int imax = std::max(0, N - 1 + std::max(slot_cap(lay, t1), slot_cap(lay, t2)));
    auto tb1_vals = slot_values(lay, {tb1.channel, !tb1.neg}, slot_cap(lay, tb1));
    auto tb2_vals = slot_values(lay, {tb2.channel, !tb2.neg}, slot_cap(lay, tb2));
    auto M = moment_transform_2kp(mu_, tb1_vals, tb2_vals, m, m - l, imax, ring);
    auto det = tl_tau_det(M, N, lay, t1, t2);
    auto E = pairing_exponential(lay, t1, tb1, +1) * pairing_exponential(lay, t2, tb2, +1);
    auto tau = E * det;
    return tc2_sign(n, m, l) < 0 ? -tau : tau;
}

int OracleFamily::arity() const {
    switch (kind_) {
        case OracleKind::Tau0N:
        case OracleKind::Tau1N:
        case OracleKind::TauBN: return 1;
        case OracleKind::TauBNM: return 2;
        case OracleKind::Tau0NML: return 3;
    }
    return 0;
}

int OracleFamily::slot_count() const {
    switch (kind_) {
        case OracleKind::Tau0N:
        case OracleKind::Tau1N: return 2;
        case OracleKind::TauBN: return 1;
        case OracleKind::TauBNM: return 2;
        case OracleKind::Tau0NML: return 4;
    }
    return 0;
}

TruncatedSeries OracleFamily::compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                      const std::vector<SlotRef>& slots) const {
    OracleProblem p;
    p.kind = kind_;
    p.charges = charges;
    p.factors = factors_;
    p.allow_sqrt2 = allow_sqrt2_;
    return tau_oracle(space_, p, lay, slots);
}

}  // namespace pfl
