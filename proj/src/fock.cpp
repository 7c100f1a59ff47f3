#include "pfafflab/fock.hpp"

#include <algorithm>
#include <sstream>

namespace pfl {

namespace {

int popcount_below(uint64_t bits, int b) {
    if (b <= 0) return 0;
    uint64_t mask = (b >= 64) ? ~0ull : ((1ull << b) - 1);
    return __builtin_popcountll(bits & mask);
}

}  // namespace

CliffPoly poly_mul(const CliffPoly& A, const CliffPoly& B) {
    CliffPoly out;
    for (const auto& [ca, oa] : A)
        for (const auto& [cb, ob] : B) {
            std::vector<FermiOp> ops = oa;
            ops.insert(ops.end(), ob.begin(), ob.end());
            out.emplace_back(ca * cb, std::move(ops));
        }
    return out;
}

CliffPoly poly_scale(const CliffPoly& A, const QExt& c) {
    CliffPoly out;
    out.reserve(A.size());
    for (const auto& [ca, oa] : A) out.emplace_back(ca * c, oa);
    return out;
}

CliffPoly poly_add(CliffPoly A, const CliffPoly& B) {
    A.insert(A.end(), B.begin(), B.end());
    return A;
}

void FockVec::add(const BasisKey& k, const QExt& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = amp.emplace(k, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) amp.erase(it);
    }
}

FockVec FockVec::scaled(const QExt& c) const {
    FockVec out;
    if (c.is_zero()) return out;
    for (const auto& [k, v] : amp) out.amp.emplace(k, v * c);
    return out;
}

FockVec& FockVec::operator+=(const FockVec& o) {
    for (const auto& [k, v] : o.amp) add(k, v);
    return *this;
}

FockSpace::FockSpace(SpaceKind kind, ModeWindow win) : kind_(kind), win_(win) {
    if (win.lo >= 0 || win.hi <= 0) throw structural_error("mode window must straddle 0");
    if (win.width() > 62) throw structural_error("mode window too wide (max 62)");
}

BasisKey FockSpace::vacuum_key() const {
    BasisKey k;
    int nsea = -win_.lo;  // modes lo..-1 are filled
    uint64_t sea = (nsea >= 64) ? ~0ull : ((1ull << nsea) - 1);
    k.occ0 = sea;
    if (species_count() == 2) k.occ1 = sea;
    return k;
}

FockVec FockSpace::vacuum() const {
    FockVec v;
    v.amp.emplace(vacuum_key(), QExt::one());
    return v;
}

void FockSpace::check_mode(int mode) const {
    if (mode < win_.lo || mode >= win_.hi)
        throw window_overflow("window overflow: mode " + std::to_string(mode) + " outside [" +
                              std::to_string(win_.lo) + "," + std::to_string(win_.hi) + ")");
}

int FockSpace::slot_of(int species, int mode) const {
    return 1 + species * win_.width() + (mode - win_.lo);
}

FockVec FockSpace::apply_op(const FermiOp& op, const FockVec& v) const {
    FockVec out;
    const int W = win_.width();
    switch (op.kind) {
        case FermiOp::Create:
        case FermiOp::Annihilate: {
            check_mode(op.mode);
            if (op.species >= species_count()) throw structural_error("bad species");
            int b = op.mode - win_.lo;
            uint64_t bit = 1ull << b;
            bool create = (op.kind == FermiOp::Create);
            for (const auto& [k, a] : v.amp) {
                uint64_t occ = op.species == 0 ? k.occ0 : k.occ1;
                if (create ? (occ & bit) : !(occ & bit)) continue;
                BasisKey nk = k;
                (op.species == 0 ? nk.occ0 : nk.occ1) ^= bit;
                int before = k.aux + (op.species == 1 ? __builtin_popcountll(k.occ0) : 0) +
                             popcount_below(occ, b);
                out.add(nk, (before % 2 == 0) ? a : -a);
            }
            (void)W;
            break;
        }
        case FermiOp::AuxCreate:
        case FermiOp::AuxAnnihilate: {
            bool create = (op.kind == FermiOp::AuxCreate);
            for (const auto& [k, a] : v.amp) {
                if (create ? (k.aux & 1) : !(k.aux & 1)) continue;
                BasisKey nk = k;
                nk.aux ^= 1;
                out.add(nk, a);  // aux slot is ordered first: no crossing sign
            }
            break;
        }
        case FermiOp::Phi: {
            if (kind_ != SpaceKind::BType) throw structural_error("phi lives on the B-type space");
            for (const auto& [k, a] : v.amp) {
                BasisKey nk = k;
                nk.aux ^= 1;
                out.add(nk, a * QExt::inv_sqrt2());
            }
            break;
        }
    }
    return out;
}

FockVec FockSpace::apply_ops(const std::vector<FermiOp>& ops, FockVec v) const {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        v = apply_op(*it, v);
        if (v.is_zero()) break;
    }
    return v;
}

FockVec FockSpace::apply_poly(const CliffPoly& p, const FockVec& v) const {
    FockVec out;
    for (const auto& [c, ops] : p) {
        if (c.is_zero()) continue;
        out += apply_ops(ops, v).scaled(c);
    }
    return out;
}

FockVec FockSpace::apply_factors(const std::vector<CliffPoly>& fs, FockVec v) const {
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) v = apply_poly(*it, v);
    return v;
}

void FockSpace::require_interior(const FockVec& v, int margin) const {
    if (margin <= 0) return;
    const int W = win_.width();
    if (2 * margin >= W) throw window_overflow("window overflow: margin exceeds window");
    uint64_t bottom = (1ull << margin) - 1;                  // modes lo..lo+margin-1
    uint64_t top = bottom << (W - margin);                   // modes hi-margin..hi-1
    for (const auto& [k, a] : v.amp) {
        for (int sp = 0; sp < species_count(); ++sp) {
            uint64_t occ = sp == 0 ? k.occ0 : k.occ1;
            if ((occ & bottom) != bottom || (occ & top) != 0)
                throw window_overflow("window overflow: state touches the window edge");
        }
    }
}

FockVec FockSpace::apply_oscillator(int species, int n, const FockVec& v) const {
    if (n == 0) throw structural_error("oscillator index 0 not supported");
    if (species >= species_count()) throw structural_error("bad species");
    require_interior(v, std::abs(n));
    FockVec out;
    const int W = win_.width();
    for (const auto& [k, a] : v.amp) {
        uint64_t occ = species == 0 ? k.occ0 : k.occ1;
        for (int bi = 0; bi < W; ++bi) {
            int bj = bi + n;  // annihilate at mode i+n (bit bj), create at mode i (bit bi)
            if (bj < 0 || bj >= W) continue;
            if (!(occ & (1ull << bj))) continue;
            if (occ & (1ull << bi)) continue;
            uint64_t mid = occ ^ (1ull << bj);
            int s1 = k.aux + (species == 1 ? __builtin_popcountll(k.occ0) : 0) + popcount_below(occ, bj);
            int s2 = k.aux + (species == 1 ? __builtin_popcountll(k.occ0) : 0) + popcount_below(mid, bi);
            BasisKey nk = k;
            (species == 0 ? nk.occ0 : nk.occ1) = mid | (1ull << bi);
            out.add(nk, ((s1 + s2) % 2 == 0) ? a : -a);
        }
    }
    return out;
}

QExt FockSpace::vacuum_amp(const FockVec& v) const {
    auto it = v.amp.find(vacuum_key());
    return it == v.amp.end() ? QExt::zero() : it->second;
}

QExt FockSpace::pair_with(const std::vector<FermiOp>& bra_ops, const FockVec& v) const {
    return vacuum_amp(apply_ops(bra_ops, v));
}

QExt FockSpace::pair_with(const CliffPoly& bra, const FockVec& v) const {
    return vacuum_amp(apply_poly(bra, v));
}

QExt FockSpace::vev(const CliffPoly& p) const { return pair_with(p, vacuum()); }

// --- derived generators ------------------------------------------------------

CliffPoly op_psi1(int mode, bool dag) {
    return {{QExt::one(), {dag ? FermiOp::annihilate(0, mode) : FermiOp::create(0, mode)}}};
}
CliffPoly op_psi2(int mode, bool dag) {
    return {{QExt::one(), {dag ? FermiOp::annihilate(1, mode) : FermiOp::create(1, mode)}}};
}
CliffPoly op_aux_psi(bool dag) { return {{QExt::one(), {FermiOp::aux(dag)}}}; }

CliffPoly op_f(int i, bool dag) {
    if (i == 0) return op_aux_psi(dag);
    if (i > 0) {
        if (i % 2 == 1) return op_psi1((i - 1) / 2, dag);
        return op_psi2((i - 2) / 2, dag);
    }
    // i < 0
    if (i % 2 == 0) return op_psi1(i / 2, dag);
    return poly_scale(op_psi2((i - 1) / 2, dag), -QExt::one());
}

CliffPoly op_b(int j) {
    auto p = poly_scale(op_f(j, false), QExt::inv_sqrt2());
    QExt s = QExt::inv_sqrt2();
    if (j % 2 != 0) s = -s;
    return poly_add(std::move(p), poly_scale(op_f(-j, true), s));
}

CliffPoly op_bhat(int j) {
    auto p = poly_scale(op_f(j, false), QExt::imag() * QExt::inv_sqrt2());
    QExt s = QExt::imag() * QExt::inv_sqrt2();
    if (j % 2 == 0) s = -s;
    return poly_add(std::move(p), poly_scale(op_f(-j, true), s));
}

CliffPoly op_phi_tc() {
    return poly_add(poly_scale(op_aux_psi(false), QExt::inv_sqrt2()),
                    poly_scale(op_aux_psi(true), QExt::inv_sqrt2()));
}

CliffPoly op_phihat_tc() {
    auto i = QExt::imag() * QExt::inv_sqrt2();
    return poly_add(poly_scale(op_aux_psi(false), i), poly_scale(op_aux_psi(true), -i));
}

CliffPoly op_bpsi(int j, bool dag) {
    if (!dag)
        return poly_add(poly_scale(op_psi1(j, false), QExt::inv_sqrt2()),
                        poly_scale(op_psi2(-1 - j, true), QExt::inv_sqrt2()));
    return poly_add(poly_scale(op_psi1(j, true), QExt::inv_sqrt2()),
                    poly_scale(op_psi2(-1 - j, false), QExt::inv_sqrt2()));
}

CliffPoly op_bpsihat(int j, bool dag) {
    auto i = QExt::imag() * QExt::inv_sqrt2();
    if (!dag)
        return poly_add(poly_scale(op_psi1(j, false), i), poly_scale(op_psi2(-1 - j, true), -i));
    return poly_add(poly_scale(op_psi1(j, true), -i), poly_scale(op_psi2(-1 - j, false), i));
}

CliffPoly op_bmode(int mode, bool dag) {
    return {{QExt::one(), {dag ? FermiOp::annihilate(0, mode) : FermiOp::create(0, mode)}}};
}
CliffPoly op_phi_b() { return {{QExt::one(), {FermiOp::phi()}}}; }

// --- charged vacua -----------------------------------------------------------

namespace {

// Psi^{(a)}_n as a written-left-to-right op vector (applied right to left)
std::vector<FermiOp> cap_psi(int sp, int n) {
    std::vector<FermiOp> ops;
    if (n > 0)
        for (int i = n - 1; i >= 0; --i) ops.push_back(FermiOp::create(sp, i));
    else
        for (int i = n; i <= -1; ++i) ops.push_back(FermiOp::annihilate(sp, i));
    return ops;
}

std::vector<FermiOp> cap_psi_dag(int sp, int n) {
    std::vector<FermiOp> ops;
    if (n > 0)
        for (int i = 0; i <= n - 1; ++i) ops.push_back(FermiOp::annihilate(sp, i));
    else
        for (int i = -1; i >= n; --i) ops.push_back(FermiOp::create(sp, i));
    return ops;
}

}  // namespace

std::vector<FermiOp> ket_string_nmk(int n, int m, int k) {
    std::vector<FermiOp> ops = cap_psi(1, m);
    auto p1 = cap_psi(0, n);
    ops.insert(ops.end(), p1.begin(), p1.end());
    if (k) ops.push_back(FermiOp::aux(false));
    return ops;
}

std::vector<FermiOp> bra_string_nmk(int n, int m, int k) {
    std::vector<FermiOp> ops;
    if (k) ops.push_back(FermiOp::aux(true));
    auto p1 = cap_psi_dag(0, n);
    ops.insert(ops.end(), p1.begin(), p1.end());
    auto p2 = cap_psi_dag(1, m);
    ops.insert(ops.end(), p2.begin(), p2.end());
    return ops;
}

std::vector<FermiOp> bra_string_interleaved(int n) {
    // <0| prod_r psi†(1)_r psi(2)_{-1-r}; pairing the two species mode by mode
    // absorbs the Wick reordering sign, so the tau0 oracle lands exactly on
    // the determinant closed form for every charge
    std::vector<FermiOp> ops;
    if (n >= 0) {
        for (int r = 0; r < n; ++r) {
            ops.push_back(FermiOp::annihilate(0, r));
            ops.push_back(FermiOp::create(1, -1 - r));
        }
    } else {
        for (int r = 1; r <= -n; ++r) {
            ops.push_back(FermiOp::create(0, -r));
            ops.push_back(FermiOp::annihilate(1, r - 1));
        }
    }
    return ops;
}

CliffPoly ket_poly_b(int n) {
    if (n % 2 == 0) return {{QExt::one(), cap_psi(0, n)}};
    auto ops = cap_psi(0, n);
    ops.push_back(FermiOp::phi());
    return {{QExt::sqrt2(), ops}};
}

CliffPoly bra_poly_b(int n) {
    if (n % 2 == 0) return {{QExt::one(), cap_psi_dag(0, n)}};
    std::vector<FermiOp> ops{FermiOp::phi()};
    auto p = cap_psi_dag(0, n);
    ops.insert(ops.end(), p.begin(), p.end());
    return {{QExt::sqrt2(), ops}};
}

FockVec charged_ket_tc(const FockSpace& sp, int n, int m, int k) {
    return sp.apply_ops(ket_string_nmk(n, m, k), sp.vacuum());
}

FockVec charged_ket_b(const FockSpace& sp, int n) {
    return sp.apply_poly(ket_poly_b(n), sp.vacuum());
}

// --- group-element builders ----------------------------------------------------

namespace {
CliffPoly one_poly() { return {{QExt::one(), {}}}; }

Rat rat_power(const Rat& z, int e) {
    if (e < 0) {
        if (z == 0) throw structural_error("zero support point raised to a negative power");
        return Rat(1) / rat_power(z, -e);
    }
    Rat acc(1);
    for (int i = 0; i < e; ++i) acc *= z;
    return acc;
}
}  // namespace

std::vector<CliffPoly> factors_from_moment(const MomentMatrix& M, bool dagger_first) {
    std::vector<CliffPoly> fs;
    for (const auto& [ij, v] : M.entries) {
        auto [i, j] = ij;
        CliffPoly f = one_poly();
        std::vector<FermiOp> ops;
        if (dagger_first)
            ops = {FermiOp::annihilate(1, -1 - j), FermiOp::create(0, i)};
        else
            ops = {FermiOp::create(0, i), FermiOp::annihilate(1, -1 - j)};
        f.emplace_back(QExt(v), std::move(ops));
        fs.push_back(std::move(f));
    }
    return fs;
}

std::vector<CliffPoly> factors_from_bdata(const BData& q) {
    std::vector<CliffPoly> fs;
    for (const auto& [ij, c] : q.A) {
        auto [i, j] = ij;  // i < j
        CliffPoly f = one_poly();
        f.emplace_back(QExt(c), std::vector<FermiOp>{FermiOp::create(0, i), FermiOp::create(0, j)});
        fs.push_back(std::move(f));
    }
    if (!q.a.empty()) {
        // 1 + sum_i a_i psi_i Phi with Phi = sqrt2 phi; the whole odd sum is
        // nilpotent, so this single factor is the exact exponential
        CliffPoly f = one_poly();
        for (const auto& [i, c] : q.a)
            f.emplace_back(QExt(c) * QExt::sqrt2(),
                           std::vector<FermiOp>{FermiOp::create(0, i), FermiOp::phi()});
        fs.push_back(std::move(f));
    }
    return fs;
}

std::vector<CliffPoly> factors_h_hhat(const BData& q) {
    std::vector<CliffPoly> fs;
    auto emit = [&](bool hat) {
        for (const auto& [ij, c] : q.A) {
            auto [i, j] = ij;
            auto pi = hat ? op_bpsihat(i, false) : op_bpsi(i, false);
            auto pj = hat ? op_bpsihat(j, false) : op_bpsi(j, false);
            fs.push_back(poly_add(one_poly(), poly_scale(poly_mul(pi, pj), QExt(c))));
        }
        if (!q.a.empty()) {
            CliffPoly f = one_poly();
            auto phi = hat ? op_phihat_tc() : op_phi_tc();
            for (const auto& [i, c] : q.a) {
                auto pi = hat ? op_bpsihat(i, false) : op_bpsi(i, false);
                f = poly_add(std::move(f),
                             poly_scale(poly_mul(pi, phi), QExt(c) * QExt::sqrt2()));
            }
            fs.push_back(std::move(f));
        }
    };
    emit(false);
    emit(true);
    return fs;
}

namespace {

// unordered representatives of an antisymmetric pair table
std::vector<DiscreteMeasure::PairPt> unordered_pairs(const DiscreteMeasure& mu) {
    if (!mu.antisym) throw structural_error("B-type pair measure must be antisymmetric");
    std::vector<DiscreteMeasure::PairPt> reps;
    std::vector<bool> used(mu.pair_pts.size(), false);
    for (size_t p = 0; p < mu.pair_pts.size(); ++p) {
        if (used[p]) continue;
        used[p] = true;
        for (size_t r = p + 1; r < mu.pair_pts.size(); ++r) {
            if (used[r]) continue;
            const auto& a = mu.pair_pts[p];
            const auto& b = mu.pair_pts[r];
            if (a.z1 == b.z2 && a.z2 == b.z1 && a.w == -b.w) {
                used[r] = true;
                break;
            }
        }
        reps.push_back(mu.pair_pts[p]);
    }
    return reps;
}

}  // namespace

std::vector<CliffPoly> factors_from_pair_measure_b(const DiscreteMeasure& mu, int imin, int imax) {
    std::vector<CliffPoly> fs;
    for (const auto& p : unordered_pairs(mu)) {
        CliffPoly f = one_poly();
        for (int i = imin; i <= imax; ++i)
            for (int j = imin; j <= imax; ++j) {
                if (i == j) continue;
                Rat c = p.w * rat_power(p.z1, i) * rat_power(p.z2, j);
                f.emplace_back(QExt(c), std::vector<FermiOp>{FermiOp::create(0, i), FermiOp::create(0, j)});
            }
        fs.push_back(std::move(f));
    }
    if (!mu.single_pts.empty()) {
        CliffPoly f = one_poly();
        for (const auto& q : mu.single_pts)
            for (int i = imin; i <= imax; ++i) {
                Rat c = q.w * rat_power(q.z, i);
                f.emplace_back(QExt(c) * QExt::sqrt2(),
                               std::vector<FermiOp>{FermiOp::create(0, i), FermiOp::phi()});
            }
        fs.push_back(std::move(f));
    }
    return fs;
}

std::vector<CliffPoly> factors_from_measure_2kp(const DiscreteMeasure& mu, int imin, int imax) {
    std::vector<CliffPoly> fs;
    for (const auto& p : mu.pair_pts) {
        CliffPoly f = one_poly();
        for (int i = imin; i <= imax; ++i)
            for (int j = imin; j <= imax; ++j) {
                Rat c = p.w * rat_power(p.z1, i) * rat_power(p.z2, j);
                f.emplace_back(QExt(c), std::vector<FermiOp>{FermiOp::create(0, i),
                                                             FermiOp::annihilate(1, -1 - j)});
            }
        fs.push_back(std::move(f));
    }
    return fs;
}

std::vector<CliffPoly> factors_h_hhat_measure(const DiscreteMeasure& mu, int imin, int imax) {
    std::vector<CliffPoly> fs;
    auto emit = [&](bool hat) {
        for (const auto& p : unordered_pairs(mu)) {
            CliffPoly f = one_poly();
            for (int i = imin; i <= imax; ++i)
                for (int j = imin; j <= imax; ++j) {
                    if (i == j) continue;
                    Rat c = p.w * rat_power(p.z1, i) * rat_power(p.z2, j);
                    auto pi = hat ? op_bpsihat(i, false) : op_bpsi(i, false);
                    auto pj = hat ? op_bpsihat(j, false) : op_bpsi(j, false);
                    f = poly_add(std::move(f), poly_scale(poly_mul(pi, pj), QExt(c)));
                }
            fs.push_back(std::move(f));
        }
        if (!mu.single_pts.empty()) {
            CliffPoly f = one_poly();
            auto phi = hat ? op_phihat_tc() : op_phi_tc();
            for (const auto& q : mu.single_pts)
                for (int i = imin; i <= imax; ++i) {
                    Rat c = q.w * rat_power(q.z, i);
                    auto pi = hat ? op_bpsihat(i, false) : op_bpsi(i, false);
                    f = poly_add(std::move(f), poly_scale(poly_mul(pi, phi), QExt(c) * QExt::sqrt2()));
                }
            fs.push_back(std::move(f));
        }
    };
    emit(false);
    emit(true);
    return fs;
}

// --- the oracle ----------------------------------------------------------------

namespace {

struct OscVar {
    int slot;     // logical time set
    int species;  // oscillator species
    int dir;      // +1 left (alpha_{+k}), -1 right (alpha_{-k})
    int k;
};

struct OracleFrame {
    const FockSpace* sp;
    const LayoutPtr* lay;
    const std::vector<SlotRef>* slots;
    const CliffPoly* bra;
    TruncatedSeries* out;
    std::vector<uint16_t> exps;  // per layout flat var
    std::vector<int> chan_used;  // weight per channel
    int total_used = 0;
};

// weight budget helpers against the layout caps
bool budget_ok(const OracleFrame& f, int channel, int extra) {
    const ChannelLayout& L = **f.lay;
    if (f.total_used + extra > L.total_cap()) return false;
    if (f.chan_used[channel] + extra > L.channel_cap(channel)) return false;
    return true;
}

void dfs_vars(OracleFrame& f, const std::vector<OscVar>& vars, size_t vi, const FockVec& state,
              const Rat& invfact, int negpow,
              const std::function<void(const FockVec&, const Rat&, int, OracleFrame&)>& leaf) {
    leaf(state, invfact, negpow, f);
    if (state.is_zero()) return;
    for (size_t i = vi; i < vars.size(); ++i) {
        const auto& v = vars[i];
        int channel = (*f.slots)[v.slot].channel;
        const ChannelLayout& L = **f.lay;
        if (v.k > L.channel(channel).nvars) continue;
        if (!budget_ok(f, channel, v.k)) continue;
        int pos = L.var_pos(channel, v.k);
        // apply one more power of this oscillator
        FockVec next = f.sp->apply_oscillator(v.species, v.dir * v.k, state);
        if (next.is_zero()) continue;
        f.exps[pos] += 1;
        f.chan_used[channel] += v.k;
        f.total_used += v.k;
        int m = f.exps[pos];
        Rat nf = invfact / Rat(m);
        int np = negpow + ((*f.slots)[v.slot].neg ? 1 : 0);
        dfs_vars(f, vars, i, next, nf, np, leaf);
        f.exps[pos] -= 1;
        f.chan_used[channel] -= v.k;
        f.total_used -= v.k;
    }
}

}  // namespace

TruncatedSeries tau_oracle(const FockSpace& sp, const OracleProblem& p, const LayoutPtr& lay,
                           const std::vector<SlotRef>& slots) {
    int arity = 0, nslots = 0;
    switch (p.kind) {
        case OracleKind::Tau0N: arity = 1; nslots = 2; break;
        case OracleKind::Tau1N: arity = 1; nslots = 2; break;
        case OracleKind::TauBN: arity = 1; nslots = 1; break;
        case OracleKind::TauBNM: arity = 2; nslots = 2; break;
        case OracleKind::Tau0NML: arity = 3; nslots = 4; break;
    }
    if (static_cast<int>(p.charges.size()) != arity) throw structural_error("oracle: bad charge count");
    if (static_cast<int>(slots.size()) != nslots) throw structural_error("oracle: bad slot count");

    bool bspace = (p.kind == OracleKind::TauBN || p.kind == OracleKind::TauBNM);
    if (bspace != (sp.kind() == SpaceKind::BType))
        throw structural_error("oracle: space kind does not match tau kind");

    // ket, bra and oscillator variable sets per kind
    FockVec ket;
    CliffPoly bra;
    std::vector<OscVar> left_vars, right_vars;
    const int kmax = lay->total_cap();
    auto add_vars = [&](std::vector<OscVar>& vs, int slot, int species, int dir) {
        for (int k = 1; k <= kmax; ++k) vs.push_back({slot, species, dir, k});
    };
    switch (p.kind) {
        case OracleKind::Tau0N: {
            int n = p.charges[0];
            ket = charged_ket_tc(sp, 0, 0, 0);
            bra = {{QExt::one(),
                    p.standard_bra ? bra_string_nmk(n, -n, 0) : bra_string_interleaved(n)}};
            add_vars(left_vars, 0, 0, +1);
            add_vars(left_vars, 1, 1, +1);
            break;
        }
        case OracleKind::Tau1N: {
            int n = p.charges[0];
            ket = charged_ket_tc(sp, 0, 0, 0);
            bra = {{QExt::one(), bra_string_nmk(n - 1, -n, 1)}};
            add_vars(left_vars, 0, 0, +1);
            add_vars(left_vars, 1, 1, +1);
            break;
        }
        case OracleKind::TauBN: {
            int n = p.charges[0];
            ket = charged_ket_b(sp, 0);
            bra = bra_poly_b(n);
            add_vars(left_vars, 0, 0, +1);
            break;
        }
        case OracleKind::TauBNM: {
            int n = p.charges[0], m = p.charges[1];
            ket = charged_ket_b(sp, m);
            bra = bra_poly_b(n);
            add_vars(left_vars, 0, 0, +1);
            add_vars(right_vars, 1, 0, -1);
            break;
        }
        case OracleKind::Tau0NML: {
            int n = p.charges[0], m = p.charges[1], l = p.charges[2];
            ket = charged_ket_tc(sp, m, l - m, 0);
            bra = {{QExt::one(), bra_string_nmk(n, l - n, 0)}};
            add_vars(left_vars, 0, 0, +1);
            add_vars(left_vars, 1, 1, +1);
            add_vars(right_vars, 2, 0, -1);
            add_vars(right_vars, 3, 1, -1);
            break;
        }
    }

    TruncatedSeries out(lay);
    OracleFrame fr;
    fr.sp = &sp;
    fr.lay = &lay;
    fr.slots = &slots;
    fr.bra = &bra;
    fr.out = &out;
    fr.exps.assign(lay->var_count(), 0);
    fr.chan_used.assign(lay->channel_count(), 0);

    std::map<Mono, QExt> acc;

    std::function<void(const FockVec&, const Rat&, int, OracleFrame&)> left_leaf =
        [&](const FockVec& st, const Rat& invfact, int negpow, OracleFrame& f) {
            QExt val = sp.pair_with(bra, st);
            if (val.is_zero()) return;
            Mono m;
            m.e = f.exps;
            m.w = f.total_used;
            Rat c = invfact;
            if (negpow % 2 != 0) c = -c;
            QExt add = val * QExt(c);
            auto [it, fresh] = acc.emplace(m, add);
            if (!fresh) it->second += add;
        };

    std::function<void(const FockVec&, const Rat&, int, OracleFrame&)> right_leaf =
        [&](const FockVec& st, const Rat& invfact, int negpow, OracleFrame& f) {
            FockVec g = sp.apply_factors(p.factors, st);
            if (g.is_zero()) return;
            // continue with the left expansion, holding the right exponents
            // in the shared frame
            dfs_vars(f, left_vars, 0, g,  invfact, negpow, left_leaf);
        };

    if (right_vars.empty()) {
        FockVec g = sp.apply_factors(p.factors, ket);
        dfs_vars(fr, left_vars, 0, g, Rat(1), 0, left_leaf);
    } else {
        dfs_vars(fr, right_vars, 0, ket, Rat(1), 0, right_leaf);
    }

    for (auto& [m, v] : acc) {
        if (v.is_zero()) continue;
        if (v.is_rational()) {
            out.add_term(m, v.a);
        } else if (p.allow_sqrt2 && v.a == 0 && v.c == 0 && v.d == 0) {
            out.add_term(m, v.b);
        } else {
            throw structural_error("oracle produced an irrational tau coefficient");
        }
    }
    return out;
}

ModeWindow suggest_window_tc(int max_charge, int cap_left, int cap_right, int max_factor_mode) {
    int r = std::abs(max_charge) + max_factor_mode + cap_left + cap_right + 2;
    return {-r, r + 1};
}

ModeWindow suggest_window_b(int max_charge, int cap_left, int cap_right, int max_factor_mode) {
    int r = std::abs(max_charge) + max_factor_mode + cap_left + cap_right + 2;
    return {-r, r + 1};
}

// --- wick --------------------------------------------------------------------

CliffPoly LinearFermion::poly() const {
    CliffPoly p;
    for (const auto& [m, c] : v) p.emplace_back(QExt(c), std::vector<FermiOp>{FermiOp::create(0, m)});
    for (const auto& [m, c] : u) p.emplace_back(QExt(c), std::vector<FermiOp>{FermiOp::annihilate(0, m)});
    return p;
}

Rat vacuum_expectation(const FockSpace& sp, const std::vector<LinearFermion>& ws, int charge) {
    FockVec st = charged_ket_b(sp, charge);
    for (auto it = ws.rbegin(); it != ws.rend(); ++it) st = sp.apply_poly(it->poly(), st);
    QExt val = sp.pair_with(bra_poly_b(charge), st);
    if (!val.is_rational()) throw structural_error("vacuum expectation not rational");
    return val.a;
}

WickReport wick_check(const FockSpace& sp, const std::vector<LinearFermion>& ws, int charge) {
    WickReport rep;
    rep.direct = vacuum_expectation(sp, ws, charge);
    int n = static_cast<int>(ws.size());
    if (n % 2 != 0) {
        rep.pfaffian = Rat(0);
    } else {
        DenseMat<Rat> A(n, n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                A.at(i, j) = vacuum_expectation(sp, {ws[i], ws[j]}, charge);
                A.at(j, i) = -A.at(i, j);
            }
        rep.pfaffian = pfaffian_expand(A, rat_ring());
    }
    rep.pass = (rep.direct == rep.pfaffian);
    return rep;
}

// --- clifford battery ----------------------------------------------------------

namespace {

bool vec_equal(const FockVec& a, const FockVec& b) {
    FockVec d = a;
    for (const auto& [k, v] : b.amp) d.add(k, -v);
    return d.is_zero();
}

FockVec anticommutator(const FockSpace& sp, const CliffPoly& X, const CliffPoly& Y, const FockVec& v) {
    FockVec r = sp.apply_poly(X, sp.apply_poly(Y, v));
    r += sp.apply_poly(Y, sp.apply_poly(X, v));
    return r;
}

}  // namespace

std::vector<RelationResult> clifford_check(const FockSpace& sp) {
    if (sp.kind() != SpaceKind::TwoComponent)
        throw structural_error("clifford_check runs on the two-component space");
    std::vector<RelationResult> out;

    // interior test states: vacuum and a few nearby excitations
    std::vector<FockVec> states;
    states.push_back(sp.vacuum());
    states.push_back(sp.apply_ops({FermiOp::create(0, 0)}, sp.vacuum()));
    states.push_back(sp.apply_ops({FermiOp::create(1, 1), FermiOp::annihilate(0, -1)}, sp.vacuum()));
    states.push_back(sp.apply_ops({FermiOp::aux(false), FermiOp::create(0, 0)}, sp.vacuum()));

    auto check_acomm = [&](const std::string& name, const CliffPoly& X, const CliffPoly& Y,
                           const QExt& expect) {
        for (const auto& st : states) {
            FockVec lhs = anticommutator(sp, X, Y, st);
            FockVec rhs = st.scaled(expect);
            if (!vec_equal(lhs, rhs)) {
                out.push_back({name, false, "anticommutator mismatch on a test state"});
                return;
            }
        }
        out.push_back({name, true, ""});
    };

    // basis CAR
    check_acomm("[psi1_0, psi1d_0]+ = 1", op_psi1(0, false), op_psi1(0, true), QExt::one());
    check_acomm("[psi1_1, psi2d_1]+ = 0", op_psi1(1, false), op_psi2(1, true), QExt::zero());
    check_acomm("[aux, auxd]+ = 1", op_aux_psi(false), op_aux_psi(true), QExt::one());

    // relabeled charged fermions
    for (int i : {-2, -1, 0, 1, 2})
        for (int j : {-2, -1, 0, 1, 2}) {
            std::ostringstream nm;
            nm << "[f_" << i << ", fd_" << j << "]+ = delta";
            check_acomm(nm.str(), op_f(i, false), op_f(j, true),
                        i == j ? QExt::one() : QExt::zero());
        }
    check_acomm("[f_1, f_-1]+ = 0", op_f(1, false), op_f(-1, false), QExt::zero());

    // neutral fermions
    for (int i : {-2, -1, 0, 1, 2})
        for (int j : {-2, -1, 0, 1, 2}) {
            std::ostringstream nm;
            nm << "[b_" << i << ", bhat_" << j << "]+ = 0";
            check_acomm(nm.str(), op_b(i), op_bhat(j), QExt::zero());
            QExt expect = QExt::zero();
            if (i == -j) expect = (i % 2 == 0) ? QExt::one() : -QExt::one();
            std::ostringstream nm2;
            nm2 << "[b_" << i << ", b_" << j << "]+ = (-)^i delta_{i,-j}";
            check_acomm(nm2.str(), op_b(i), op_b(j), expect);
            std::ostringstream nm3;
            nm3 << "[bhat_" << i << ", bhat_" << j << "]+ = (-)^i delta_{i,-j}";
            check_acomm(nm3.str(), op_bhat(i), op_bhat(j), expect);
        }

    // phi and the relabeled B fermions
    check_acomm("phi^2 = 1/2 (via [phi,phi]+ = 1)", op_phi_tc(), op_phi_tc(), QExt::one());
    check_acomm("phihat^2 = 1/2", op_phihat_tc(), op_phihat_tc(), QExt::one());
    check_acomm("[phi, phihat]+ = 0", op_phi_tc(), op_phihat_tc(), QExt::zero());
    for (int n : {-1, 0, 1})
        for (int m : {-1, 0, 1}) {
            std::ostringstream nm;
            nm << "[bpsi_" << n << ", bpsid_" << m << "]+ = delta";
            check_acomm(nm.str(), op_bpsi(n, false), op_bpsi(m, true),
                        n == m ? QExt::one() : QExt::zero());
            std::ostringstream nm2;
            nm2 << "[bpsihat_" << n << ", bpsihatd_" << m << "]+ = delta";
            check_acomm(nm2.str(), op_bpsihat(n, false), op_bpsihat(m, true),
                        n == m ? QExt::one() : QExt::zero());
            std::ostringstream nm3;
            nm3 << "[bpsi_" << n << ", bpsihatd_" << m << "]+ = 0";
            check_acomm(nm3.str(), op_bpsi(n, false), op_bpsihat(m, true), QExt::zero());
        }
    check_acomm("[bpsi_0, phi]+ = 0", op_bpsi(0, false), op_phi_tc(), QExt::zero());

    // oscillator commutators on interior states
    auto check_osc = [&](const std::string& name, int a, int na, int b, int nb, const Rat& cexp) {
        for (const auto& st : states) {
            FockVec lhs = sp.apply_oscillator(a, na, sp.apply_oscillator(b, nb, st));
            FockVec tmp = sp.apply_oscillator(b, nb, sp.apply_oscillator(a, na, st));
            for (const auto& [k, v] : tmp.amp) lhs.add(k, -v);
            FockVec rhs = st.scaled(QExt(cexp));
            if (!vec_equal(lhs, rhs)) {
                out.push_back({name, false, "oscillator commutator mismatch"});
                return;
            }
        }
        out.push_back({name, true, ""});
    };
    check_osc("[alpha1_1, alpha1_-1] = 1", 0, 1, 0, -1, Rat(1));
    check_osc("[alpha1_2, alpha1_-2] = 2", 0, 2, 0, -2, Rat(2));
    check_osc("[alpha2_1, alpha2_-1] = 1", 1, 1, 1, -1, Rat(1));
    check_osc("[alpha1_1, alpha2_-1] = 0", 0, 1, 1, -1, Rat(0));
    check_osc("[alpha1_1, alpha1_-2] = 0", 0, 1, 0, -2, Rat(0));

    // gamma oscillators built from the neutral fermions; window-truncated sums
    int reach = 3;
    int irange = (sp.window().hi - 1 - reach) / 2;
    auto gamma_poly = [&](int n) {
        CliffPoly g;
        for (int i = -2 * irange; i <= 2 * irange; ++i) {
            if (std::abs(i + n) > 2 * irange) continue;  // second index is -i-n
            auto prod = poly_mul(op_b(i), op_b(-i - n));
            QExt c = QExt(Rat(1, 2));
            if (i % 2 == 0) c = -c;  // (-)^{i+1}
            // normal ordering: subtract the vacuum expectation
            QExt v = sp.vev(prod);
            g = poly_add(std::move(g), poly_scale(prod, c));
            if (!v.is_zero()) g.emplace_back(-c * v, std::vector<FermiOp>{});
        }
        return g;
    };
    auto check_gamma = [&](const std::string& name, int n, int m, const Rat& cexp) {
        auto gn = gamma_poly(n);
        auto gm = gamma_poly(m);
        // vacuum-adjacent interior states only
        std::vector<FockVec> vstates;
        vstates.push_back(sp.vacuum());
        vstates.push_back(sp.apply_ops({FermiOp::create(0, 0)}, sp.vacuum()));
        for (const auto& st : vstates) {
            FockVec lhs = sp.apply_poly(gn, sp.apply_poly(gm, st));
            FockVec tmp = sp.apply_poly(gm, sp.apply_poly(gn, st));
            for (const auto& [k, v] : tmp.amp) lhs.add(k, -v);
            FockVec rhs = st.scaled(QExt(cexp));
            if (!vec_equal(lhs, rhs)) {
                out.push_back({name, false, "gamma commutator mismatch"});
                return;
            }
        }
        out.push_back({name, true, ""});
    };
    check_gamma("[gamma_1, gamma_-1] = 1/2", 1, -1, Rat(1, 2));
    check_gamma("[gamma_1, gamma_-3] = 0", 1, -3, Rat(0));
    check_gamma("[gamma_3, gamma_-3] = 3/2", 3, -3, Rat(3, 2));

    // gamma_n vanishes for even n on vacuum-adjacent states
    {
        auto g2 = gamma_poly(2);
        bool pass = sp.apply_poly(g2, sp.vacuum()).is_zero() &&
                    sp.apply_poly(g2, sp.apply_ops({FermiOp::create(0, 0)}, sp.vacuum())).is_zero();
        out.push_back({"gamma_2 = 0", pass, pass ? "" : "gamma_2 acts nontrivially"});
    }

    // beta_l + betahat_l = alpha1_l - alpha2_l on interior states
    auto beta_poly = [&](int l, bool hat) {
        CliffPoly g;
        int jr = irange;
        for (int j = -jr; j <= jr; ++j) {
            if (j + l < -jr || j + l > jr) continue;
            auto prod = hat ? poly_mul(op_bpsihat(j, false), op_bpsihat(j + l, true))
                            : poly_mul(op_bpsi(j, false), op_bpsi(j + l, true));
            QExt v = sp.vev(prod);
            g = poly_add(std::move(g), prod);
            if (!v.is_zero()) g.emplace_back(-v, std::vector<FermiOp>{});
        }
        return g;
    };
    for (int l : {1, 2, -1}) {
        auto bl = poly_add(beta_poly(l, false), beta_poly(l, true));
        bool pass = true;
        for (const auto& st : states) {
            FockVec lhs = sp.apply_poly(bl, st);
            FockVec rhs = sp.apply_oscillator(0, l, st);
            FockVec a2 = sp.apply_oscillator(1, l, st);
            for (const auto& [k, v] : a2.amp) rhs.add(k, -v);
            if (!vec_equal(lhs, rhs)) {
                pass = false;
                break;
            }
        }
        std::ostringstream nm;
        nm << "beta_" << l << " + betahat_" << l << " = alpha1_" << l << " - alpha2_" << l;
        out.push_back({nm.str(), pass, pass ? "" : "relabeling identity fails"});
    }

    return out;
}

}  // namespace pfl
