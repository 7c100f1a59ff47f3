#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "pfafflab/qext.hpp"
#include "pfafflab/series.hpp"
#include "pfafflab/tau_data.hpp"

namespace pfl {

// Finite interval [lo, hi) of mode indices; every operator used in a
// computation must act strictly inside it, and the Dirac sea (negative modes
// filled) must be representable, so lo < 0 <= hi is required.
struct ModeWindow {
    int lo, hi;
    int width() const { return hi - lo; }
};

enum class SpaceKind {
    TwoComponent,  // charged pair psi^(1), psi^(2) plus the extra mode psi
    BType          // single species psi plus phi
};

// Basis fermion symbols. For window species: Create flips a mode 0 -> 1,
// Annihilate flips 1 -> 0 (so psi_i acts as the creator at site i and the
// vacuum has all negative sites filled). Aux ops address the extra mode; Phi
// is the B-side phi with phi^2 = 1/2.
struct FermiOp {
    enum Kind : uint8_t { Create, Annihilate, AuxCreate, AuxAnnihilate, Phi };
    Kind kind;
    uint8_t species = 0;
    int mode = 0;

    static FermiOp create(int sp, int mode) { return {Create, static_cast<uint8_t>(sp), mode}; }
    static FermiOp annihilate(int sp, int mode) { return {Annihilate, static_cast<uint8_t>(sp), mode}; }
    static FermiOp aux(bool dag) { return {dag ? AuxAnnihilate : AuxCreate, 0, 0}; }
    static FermiOp phi() { return {Phi, 0, 0}; }
};

// c * w_1 w_2 ... w_r summands; the working representation of every group
// element, derived generator and vacuum string
using CliffTerm = std::pair<QExt, std::vector<FermiOp>>;
using CliffPoly = std::vector<CliffTerm>;

CliffPoly poly_mul(const CliffPoly& A, const CliffPoly& B);
CliffPoly poly_scale(const CliffPoly& A, const QExt& c);
CliffPoly poly_add(CliffPoly A, const CliffPoly& B);

struct BasisKey {
    uint64_t occ0 = 0, occ1 = 0;
    uint8_t aux = 0;
    auto operator<=>(const BasisKey&) const = default;
};

struct FockVec {
    std::map<BasisKey, QExt> amp;

    bool is_zero() const { return amp.empty(); }
    void add(const BasisKey& k, const QExt& v);
    FockVec scaled(const QExt& c) const;
    FockVec& operator+=(const FockVec& o);
};

class FockSpace {
public:
    FockSpace(SpaceKind kind, ModeWindow win);

    SpaceKind kind() const { return kind_; }
    const ModeWindow& window() const { return win_; }
    int species_count() const { return kind_ == SpaceKind::TwoComponent ? 2 : 1; }

    BasisKey vacuum_key() const;
    FockVec vacuum() const;

    FockVec apply_op(const FermiOp& op, const FockVec& v) const;
    FockVec apply_ops(const std::vector<FermiOp>& ops, FockVec v) const;  // rightmost first
    FockVec apply_poly(const CliffPoly& p, const FockVec& v) const;
    FockVec apply_factors(const std::vector<CliffPoly>& fs, FockVec v) const;  // last factor first

    // window-truncated oscillator alpha^{(sp)}_n = sum_i :psi_i psi†_{i+n}:,
    // n != 0; requires sea-like margins of width |n| at both window edges
    FockVec apply_oscillator(int species, int n, const FockVec& v) const;

    QExt vacuum_amp(const FockVec& v) const;
    // <0|S|v> for an operator string S
    QExt pair_with(const std::vector<FermiOp>& bra_ops, const FockVec& v) const;
    QExt pair_with(const CliffPoly& bra, const FockVec& v) const;
    // <0| P |0>
    QExt vev(const CliffPoly& p) const;

    // margin check used by the oscillators; throws window_overflow on failure
    void require_interior(const FockVec& v, int margin) const;

private:
    int slot_of(int species, int mode) const;  // global ordering position
    void check_mode(int mode) const;

    SpaceKind kind_;
    ModeWindow win_;
};

// --- derived generators (two-component space) -------------------------------

CliffPoly op_psi1(int mode, bool dag);
CliffPoly op_psi2(int mode, bool dag);
CliffPoly op_aux_psi(bool dag);
// charged fermions f_i of the one-species realization, via the relabeling
CliffPoly op_f(int i, bool dag);
// neutral fermions from the omega involution
CliffPoly op_b(int j);
CliffPoly op_bhat(int j);
// phi, phihat built on the extra mode
CliffPoly op_phi_tc();
CliffPoly op_phihat_tc();
// relabeled B fermions psi_j, psihat_j and daggers
CliffPoly op_bpsi(int j, bool dag);
CliffPoly op_bpsihat(int j, bool dag);

// --- B-type space primitives ------------------------------------------------

CliffPoly op_bmode(int mode, bool dag);  // psi_j of the B space
CliffPoly op_phi_b();                    // phi with phi^2 = 1/2

// --- charged vacua ----------------------------------------------------------

// op strings such that |n,m,k> = string applied to |0>, and <n,m,k|v> =
// vacuum amplitude of (bra string applied to v)
std::vector<FermiOp> ket_string_nmk(int n, int m, int k);
std::vector<FermiOp> bra_string_nmk(int n, int m, int k);
// mode-interleaved variant of <n,-n,0| used by the tau0 oracle
std::vector<FermiOp> bra_string_interleaved(int n);
// B-side |n>, <n| (odd charges carry the sqrt2*phi factor)
CliffPoly ket_poly_b(int n);
CliffPoly bra_poly_b(int n);

FockVec charged_ket_tc(const FockSpace& sp, int n, int m, int k);
FockVec charged_ket_b(const FockSpace& sp, int n);

// --- group-element builders -------------------------------------------------

// one factor (1 + M_ij psi†(2)_{-1-j} psi(1)_i) per entry (or with the two
// fermions in the paper's written order when dagger_first is false)
std::vector<CliffPoly> factors_from_moment(const MomentMatrix& M, bool dagger_first = true);

// B-space h: (1 + A_ij psi_i psi_j) for i<j, then one odd factor
// (1 + sum_i a_i psi_i Phi) with Phi = sqrt2*phi
std::vector<CliffPoly> factors_from_bdata(const BData& q);

// two-component g = h hhat for the same BData (hatted copy via the involution)
std::vector<CliffPoly> factors_h_hhat(const BData& q);

// Measure-backed factors; fields truncated to modes imin..imax. One-sided
// computations may truncate at imin = 0 (negative modes die on the right
// vacuum); two-sided ones must keep modes down to (base charge - sbar reach),
// which is how the u^{-k} weights of the moment transforms arise.
std::vector<CliffPoly> factors_from_pair_measure_b(const DiscreteMeasure& mu, int imin, int imax);
std::vector<CliffPoly> factors_from_measure_2kp(const DiscreteMeasure& mu, int imin, int imax);
std::vector<CliffPoly> factors_h_hhat_measure(const DiscreteMeasure& mu, int imin, int imax);

// --- the oracle -------------------------------------------------------------

enum class OracleKind { Tau0N, Tau1N, TauBN, TauBNM, Tau0NML };

struct SlotRef {
    int channel = 0;
    bool neg = false;
};

struct OracleProblem {
    OracleKind kind;
    std::vector<int> charges;        // {n} / {n} / {n} / {n,m} / {n,m,l}
    std::vector<CliffPoly> factors;  // group element as an ordered factor list
    // Tau0N only: pair against the literal <n,-n,0| instead of the
    // interleaved bra (used to measure the paper's normalization)
    bool standard_bra = false;
    // the odd sector of a paired group element h hhat carries a global
    // sqrt2; with this flag such coefficients are returned divided by sqrt2
    // (the identities checked are linear in the odd tau, so the rescaled
    // family solves them iff the raw one does)
    bool allow_sqrt2 = false;
};

// slots per kind: Tau0N/Tau1N: {t1,t2}; TauBN: {s}; TauBNM: {s,sbar};
// Tau0NML: {t1,t2,tbar1,tbar2}. Right evolutions use e^{+sum tbar_k alpha_-k}.
TruncatedSeries tau_oracle(const FockSpace& sp, const OracleProblem& p, const LayoutPtr& lay,
                           const std::vector<SlotRef>& slots);

// window suggestion helpers (callers may enlarge)
ModeWindow suggest_window_tc(int max_charge, int cap_left, int cap_right, int max_factor_mode);
ModeWindow suggest_window_b(int max_charge, int cap_left, int cap_right, int max_factor_mode);

// --- wick and clifford checks ------------------------------------------------

// w = sum v_m psi_m + sum u_m psi†_m on the B-type space
struct LinearFermion {
    std::map<int, Rat> v;  // creator coefficients
    std::map<int, Rat> u;  // annihilator coefficients
    CliffPoly poly() const;
};

// <l| w_1 ... w_r |l> by direct state evolution
Rat vacuum_expectation(const FockSpace& sp, const std::vector<LinearFermion>& ws, int charge);

struct WickReport {
    Rat direct;
    Rat pfaffian;
    bool pass;
};
WickReport wick_check(const FockSpace& sp, const std::vector<LinearFermion>& ws, int charge);

struct RelationResult {
    std::string relation;
    bool pass;
    std::string detail;
};
// verifies the anticommutators of the derived generators and the oscillator
// commutators on interior states of the given two-component space
std::vector<RelationResult> clifford_check(const FockSpace& sp);

}  // namespace pfl
