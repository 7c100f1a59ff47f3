#pragma once

#include <memory>

#include "pfafflab/tau_forms.hpp"

namespace pfl {

// A tau family maps charge indices to TruncatedSeries in caller-chosen
// channels. Evaluation is pure per key; the cache is write-once per key.
class TauFamily {
public:
    virtual ~TauFamily() = default;
    virtual int arity() const = 0;
    virtual int slot_count() const = 0;
    // bound on the total degree of the value (-1: series, bounded by caps only)
    virtual int degree_bound(const std::vector<int>& charges) const = 0;

    TruncatedSeries eval(const std::vector<int>& charges, const LayoutPtr& lay,
                         const std::vector<SlotRef>& slots) const;

protected:
    virtual TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                                    const std::vector<SlotRef>& slots) const = 0;

private:
    mutable std::map<std::string, TruncatedSeries> cache_;
};

using FamilyPtr = std::shared_ptr<TauFamily>;

// det(m_ij) family over a moment matrix; sign_mode 0 gives the plain
// determinant ("tau^2KP"), 1 dresses it with (-1)^{n(n+1)/2} ("tau^TL")
class DetFamily : public TauFamily {
public:
    DetFamily(MomentMatrix M, int sign_mode = 0) : M_(std::move(M)), sign_mode_(sign_mode) {}
    int arity() const override { return 1; }
    int slot_count() const override { return 2; }
    int degree_bound(const std::vector<int>& charges) const override;
    const MomentMatrix& data() const { return M_; }

protected:
    TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                            const std::vector<SlotRef>& slots) const override;

private:
    MomentMatrix M_;
    int sign_mode_;
};

// Pfaffian-series family over BData
class BFamily : public TauFamily {
public:
    explicit BFamily(BData q) : q_(std::move(q)) {}
    int arity() const override { return 1; }
    int slot_count() const override { return 1; }
    int degree_bound(const std::vector<int>& charges) const override;
    const BData& data() const { return q_; }

protected:
    TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                            const std::vector<SlotRef>& slots) const override;

private:
    BData q_;
};

// sign tables pinned by the oracle calibration grid (tests re-derive them)
int b2_sign(int n, int m);
int tc2_sign(int n, int m, int l);

// two-sided B family from an antisymmetric pair measure + single measure:
// tau^B_{n,m}(s, sbar) = sign * e^{sum k s_k sbar_k} * PfForm[A(-sbar, m)](n-m, s)
class TwoSidedBFamily : public TauFamily {
public:
    explicit TwoSidedBFamily(DiscreteMeasure mu) : mu_(std::move(mu)) { mu_.validate(); }
    int arity() const override { return 2; }  // (n, m)
    int slot_count() const override { return 2; }
    int degree_bound(const std::vector<int>&) const override { return -1; }
    const DiscreteMeasure& measure() const { return mu_; }

protected:
    TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                            const std::vector<SlotRef>& slots) const override;

private:
    DiscreteMeasure mu_;
};

// two-sided two-component family:
// tau^(0)_{n,m,l}(t1,t2;tb1,tb2) = sign * e^{sum_a sum_k k t^a_k tb^a_k}
//   * DetForm[M(-tb1, -tb2, m, m-l)](n-m, t1, t2)
class TwoSidedMFamily : public TauFamily {
public:
    explicit TwoSidedMFamily(DiscreteMeasure mu) : mu_(std::move(mu)) {}
    int arity() const override { return 3; }  // (n, m, l)
    int slot_count() const override { return 4; }
    int degree_bound(const std::vector<int>&) const override { return -1; }
    const DiscreteMeasure& measure() const { return mu_; }

protected:
    TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                            const std::vector<SlotRef>& slots) const override;

private:
    DiscreteMeasure mu_;
};

// definition-level family backed by the Fock oracle
class OracleFamily : public TauFamily {
public:
    OracleFamily(OracleKind kind, FockSpace space, std::vector<CliffPoly> factors,
                 bool allow_sqrt2 = false)
        : kind_(kind), space_(std::move(space)), factors_(std::move(factors)),
          allow_sqrt2_(allow_sqrt2) {}
    int arity() const override;
    int slot_count() const override;
    int degree_bound(const std::vector<int>&) const override { return -1; }

protected:
    TruncatedSeries compute(const std::vector<int>& charges, const LayoutPtr& lay,
                            const std::vector<SlotRef>& slots) const override;

private:
    OracleKind kind_;
    FockSpace space_;
    std::vector<CliffPoly> factors_;
    bool allow_sqrt2_;
};

}  // namespace pfl
