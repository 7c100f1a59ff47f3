#include "pfafflab/skewlin.hpp"

namespace pfl {

LemmaReport verify_quasi_skew_lemma(const QuasiSkew& q, const StrictSeq& h) {
    LemmaReport rep;
    auto ring = rat_ring();
    auto B = quasi_skew_augment(q, h, ring);
    Rat pf = pfaffian_expand(B, ring);
    rep.lhs = pf * pf;

    int n = static_cast<int>(h.size());
    DenseMat<Rat> M(n, n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M.at(i, j) = q.A_at(h[i], h[j], Rat(0)) - q.a_at(h[i], Rat(0)) * q.a_at(h[j], Rat(0));
    rep.rhs = det_bareiss(M);

    if (rep.rhs != 0) {
        rep.ratio_defined = true;
        rep.ratio = rep.lhs / rep.rhs;
    }
    return rep;
}

}  // namespace pfl
