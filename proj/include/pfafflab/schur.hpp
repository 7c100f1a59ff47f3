#pragma once

#include <vector>

#include "pfafflab/linalg.hpp"
#include "pfafflab/series.hpp"

namespace pfl {

// h = (h_1 > h_2 > ... > h_N >= 0), stored descending; empty allowed
using StrictSeq = std::vector<int>;

void validate_strict(const StrictSeq& h);

// weight of s_{h}: sum(h) - N(N-1)/2
int strict_weight(const StrictSeq& h);

// s_0..s_kmax of the generating function e^{sum_k z^k t_k}, where the t_k are
// given as series values (symbolic variables, shifted arguments, or any exact
// substitute). Uses k*s_k = sum_{j<=k} j*t_j*s_{k-j}.
std::vector<TruncatedSeries> schur_row(const std::vector<TruncatedSeries>& tvals, int kmax,
                                       const RingCtx<TruncatedSeries>& ring);

// symbolic values (+/-)t_1..t_kmax of one channel; zero past the channel width
std::vector<TruncatedSeries> channel_values(const LayoutPtr& lay, int channel, int kmax,
                                            bool negate = false);

// Schur function of a strict index sequence via the Jacobi-Trudi determinant
// det(s_{h_i - N + j})_{i,j=1..N}. The column offset is pinned by the
// Cauchy-Binet factorization of the moment determinant, which forces
// s_{(N-1,...,1,0)} = 1.
TruncatedSeries schur_jt(const StrictSeq& h, const std::vector<TruncatedSeries>& srow,
                         const RingCtx<TruncatedSeries>& ring);

}  // namespace pfl
