#include "pfafflab/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace pfl {

Rat det_bareiss(DenseMat<Rat> M) {
    if (M.n != M.m) throw structural_error("det: matrix not square");
    int n = M.n;
    if (n == 0) return Rat(1);
    Rat prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (M.at(i, k) != 0) { p = i; break; }
            if (p < 0) return Rat(0);
            for (int j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                M.at(i, j) = (M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j)) / prev;
        prev = M.at(k, k);
    }
    return sign > 0 ? M.at(n - 1, n - 1) : -M.at(n - 1, n - 1);
}

Rat det_leibniz(const DenseMat<Rat>& M) {
    if (M.n != M.m) throw structural_error("det: matrix not square");
    int n = M.n;
    if (n == 0) return Rat(1);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rat acc(0);
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        Rat prod(1);
        for (int i = 0; i < n; ++i) prod *= M.at(i, perm[i]);
        acc += (inv % 2 == 0) ? prod : -prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

bool is_skew(const DenseMat<Rat>& M) {
    if (M.n != M.m) return false;
    for (int i = 0; i < M.n; ++i)
        for (int j = i; j < M.n; ++j)
            if (M.at(i, j) != -M.at(j, i)) return false;
    return true;
}

Rat pfaffian_elim(DenseMat<Rat> M) {
    if (M.n != M.m) throw structural_error("pfaffian: matrix not square");
    int n = M.n;
    if (n == 0) return Rat(1);
    if (n % 2 != 0) throw structural_error("pfaffian undefined for odd order");
    Rat result(1);
    for (int k = 0; k + 1 < n; k += 2) {
        int p = -1;
        for (int j = k + 1; j < n; ++j)
            if (M.at(k, j) != 0) { p = j; break; }
        if (p < 0) return Rat(0);
        if (p != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(M.at(k + 1, j), M.at(p, j));
            for (int i = 0; i < n; ++i) std::swap(M.at(i, k + 1), M.at(i, p));
            result = -result;
        }
        const Rat pivot = M.at(k, k + 1);
        result *= pivot;
        for (int i = k + 2; i < n; ++i) {
            // zero column k below the 2x2 pivot block, keeping skewness
            Rat f = M.at(k, i) / pivot;
            if (f == 0) continue;
            for (int j = 0; j < n; ++j) M.at(i, j) -= f * M.at(k + 1, j);
            for (int j = 0; j < n; ++j) M.at(j, i) -= f * M.at(j, k + 1);
        }
    }
    return result;
}

}  // namespace pfl
