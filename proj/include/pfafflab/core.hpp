#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace pfl {

// Exact rational coefficient field. mpq keeps values canonical
// (reduced, positive denominator) at all times.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

// misuse of an interface: shape/channel/cap mismatch, bad arguments
struct structural_error : std::runtime_error {
    explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// the finite fermionic mode window cannot hold a computation exactly;
// failing loudly here is the only safe behavior
struct window_overflow : std::runtime_error {
    explicit window_overflow(const std::string& what) : std::runtime_error(what) {}
};

inline int parity_sign(long k) { return (k % 2 == 0) ? 1 : -1; }

// (-1)^{n(n+1)/2} with correct behavior for negative n
inline int tri_sign(long n) {
    long t = n * (n + 1) / 2;
    return parity_sign(t);
}

}  // namespace pfl
