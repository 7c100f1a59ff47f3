#pragma once

#include <ostream>

#include "pfafflab/core.hpp"

namespace pfl {

// Element of Q(sqrt2, i): a + b*sqrt2 + (c + d*sqrt2)*i.
// The free-fermion generators of the paper carry 1/sqrt2 and i factors
// (neutral fermions, phi, the hat involution); working in this 4-dimensional
// extension keeps every oracle computation exact and lets the Clifford
// relations be checked verbatim. Tau values are asserted rational on exit.
struct QExt {
    Rat a, b, c, d;

    QExt() = default;
    QExt(Rat ra) : a(std::move(ra)) {}
    QExt(Rat ra, Rat rb, Rat rc, Rat rd)
        : a(std::move(ra)), b(std::move(rb)), c(std::move(rc)), d(std::move(rd)) {}

    static QExt zero() { return QExt(); }
    static QExt one() { return QExt(Rat(1)); }
    static QExt sqrt2() { return QExt(Rat(0), Rat(1), Rat(0), Rat(0)); }
    static QExt inv_sqrt2() { return QExt(Rat(0), Rat(1, 2), Rat(0), Rat(0)); }
    static QExt imag() { return QExt(Rat(0), Rat(0), Rat(1), Rat(0)); }

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
    bool is_rational() const { return b == 0 && c == 0 && d == 0; }

    QExt operator-() const { return QExt(-a, -b, -c, -d); }
    QExt& operator+=(const QExt& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    QExt& operator-=(const QExt& o) {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }
    friend QExt operator+(QExt x, const QExt& y) { x += y; return x; }
    friend QExt operator-(QExt x, const QExt& y) { x -= y; return x; }

    friend QExt operator*(const QExt& x, const QExt& y) {
        // (a1 + b1 r + (c1 + d1 r) i)(a2 + b2 r + (c2 + d2 r) i), r^2 = 2, i^2 = -1
        QExt z;
        z.a = x.a * y.a + 2 * x.b * y.b - x.c * y.c - 2 * x.d * y.d;
        z.b = x.a * y.b + x.b * y.a - x.c * y.d - x.d * y.c;
        z.c = x.a * y.c + x.c * y.a + 2 * (x.b * y.d + x.d * y.b);
        z.d = x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b;
        return z;
    }
    QExt& operator*=(const QExt& o) { *this = *this * o; return *this; }

    friend bool operator==(const QExt& x, const QExt& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }

    friend std::ostream& operator<<(std::ostream& os, const QExt& x) {
        os << "(" << x.a;
        if (x.b != 0) os << (x.b > 0 ? "+" : "") << x.b << "*r2";
        if (x.c != 0) os << (x.c > 0 ? "+" : "") << x.c << "*i";
        if (x.d != 0) os << (x.d > 0 ? "+" : "") << x.d << "*r2i";
        return os << ")";
    }
};

}  // namespace pfl
