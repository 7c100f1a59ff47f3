#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfafflab/core.hpp"

namespace pfl {

// One set of graded time variables t_1..t_K; t_k carries weight k.
struct TimeChannel {
    std::string name;
    int nvars = 0;
};

// Immutable description of the variable space of a series: an ordered list of
// channels, a joint total-weight cap, and optional per-channel caps (used by
// the two-sided objects which are graded separately in s and sbar).
class ChannelLayout {
public:
    ChannelLayout(std::vector<TimeChannel> channels, int total_cap,
                  std::vector<int> channel_caps = {});

    int channel_count() const { return static_cast<int>(channels_.size()); }
    int var_count() const { return nvars_; }
    int total_cap() const { return total_cap_; }
    int channel_cap(int c) const { return channel_caps_[c]; }
    const TimeChannel& channel(int c) const { return channels_[c]; }
    int channel_index(const std::string& name) const;

    // flat position of variable t_k (1-based k) of channel c
    int var_pos(int c, int k) const;
    int var_weight(int pos) const { return weights_[pos]; }
    int var_channel(int pos) const { return var_channel_[pos]; }
    int var_k(int pos) const { return var_k_[pos]; }

    bool operator==(const ChannelLayout& o) const;

private:
    std::vector<TimeChannel> channels_;
    int total_cap_;
    std::vector<int> channel_caps_;
    int nvars_;
    std::vector<int> offsets_;
    std::vector<int> weights_;
    std::vector<int> var_channel_;
    std::vector<int> var_k_;
};

using LayoutPtr = std::shared_ptr<const ChannelLayout>;

LayoutPtr make_layout(std::vector<TimeChannel> channels, int total_cap,
                      std::vector<int> channel_caps = {});

// Monomial with cached total weight; ordered graded-lexicographically.
struct Mono {
    int w = 0;
    std::vector<uint16_t> e;

    bool operator<(const Mono& o) const {
        if (w != o.w) return w < o.w;
        return e < o.e;
    }
    bool operator==(const Mono& o) const { return w == o.w && e == o.e; }
};

class LaurentSeries;

// Degree-capped multivariate polynomial over Rat, sparse, the universal
// coefficient object. All operations are pure; truncation to the caps is a
// graded ring quotient, so capped arithmetic is exact degree by degree.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(LayoutPtr lay) : lay_(std::move(lay)) {}

    static TruncatedSeries constant(LayoutPtr lay, const Rat& c);
    static TruncatedSeries variable(LayoutPtr lay, int channel, int k);

    const LayoutPtr& layout() const { return lay_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Mono, Rat>& terms() const { return terms_; }
    int degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.w; }

    Rat coeff(const Mono& m) const;
    Rat constant_term() const;

    // inserts c * m, dropping anything past the caps
    void add_term(const Mono& m, const Rat& c);

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { a += b; return a; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { a -= b; return a; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries& operator*=(const TruncatedSeries& o) { *this = *this * o; return *this; }
    TruncatedSeries scaled(const Rat& c) const;

    bool operator==(const TruncatedSeries& o) const;

    // re-truncation to lower caps (monotone-consistency checks, re-grading)
    TruncatedSeries truncated(int total_cap, std::vector<int> channel_caps = {}) const;
    // same terms, different layout object (must be structurally compatible)
    TruncatedSeries relaid(const LayoutPtr& lay) const;

    // formal d/dt_k on a channel; weight drops by k
    TruncatedSeries partial(int channel, int k) const;

    // t_k -> t_k + sign*coeff*z^{zpow*k}/k on one channel
    LaurentSeries miwa_shift(int channel, int sign, const Rat& coeff, int zpow) const;

    // t_k -> t_k + sign*x^k/k where x is the single variable of channel xch
    TruncatedSeries miwa_shift_var(int channel, int sign, int xch) const;

    // t_k -> t_k + delta[k-1] (exact only when the series is an exact
    // polynomial, i.e. nothing was truncated away; caller guarantees that)
    TruncatedSeries shifted_const(int channel, const std::vector<Rat>& delta) const;

    std::string str() const;

private:
    void check_same(const TruncatedSeries& o) const;
    bool fits(const Mono& m) const;

    LayoutPtr lay_;
    std::map<Mono, Rat> terms_;
};

// exp(u) for u with zero constant term
TruncatedSeries exp_series(const TruncatedSeries& u);

// Finite-support Laurent object in an auxiliary variable z with
// TruncatedSeries coefficients. Residue extraction is exact.
class LaurentSeries {
public:
    LaurentSeries() = default;
    explicit LaurentSeries(LayoutPtr lay) : lay_(std::move(lay)) {}

    static LaurentSeries from_series(const TruncatedSeries& s, int zpow = 0);

    const LayoutPtr& layout() const { return lay_; }
    bool is_zero() const;
    const std::map<int, TruncatedSeries>& parts() const { return c_; }

    void add_part(int zpow, const TruncatedSeries& s);

    LaurentSeries& operator+=(const LaurentSeries& o);
    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { a += b; return a; }
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
    LaurentSeries scaled(const Rat& c) const;
    LaurentSeries shifted_z(int d) const;  // multiply by z^d

    // coefficient of z^{-1}
    TruncatedSeries residue() const;
    TruncatedSeries coeff_z(int zpow) const;

    // formal d/dz
    LaurentSeries dz() const;

    int zmin() const;
    int zmax() const;
    // drop parts outside [lo, hi]
    LaurentSeries clamped(int lo, int hi) const;

private:
    LayoutPtr lay_;
    std::map<int, TruncatedSeries> c_;
};

Rat rat_binomial(long n, long k);

}  // namespace pfl
