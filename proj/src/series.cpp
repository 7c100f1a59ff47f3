#include "pfafflab/series.hpp"

#include <algorithm>
#include <sstream>

namespace pfl {

ChannelLayout::ChannelLayout(std::vector<TimeChannel> channels, int total_cap,
                             std::vector<int> channel_caps)
    : channels_(std::move(channels)), total_cap_(total_cap), channel_caps_(std::move(channel_caps)) {
    if (total_cap_ < 0) throw structural_error("negative cap");
    if (channel_caps_.empty()) {
        channel_caps_.assign(channels_.size(), total_cap_);
    } else if (channel_caps_.size() != channels_.size()) {
        throw structural_error("channel cap list size mismatch");
    }
    nvars_ = 0;
    for (const auto& ch : channels_) {
        if (ch.nvars < 0) throw structural_error("negative variable count");
        offsets_.push_back(nvars_);
        nvars_ += ch.nvars;
    }
    weights_.resize(nvars_);
    var_channel_.resize(nvars_);
    var_k_.resize(nvars_);
    for (size_t c = 0; c < channels_.size(); ++c) {
        for (int k = 1; k <= channels_[c].nvars; ++k) {
            int p = offsets_[c] + k - 1;
            weights_[p] = k;
            var_channel_[p] = static_cast<int>(c);
            var_k_[p] = k;
        }
    }
}

int ChannelLayout::channel_index(const std::string& name) const {
    for (size_t c = 0; c < channels_.size(); ++c)
        if (channels_[c].name == name) return static_cast<int>(c);
    throw structural_error("unknown channel: " + name);
}

int ChannelLayout::var_pos(int c, int k) const {
    if (c < 0 || c >= channel_count()) throw structural_error("channel index out of range");
    if (k < 1 || k > channels_[c].nvars) throw structural_error("variable index out of range");
    return offsets_[c] + k - 1;
}

bool ChannelLayout::operator==(const ChannelLayout& o) const {
    if (total_cap_ != o.total_cap_ || channel_caps_ != o.channel_caps_) return false;
    if (channels_.size() != o.channels_.size()) return false;
    for (size_t c = 0; c < channels_.size(); ++c)
        if (channels_[c].name != o.channels_[c].name || channels_[c].nvars != o.channels_[c].nvars)
            return false;
    return true;
}

LayoutPtr make_layout(std::vector<TimeChannel> channels, int total_cap,
                      std::vector<int> channel_caps) {
    return std::make_shared<const ChannelLayout>(std::move(channels), total_cap,
                                                 std::move(channel_caps));
}

TruncatedSeries TruncatedSeries::constant(LayoutPtr lay, const Rat& c) {
    TruncatedSeries s(std::move(lay));
    if (c != 0) {
        Mono m;
        m.e.assign(s.lay_->var_count(), 0);
        s.terms_.emplace(std::move(m), c);
    }
    return s;
}

TruncatedSeries TruncatedSeries::variable(LayoutPtr lay, int channel, int k) {
    TruncatedSeries s(std::move(lay));
    Mono m;
    m.e.assign(s.lay_->var_count(), 0);
    m.e[s.lay_->var_pos(channel, k)] = 1;
    m.w = k;
    if (s.fits(m)) s.terms_.emplace(std::move(m), Rat(1));
    return s;
}

Rat TruncatedSeries::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat TruncatedSeries::constant_term() const {
    if (terms_.empty() || terms_.begin()->first.w != 0) return Rat(0);
    return terms_.begin()->second;
}

bool TruncatedSeries::fits(const Mono& m) const {
    if (m.w > lay_->total_cap()) return false;
    // per-channel weights
    std::vector<int> cw(lay_->channel_count(), 0);
    for (size_t p = 0; p < m.e.size(); ++p)
        if (m.e[p]) cw[lay_->var_channel(static_cast<int>(p))] += m.e[p] * lay_->var_weight(static_cast<int>(p));
    for (int c = 0; c < lay_->channel_count(); ++c)
        if (cw[c] > lay_->channel_cap(c)) return false;
    return true;
}

void TruncatedSeries::add_term(const Mono& m, const Rat& c) {
    if (c == 0 || !fits(m)) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void TruncatedSeries::check_same(const TruncatedSeries& o) const {
    if (!lay_ || !o.lay_) throw structural_error("series without layout");
    if (lay_ != o.lay_ && !(*lay_ == *o.lay_))
        throw structural_error("channel/cap mismatch between series operands");
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r(lay_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_same(b);
    TruncatedSeries r(a.lay_);
    const int cap = a.lay_->total_cap();
    Mono m;
    m.e.resize(a.lay_->var_count());
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            if (ma.w + mb.w > cap) break;  // b sorted by weight
            m.w = ma.w + mb.w;
            for (size_t p = 0; p < m.e.size(); ++p) m.e[p] = static_cast<uint16_t>(ma.e[p] + mb.e[p]);
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::scaled(const Rat& c) const {
    TruncatedSeries r(lay_);
    if (c == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
    check_same(o);
    return terms_ == o.terms_;
}

TruncatedSeries TruncatedSeries::truncated(int total_cap, std::vector<int> channel_caps) const {
    std::vector<TimeChannel> chs;
    for (int c = 0; c < lay_->channel_count(); ++c) chs.push_back(lay_->channel(c));
    auto lay = make_layout(std::move(chs), total_cap, std::move(channel_caps));
    TruncatedSeries r(lay);
    for (const auto& [m, c] : terms_) r.add_term(m, c);
    return r;
}

TruncatedSeries TruncatedSeries::relaid(const LayoutPtr& lay) const {
    if (lay->var_count() != lay_->var_count()) throw structural_error("relaid: incompatible layout");
    TruncatedSeries r(lay);
    for (const auto& [m, c] : terms_) r.add_term(m, c);
    return r;
}

TruncatedSeries TruncatedSeries::partial(int channel, int k) const {
    if (k < 1) throw structural_error("partial: k must be >= 1");
    int pos = lay_->var_pos(channel, k);
    TruncatedSeries r(lay_);
    for (const auto& [m, c] : terms_) {
        if (!m.e[pos]) continue;
        Mono d = m;
        Rat mult(d.e[pos]);
        d.e[pos] -= 1;
        d.w -= k;
        r.add_term(d, c * mult);
    }
    return r;
}

Rat rat_binomial(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    Int num = 1, den = 1;
    for (long j = 1; j <= k; ++j) {
        num *= Int(n - k + j);
        den *= Int(j);
    }
    return Rat(num) / Rat(den);
}

namespace {

// shared expansion kernel for the Miwa substitutions:
// emits (z-shift or x-exponent, reduced monomial, coefficient) triples
template <class Emit>
void miwa_expand_term(const ChannelLayout& lay, int channel, int sign, const Rat& coeff,
                      const Mono& m, const Rat& c, Emit&& emit) {
    // positions of this channel with nonzero exponent
    std::vector<int> ps;
    for (size_t p = 0; p < m.e.size(); ++p)
        if (m.e[p] && lay.var_channel(static_cast<int>(p)) == channel) ps.push_back(static_cast<int>(p));
    // odometer over how much of each exponent converts into the shift variable
    std::vector<int> a(ps.size(), 0);
    for (;;) {
        // assemble one choice
        Mono mm = m;
        Rat cc = c;
        int acc = 0;
        int tw = m.w;
        for (size_t i = 0; i < ps.size(); ++i) {
            int pos = ps[i];
            int k = lay.var_k(pos);
            int e = m.e[pos];
            int ai = a[i];
            mm.e[pos] = static_cast<uint16_t>(e - ai);
            tw -= k * ai;
            acc += k * ai;
            if (ai) {
                Rat base = Rat(sign) * coeff / Rat(k);
                Rat pw(1);
                for (int j = 0; j < ai; ++j) pw *= base;
                cc *= rat_binomial(e, ai) * pw;
            }
        }
        mm.w = tw;
        emit(acc, mm, cc);
        // next multi-index
        size_t i = 0;
        for (; i < ps.size(); ++i) {
            if (a[i] < m.e[ps[i]]) {
                ++a[i];
                break;
            }
            a[i] = 0;
        }
        if (i == ps.size()) break;
    }
}

}  // namespace

LaurentSeries TruncatedSeries::miwa_shift(int channel, int sign, const Rat& coeff, int zpow) const {
    if (sign != 1 && sign != -1) throw structural_error("miwa_shift: sign must be +-1");
    if (zpow != 1 && zpow != -1) throw structural_error("miwa_shift: zpow must be +-1");
    LaurentSeries out(lay_);
    for (const auto& [m, c] : terms_) {
        miwa_expand_term(*lay_, channel, sign, coeff, m, c,
                         [&](int acc_k, const Mono& mm, const Rat& cc) {
                             TruncatedSeries part(lay_);
                             part.add_term(mm, cc);
                             out.add_part(zpow * acc_k, part);
                         });
    }
    return out;
}

TruncatedSeries TruncatedSeries::miwa_shift_var(int channel, int sign, int xch) const {
    if (lay_->channel(xch).nvars != 1)
        throw structural_error("miwa_shift_var: target channel must have a single variable");
    int xpos = lay_->var_pos(xch, 1);
    TruncatedSeries out(lay_);
    for (const auto& [m, c] : terms_) {
        miwa_expand_term(*lay_, channel, sign, Rat(1), m, c,
                         [&](int acc_k, const Mono& mm, const Rat& cc) {
                             Mono mx = mm;
                             mx.e[xpos] = static_cast<uint16_t>(mx.e[xpos] + acc_k);
                             mx.w += acc_k;  // x carries weight 1 per power
                             out.add_term(mx, cc);
                         });
    }
    return out;
}

TruncatedSeries TruncatedSeries::shifted_const(int channel, const std::vector<Rat>& delta) const {
    TruncatedSeries out(lay_);
    for (const auto& [m, c] : terms_) {
        std::vector<int> ps;
        for (size_t p = 0; p < m.e.size(); ++p)
            if (m.e[p] && lay_->var_channel(static_cast<int>(p)) == channel) ps.push_back(static_cast<int>(p));
        std::vector<int> a(ps.size(), 0);
        for (;;) {
            Mono mm = m;
            Rat cc = c;
            int tw = m.w;
            for (size_t i = 0; i < ps.size(); ++i) {
                int pos = ps[i];
                int k = lay_->var_k(pos);
                int e = m.e[pos];
                int ai = a[i];
                mm.e[pos] = static_cast<uint16_t>(e - ai);
                tw -= k * ai;
                if (ai) {
                    Rat d = (static_cast<size_t>(k - 1) < delta.size()) ? delta[k - 1] : Rat(0);
                    Rat pw(1);
                    for (int j = 0; j < ai; ++j) pw *= d;
                    cc *= rat_binomial(e, ai) * pw;
                }
            }
            mm.w = tw;
            out.add_term(mm, cc);
            size_t i = 0;
            for (; i < ps.size(); ++i) {
                if (a[i] < m.e[ps[i]]) { ++a[i]; break; }
                a[i] = 0;
            }
            if (i == ps.size()) break;
        }
    }
    return out;
}

std::string TruncatedSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        for (size_t p = 0; p < m.e.size(); ++p) {
            if (!m.e[p]) continue;
            int ch = lay_->var_channel(static_cast<int>(p));
            os << "*" << lay_->channel(ch).name << lay_->var_k(static_cast<int>(p));
            if (m.e[p] > 1) os << "^" << static_cast<int>(m.e[p]);
        }
    }
    return os.str();
}

TruncatedSeries exp_series(const TruncatedSeries& u) {
    if (u.constant_term() != 0) throw structural_error("exp_series: nonzero constant term");
    TruncatedSeries acc = TruncatedSeries::constant(u.layout(), Rat(1));
    TruncatedSeries pw = TruncatedSeries::constant(u.layout(), Rat(1));
    Rat fact(1);
    for (int j = 1; j <= u.layout()->total_cap(); ++j) {
        pw = pw * u;
        if (pw.is_zero()) break;
        fact *= j;
        acc += pw.scaled(Rat(1) / fact);
    }
    return acc;
}

LaurentSeries LaurentSeries::from_series(const TruncatedSeries& s, int zpow) {
    LaurentSeries l(s.layout());
    l.add_part(zpow, s);
    return l;
}

bool LaurentSeries::is_zero() const {
    for (const auto& [p, s] : c_)
        if (!s.is_zero()) return false;
    return true;
}

void LaurentSeries::add_part(int zpow, const TruncatedSeries& s) {
    if (s.is_zero()) return;
    auto it = c_.find(zpow);
    if (it == c_.end()) {
        c_.emplace(zpow, s);
    } else {
        it->second += s;
        if (it->second.is_zero()) c_.erase(it);
    }
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    for (const auto& [p, s] : o.c_) add_part(p, s);
    return *this;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries r(a.lay_ ? a.lay_ : b.lay_);
    for (const auto& [pa, sa] : a.c_)
        for (const auto& [pb, sb] : b.c_) {
            auto prod = sa * sb;
            if (!prod.is_zero()) r.add_part(pa + pb, prod);
        }
    return r;
}

LaurentSeries LaurentSeries::scaled(const Rat& c) const {
    LaurentSeries r(lay_);
    if (c == 0) return r;
    for (const auto& [p, s] : c_) r.c_.emplace(p, s.scaled(c));
    return r;
}

LaurentSeries LaurentSeries::shifted_z(int d) const {
    LaurentSeries r(lay_);
    for (const auto& [p, s] : c_) r.c_.emplace(p + d, s);
    return r;
}

TruncatedSeries LaurentSeries::residue() const { return coeff_z(-1); }

TruncatedSeries LaurentSeries::coeff_z(int zpow) const {
    auto it = c_.find(zpow);
    if (it != c_.end()) return it->second;
    return TruncatedSeries(lay_);
}

LaurentSeries LaurentSeries::dz() const {
    LaurentSeries r(lay_);
    for (const auto& [p, s] : c_) {
        if (p == 0) continue;
        r.add_part(p - 1, s.scaled(Rat(p)));
    }
    return r;
}

int LaurentSeries::zmin() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentSeries::zmax() const { return c_.empty() ? 0 : c_.rbegin()->first; }

LaurentSeries LaurentSeries::clamped(int lo, int hi) const {
    LaurentSeries r(lay_);
    for (const auto& [p, s] : c_)
        if (p >= lo && p <= hi) r.c_.emplace(p, s);
    return r;
}

}  // namespace pfl
