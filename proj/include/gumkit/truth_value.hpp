#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "gumkit/rational.hpp"

namespace gumkit {

class DualTruthValue;

// Truth value: a lexicographically ordered pair (first, second) of
// rationals in [0,1], excluding the pairs (0, r) with r > 0.
// (0,0) is absolute truth, (1,1) absolute falsity; smaller is truer.
class TruthValue {
public:
    TruthValue() = default; // (0,0)

    TruthValue(Rational first, Rational second) : a_(first), b_(second) {
        if (!a_.in_unit_interval() || !b_.in_unit_interval())
            throw std::domain_error("TruthValue: coordinate outside [0,1]: (" +
                                    a_.str() + "," + b_.str() + ")");
        if (a_.num() == 0 && b_.num() != 0)
            throw std::domain_error("TruthValue: (0," + b_.str() + ") is excluded");
    }

    static TruthValue zero() { return TruthValue(); }
    static TruthValue one() { return TruthValue(Rational(1), Rational(1)); }

    // The diagonal embedding of a rational r in [0,1].
    static TruthValue hat(const Rational& r) { return TruthValue(r, r); }

    const Rational& first() const { return a_; }
    const Rational& second() const { return b_; }

    friend bool operator==(const TruthValue& x, const TruthValue& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend std::strong_ordering operator<=>(const TruthValue& x, const TruthValue& y) {
        const auto c = x.a_ <=> y.a_;
        return c != std::strong_ordering::equal ? c : x.b_ <=> y.b_;
    }

    // Canonical rendering: "(p/q,r/s)", with "0" and "1" for the extremes.
    std::string str() const;

    // Accepts the canonical rendering plus optional whitespace after the comma.
    static TruthValue parse(const std::string& text);

private:
    Rational a_;
    Rational b_;
};

inline TruthValue tv_max(const TruthValue& x, const TruthValue& y) { return y < x ? x : y; }
inline TruthValue tv_min(const TruthValue& x, const TruthValue& y) { return y < x ? y : x; }

// Residuum of the implication: (0,0) when x >= y, otherwise y.
inline TruthValue tv_residuum(const TruthValue& x, const TruthValue& y) {
    return x >= y ? TruthValue::zero() : y;
}

// Discrete-flavoured symmetric difference: (0,0) when equal, else the max.
inline TruthValue tv_dmax(const TruthValue& x, const TruthValue& y) {
    return x == y ? TruthValue::zero() : tv_max(x, y);
}

struct TvExtrema {
    TruthValue sup;
    TruthValue inf;
};

// Max and min of a non-empty set of values; throws std::invalid_argument
// on an empty input.
TvExtrema tv_extrema(std::span<const TruthValue> values);

// Truth value on the dual side: pairs in [0,1]^2 excluding (1, r) with
// r < 1, ordered lexicographically. (1,1) is absolute truth there.
class DualTruthValue {
public:
    DualTruthValue() : a_(1), b_(1) {}

    DualTruthValue(Rational first, Rational second) : a_(first), b_(second) {
        if (!a_.in_unit_interval() || !b_.in_unit_interval())
            throw std::domain_error("DualTruthValue: coordinate outside [0,1]: (" +
                                    a_.str() + "," + b_.str() + ")");
        if (a_ == Rational(1) && b_ != Rational(1))
            throw std::domain_error("DualTruthValue: (1," + b_.str() + ") is excluded");
    }

    static DualTruthValue top() { return DualTruthValue(); } // (1,1)
    static DualTruthValue bottom() { return DualTruthValue(Rational(0), Rational(0)); }

    const Rational& first() const { return a_; }
    const Rational& second() const { return b_; }

    friend bool operator==(const DualTruthValue& x, const DualTruthValue& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend std::strong_ordering operator<=>(const DualTruthValue& x, const DualTruthValue& y) {
        const auto c = x.a_ <=> y.a_;
        return c != std::strong_ordering::equal ? c : x.b_ <=> y.b_;
    }

    std::string str() const;

private:
    Rational a_;
    Rational b_;
};

// Order-reversing bijection (x,y) |-> (1-x, 1-y) between the two sides.
inline DualTruthValue tv_u(const TruthValue& v) {
    return DualTruthValue(Rational(1) - v.first(), Rational(1) - v.second());
}
inline TruthValue tv_u_inverse(const DualTruthValue& v) {
    return TruthValue(Rational(1) - v.first(), Rational(1) - v.second());
}

inline DualTruthValue dual_max(const DualTruthValue& x, const DualTruthValue& y) {
    return y < x ? x : y;
}
inline DualTruthValue dual_min(const DualTruthValue& x, const DualTruthValue& y) {
    return y < x ? y : x;
}

// Dual-side implication: absolute truth (1,1) when x <= y, otherwise y.
inline DualTruthValue dual_residuum(const DualTruthValue& x, const DualTruthValue& y) {
    return x <= y ? DualTruthValue::top() : y;
}

} // namespace gumkit
