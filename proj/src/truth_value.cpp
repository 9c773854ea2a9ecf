#include "gumkit/truth_value.hpp"

#include <cctype>

namespace gumkit {

namespace {

std::string render_pair(const Rational& a, const Rational& b) {
    if (a.num() == 0 && b.num() == 0) return "0";
    if (a == Rational(1) && b == Rational(1)) return "1";
    return "(" + a.str() + "," + b.str() + ")";
}

std::pair<Rational, Rational> parse_pair(const std::string& text, const char* what) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s == "0") return {Rational(0), Rational(0)};
    if (s == "1") return {Rational(1), Rational(1)};
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument(std::string(what) + ": expected \"(p/q,r/s)\", got '" + text + "'");
    const std::string inner = s.substr(1, s.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument(std::string(what) + ": missing comma in '" + text + "'");
    return {Rational::parse(inner.substr(0, comma)), Rational::parse(inner.substr(comma + 1))};
}

} // namespace

std::string TruthValue::str() const { return render_pair(a_, b_); }

TruthValue TruthValue::parse(const std::string& text) {
    const auto [a, b] = parse_pair(text, "TruthValue");
    return TruthValue(a, b);
}

std::string DualTruthValue::str() const { return render_pair(a_, b_); }

TvExtrema tv_extrema(std::span<const TruthValue> values) {
    if (values.empty())
        throw std::invalid_argument("tv_extrema: empty set");
    TvExtrema e{values[0], values[0]};
    for (const auto& v : values.subspan(1)) {
        if (e.sup < v) e.sup = v;
        if (v < e.inf) e.inf = v;
    }
    return e;
}

} // namespace gumkit
