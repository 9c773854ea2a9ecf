#include "gumkit/rational.hpp"

#include <cctype>
#include <charconv>

namespace gumkit {

namespace {

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("Rational: malformed integer '" + std::string(text) + "'");
    return value;
}

} // namespace

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text), 1);
    const std::int64_t num = parse_int(std::string_view(text).substr(0, slash));
    const std::int64_t den = parse_int(std::string_view(text).substr(slash + 1));
    if (den == 0) throw std::invalid_argument("Rational: zero denominator in '" + text + "'");
    return Rational(num, den);
}

} // namespace gumkit
