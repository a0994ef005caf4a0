#include "lbgame/ratio.hpp"

#include "lbgame/errors.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace lbg {

namespace {

using Wide = __int128;

Ratio from_wide(Wide n, Wide d)
{
    if (d == 0)
        throw InputError("ratio with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Wide a = n < 0 ? -n : n;
    Wide b = d;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    constexpr Wide lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim)
        throw std::overflow_error("ratio overflows 64 bits");
    return Ratio(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw InputError("malformed ratio component '" + std::string(s) + "'");
    return v;
}

} // namespace

Ratio::Ratio(std::int64_t numerator, std::int64_t denominator)
{
    if (denominator == 0)
        throw InputError("ratio with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    std::int64_t g = std::gcd(numerator, denominator);
    if (g > 1) {
        numerator /= g;
        denominator /= g;
    }
    num_ = numerator;
    den_ = denominator;
}

std::string Ratio::str() const
{
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Ratio Ratio::parse(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Ratio(parse_int(text));
    return Ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Ratio operator+(const Ratio& a, const Ratio& b)
{
    return from_wide(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Ratio operator-(const Ratio& a, const Ratio& b)
{
    return from_wide(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Ratio operator*(const Ratio& a, const Ratio& b)
{
    return from_wide(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Ratio operator/(const Ratio& a, const Ratio& b)
{
    return from_wide(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b)
{
    Wide lhs = Wide(a.num_) * b.den_;
    Wide rhs = Wide(b.num_) * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace lbg
