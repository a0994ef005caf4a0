#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace lbg {

/// Exact rational number kept in lowest terms with a positive denominator.
///
/// Loads in this library are integer workloads, so every improvement ratio and
/// every bound we compare is a quotient of small integers. Comparisons
/// cross-multiply in 128-bit arithmetic and never round.
class Ratio {
public:
    constexpr Ratio() = default;
    Ratio(std::int64_t numerator, std::int64_t denominator = 1);

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }

    /// "p/q", always with an explicit denominator ("1/1", "5/4").
    [[nodiscard]] std::string str() const;
    /// Accepts "p/q" or a bare integer "p".
    static Ratio parse(std::string_view text);

    friend Ratio operator+(const Ratio& a, const Ratio& b);
    friend Ratio operator-(const Ratio& a, const Ratio& b);
    friend Ratio operator*(const Ratio& a, const Ratio& b);
    friend Ratio operator/(const Ratio& a, const Ratio& b);
    Ratio& operator+=(const Ratio& o) { return *this = *this + o; }

    friend bool operator==(const Ratio& a, const Ratio& b) = default;
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

    friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace lbg
