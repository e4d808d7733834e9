#pragma once

/// @file numeric.hpp
/// Exact integer and rational primitives used by every other module.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace dcf {

/// Nonnegative integer. Products that can leave 64 bits go through Wide.
using Natural = std::uint64_t;
using Wide = unsigned __int128;
using SignedWide = __int128;

/// Largest r with r*r <= n.
Natural isqrt(Natural n) noexcept;
/// Largest r with r*r <= n, for 128-bit arguments.
Natural isqrt(Wide n) noexcept;

/// Root of n when n is a perfect square.
std::optional<Natural> is_perfect_square(Natural n) noexcept;
std::optional<Natural> is_perfect_square(Wide n) noexcept;

/// Checked narrowing; throws std::overflow_error when the value does not fit.
Natural narrow(Wide v);
std::int64_t narrow_signed(SignedWide v);

std::string to_string(Wide v);
std::string to_string(SignedWide v);

/// Rational number in lowest terms with a positive denominator.
///
/// Construction reduces; arithmetic runs in 128-bit and throws
/// std::overflow_error if the reduced result leaves the 64-bit range.
/// Ordering is by cross-multiplication in 128 bits, never through floating point.
class ExactRatio {
public:
    constexpr ExactRatio() noexcept = default;
    ExactRatio(std::int64_t numerator, std::int64_t denominator = 1);

    /// Reduces a 128-bit fraction into range.
    static ExactRatio from_wide(SignedWide numerator, SignedWide denominator);

    [[nodiscard]] std::int64_t numerator() const noexcept { return num_; }
    [[nodiscard]] std::int64_t denominator() const noexcept { return den_; }

    [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }
    [[nodiscard]] bool is_positive() const noexcept { return num_ > 0; }

    /// "n" or "n/d".
    [[nodiscard]] std::string to_string() const;
    /// Fixed-point rendering with the given number of fractional digits (truncated toward zero).
    [[nodiscard]] std::string to_decimal(int digits) const;
    [[nodiscard]] double to_double() const noexcept;

    friend ExactRatio operator+(const ExactRatio& a, const ExactRatio& b);
    friend ExactRatio operator-(const ExactRatio& a, const ExactRatio& b);
    friend ExactRatio operator*(const ExactRatio& a, const ExactRatio& b);
    friend ExactRatio operator/(const ExactRatio& a, const ExactRatio& b);

    friend bool operator==(const ExactRatio& a, const ExactRatio& b) noexcept = default;
    friend std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::strong_ordering compare_exact(const ExactRatio& lhs, const ExactRatio& rhs) noexcept;

} // namespace dcf
