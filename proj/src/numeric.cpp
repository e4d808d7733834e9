#include "dcf/numeric.hpp"
#include "dcf/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dcf {

Natural isqrt(Natural n) noexcept
{
    auto r = static_cast<Natural>(std::sqrt(static_cast<double>(n)));
    // The double estimate is within a couple of units; fix it up exactly.
    while (Wide{r} * r > n)
        --r;
    while (Wide{r + 1} * (r + 1) <= n)
        ++r;
    return r;
}

Natural isqrt(Wide n) noexcept
{
    if (n <= std::numeric_limits<Natural>::max())
        return isqrt(static_cast<Natural>(n));
    auto r = static_cast<Natural>(std::sqrt(static_cast<long double>(n)));
    while (Wide{r} * r > n)
        --r;
    while (r < std::numeric_limits<Natural>::max() && Wide{r + 1} * (r + 1) <= n)
        ++r;
    return r;
}

std::optional<Natural> is_perfect_square(Natural n) noexcept
{
    // Squares mod 16 are {0, 1, 4, 9}.
    if (((0x213u >> (n & 15)) & 1u) == 0)
        return std::nullopt;
    const Natural r = isqrt(n);
    if (r * r == n)
        return r;
    return std::nullopt;
}

std::optional<Natural> is_perfect_square(Wide n) noexcept
{
    const Natural r = isqrt(n);
    if (Wide{r} * r == n)
        return r;
    return std::nullopt;
}

Natural narrow(Wide v)
{
    if (v > std::numeric_limits<Natural>::max())
        throw std::overflow_error("value exceeds 64-bit range: " + to_string(v));
    return static_cast<Natural>(v);
}

std::int64_t narrow_signed(SignedWide v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("value exceeds 64-bit range: " + to_string(v));
    return static_cast<std::int64_t>(v);
}

std::string to_string(Wide v)
{
    if (v == 0)
        return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_string(SignedWide v)
{
    if (v < 0)
        return "-" + to_string(static_cast<Wide>(-v));
    return to_string(static_cast<Wide>(v));
}

namespace {

Wide gcd_wide(Wide a, Wide b) noexcept
{
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Wide abs_wide(SignedWide v) noexcept
{
    return v < 0 ? static_cast<Wide>(-v) : static_cast<Wide>(v);
}

} // namespace

ExactRatio::ExactRatio(std::int64_t numerator, std::int64_t denominator)
{
    *this = from_wide(numerator, denominator);
}

ExactRatio ExactRatio::from_wide(SignedWide numerator, SignedWide denominator)
{
    if (denominator == 0)
        throw std::domain_error("ExactRatio with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const Wide g = gcd_wide(abs_wide(numerator), static_cast<Wide>(denominator));
    if (g > 1) {
        numerator /= static_cast<SignedWide>(g);
        denominator /= static_cast<SignedWide>(g);
    }
    ExactRatio r;
    r.num_ = narrow_signed(numerator);
    r.den_ = narrow_signed(denominator);
    return r;
}

std::string ExactRatio::to_string() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string ExactRatio::to_decimal(int digits) const
{
    const bool negative = num_ < 0;
    Wide n = abs_wide(num_);
    const Wide d = static_cast<Wide>(den_);
    std::string out = negative && n != 0 ? "-" : "";
    out += dcf::to_string(n / d);
    Wide rem = n % d;
    if (digits > 0) {
        out.push_back('.');
        for (int i = 0; i < digits; ++i) {
            rem *= 10;
            out.push_back(static_cast<char>('0' + static_cast<int>(rem / d)));
            rem %= d;
        }
    }
    return out;
}

double ExactRatio::to_double() const noexcept
{
    return static_cast<double>(num_) / static_cast<double>(den_);
}

ExactRatio operator+(const ExactRatio& a, const ExactRatio& b)
{
    return ExactRatio::from_wide(SignedWide{a.num_} * b.den_ + SignedWide{b.num_} * a.den_,
                                 SignedWide{a.den_} * b.den_);
}

ExactRatio operator-(const ExactRatio& a, const ExactRatio& b)
{
    return ExactRatio::from_wide(SignedWide{a.num_} * b.den_ - SignedWide{b.num_} * a.den_,
                                 SignedWide{a.den_} * b.den_);
}

ExactRatio operator*(const ExactRatio& a, const ExactRatio& b)
{
    return ExactRatio::from_wide(SignedWide{a.num_} * b.num_, SignedWide{a.den_} * b.den_);
}

ExactRatio operator/(const ExactRatio& a, const ExactRatio& b)
{
    if (b.num_ == 0)
        throw std::domain_error("division by zero ratio");
    return ExactRatio::from_wide(SignedWide{a.num_} * b.den_, SignedWide{a.den_} * b.num_);
}

std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) noexcept
{
    // |num| < 2^63 and den < 2^63, so each product fits in 126 bits.
    return SignedWide{a.num_} * b.den_ <=> SignedWide{b.num_} * a.den_;
}

std::strong_ordering compare_exact(const ExactRatio& lhs, const ExactRatio& rhs) noexcept
{
    return lhs <=> rhs;
}

// types.hpp

std::string_view ResidueCase::id() const noexcept
{
    switch (tag_) {
    case CaseTag::SevenThree: return "73";
    case CaseTag::NineNine: return "99";
    case CaseTag::OneOne: return "11";
    }
    return "";
}

std::optional<ResidueCase> ResidueCase::parse(std::string_view id) noexcept
{
    if (id == "73")
        return kSevenThree;
    if (id == "99")
        return kNineNine;
    if (id == "11")
        return kOneOne;
    return std::nullopt;
}

Representation::Representation(Natural p, ResidueCase rcase, Natural a, Natural b)
    : p_(p), case_(rcase), a_(a), b_(b)
{
    if (p % 10 != 1)
        throw std::invalid_argument("p = " + std::to_string(p) + " does not end in 1");
    const Wide u = Wide{a} * 10 + rcase.m();
    const Wide v = Wide{b} * 10 + rcase.n();
    if (u * v != p)
        throw std::invalid_argument("(" + std::to_string(a) + ", " + std::to_string(b)
                                    + ") is not a case " + std::string(rcase.id())
                                    + " representation of " + std::to_string(p));
}

std::string_view to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::NotApplicable: return "na";
    case Outcome::Borderline: return "borderline";
    }
    return "";
}

std::optional<Outcome> parse_outcome(std::string_view s) noexcept
{
    if (s == "pass")
        return Outcome::Pass;
    if (s == "fail")
        return Outcome::Fail;
    if (s == "na")
        return Outcome::NotApplicable;
    if (s == "borderline")
        return Outcome::Borderline;
    return std::nullopt;
}

} // namespace dcf
