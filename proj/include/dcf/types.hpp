#pragma once

/// @file types.hpp
/// Domain values shared by the factorizer, the claim checks and the harness.

#include "dcf/numeric.hpp"

#include <array>
#include <tuple>
#include <optional>
#include <string>
#include <string_view>

namespace dcf {

enum class CaseTag { SevenThree, NineNine, OneOne };

/// One of the three digit-class families p = (10x + m)(10y + n).
class ResidueCase {
public:
    constexpr ResidueCase(CaseTag tag) noexcept : tag_(tag) {}

    [[nodiscard]] constexpr CaseTag tag() const noexcept { return tag_; }
    [[nodiscard]] constexpr Natural m() const noexcept
    {
        return tag_ == CaseTag::SevenThree ? 7 : tag_ == CaseTag::NineNine ? 9 : 1;
    }
    [[nodiscard]] constexpr Natural n() const noexcept
    {
        return tag_ == CaseTag::SevenThree ? 3 : tag_ == CaseTag::NineNine ? 9 : 1;
    }
    /// Cases ii and iii are symmetric in (x, y).
    [[nodiscard]] constexpr bool symmetric() const noexcept { return tag_ != CaseTag::SevenThree; }

    /// Stable identifier: "73", "99" or "11".
    [[nodiscard]] std::string_view id() const noexcept;
    static std::optional<ResidueCase> parse(std::string_view id) noexcept;

    friend constexpr bool operator==(ResidueCase a, ResidueCase b) noexcept = default;

private:
    CaseTag tag_;
};

inline constexpr ResidueCase kSevenThree{CaseTag::SevenThree};
inline constexpr ResidueCase kNineNine{CaseTag::NineNine};
inline constexpr ResidueCase kOneOne{CaseTag::OneOne};
inline constexpr std::array<ResidueCase, 3> kAllCases{kSevenThree, kNineNine, kOneOne};

/// An exact solution (a, b) of p = (10a + m)(10b + n).
///
/// The constructor verifies the product identity and p mod 10 = 1 and throws
/// std::invalid_argument otherwise, so a Representation is always valid.
class Representation {
public:
    Representation(Natural p, ResidueCase rcase, Natural a, Natural b);

    [[nodiscard]] Natural p() const noexcept { return p_; }
    [[nodiscard]] ResidueCase residue_case() const noexcept { return case_; }
    [[nodiscard]] Natural a() const noexcept { return a_; }
    [[nodiscard]] Natural b() const noexcept { return b_; }
    /// Shifted values A = a + 1, B = b + 1.
    [[nodiscard]] Natural A() const noexcept { return a_ + 1; }
    [[nodiscard]] Natural B() const noexcept { return b_ + 1; }
    [[nodiscard]] Wide AB() const noexcept { return Wide{A()} * B(); }
    /// The two factors 10a + m and 10b + n.
    [[nodiscard]] Natural first_factor() const noexcept { return 10 * a_ + case_.m(); }
    [[nodiscard]] Natural second_factor() const noexcept { return 10 * b_ + case_.n(); }

    friend bool operator==(const Representation& x, const Representation& y) noexcept = default;
    friend auto operator<=>(const Representation& x, const Representation& y) noexcept
    {
        return std::tie(x.a_, x.b_) <=> std::tie(y.a_, y.b_);
    }

private:
    Natural p_;
    ResidueCase case_;
    Natural a_;
    Natural b_;
};

enum class Outcome { Pass, Fail, NotApplicable, Borderline };

std::string_view to_string(Outcome o) noexcept;
std::optional<Outcome> parse_outcome(std::string_view s) noexcept;

struct Verdict {
    Outcome outcome = Outcome::NotApplicable;
    /// Magnitude of the log-domain difference; set only for Borderline.
    std::optional<double> margin;

    friend bool operator==(const Verdict& a, const Verdict& b) noexcept { return a.outcome == b.outcome; }
};

} // namespace dcf
