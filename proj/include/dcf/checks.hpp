#pragma once

/// @file checks.hpp
/// One checker per inequality claim. Each returns a BoundCheck: whether the
/// claim's side conditions hold, the verdict, and the three compared sides.
/// Rational sides are compared exactly; sides with exp or sqrt go through the
/// certified log-domain comparator.

#include "dcf/factorizer.hpp"
#include "dcf/log_bound.hpp"
#include "dcf/numeric.hpp"
#include "dcf/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace dcf {

enum class ClaimId { Th1, Obs2, Th2Final, Th2Interior, Th3Lower, Th3Ratio, Th4A, Th4B, CorRange };

inline constexpr std::array<ClaimId, 9> kAllClaims{ClaimId::Th1,         ClaimId::Obs2,     ClaimId::Th2Final,
                                                   ClaimId::Th2Interior, ClaimId::Th3Lower, ClaimId::Th3Ratio,
                                                   ClaimId::Th4A,        ClaimId::Th4B,     ClaimId::CorRange};

/// "th1", "obs2", "th2", "th2i", "th3_lower", "th3_ratio", "th4_a", "th4_b", "cor".
std::string_view to_string(ClaimId id) noexcept;
std::optional<ClaimId> parse_claim(std::string_view s) noexcept;

struct Side {
    std::string text;
    bool exact = true;
    friend bool operator==(const Side&, const Side&) = default;
};

/// Enough of each check's input to re-run it from a persisted record.
struct CheckWitness {
    /// Representation of p (for Th3: of p + 10).
    Natural a = 0;
    Natural b = 0;
    // Th2: the paired representation and the regime it was evaluated under.
    std::optional<Natural> p_next;
    std::optional<Natural> a_next;
    std::optional<Natural> b_next;
    std::optional<bool> gate_on_next;
    std::optional<bool> actual_step;
    // d-interval witness.
    std::optional<Natural> d;
    std::optional<Natural> s;
    std::optional<std::string> form;
    // Th3.
    std::optional<ExactRatio> x0;

    friend bool operator==(const CheckWitness&, const CheckWitness&) = default;
};

struct BoundCheck {
    ClaimId claim = ClaimId::Th1;
    Natural p = 0;
    ResidueCase rcase = kSevenThree;
    bool applicable = false;
    /// Names the failed side condition, e.g. "B = 3 < 8"; empty when applicable.
    std::string gate;
    Verdict verdict;
    Side lhs;
    Side mid;
    Side rhs;
    std::optional<CheckWitness> witness;

    [[nodiscard]] bool exact() const noexcept { return lhs.exact && mid.exact && rhs.exact; }

    /// Same claim, inputs, verdict and sides (the Borderline margin is not compared).
    friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

/// p/100 <= AB <= 121p/10^4 under A >= 4, B >= 8 (73); A, B >= 2 (99); A, B >= 10 (11).
BoundCheck check_th1(const Representation& rep);

/// 100ab <= p <= 100(a+1)(b+1), unconditional.
BoundCheck check_obs2(const Representation& rep);

/// Representations of p and of the value it is paired with (p + 10 unless the
/// consecutive pairing chose another) in the same case.
class Th2Pair {
public:
    Th2Pair(Representation at_p, Representation at_next);

    [[nodiscard]] const Representation& at_p() const noexcept { return at_p_; }
    [[nodiscard]] const Representation& at_next() const noexcept { return at_next_; }
    [[nodiscard]] Natural step() const noexcept { return at_next_.p() - at_p_.p(); }

private:
    Representation at_p_;
    Representation at_next_;
};

struct Th2Options {
    /// Require the A/B conditions on the paired representation too.
    bool gate_on_next = true;
    /// Replace 10 by the actual step in the (1 + 10/p) factor.
    bool actual_step = false;
};

/// 1 <= R^(1/100) <= e^0.000201 (1 + 10/p)^(0.101^2) with R = A'B'/(AB).
/// Sides are reported in R-space: lhs "1", mid R, rhs e^(0.0201) (1 + 10/p)^1.0201.
/// Conditions A >= 31, B >= 71 (73); A, B >= 11 (99); A, B >= 91 (11).
BoundCheck check_th2(const Th2Pair& pair, const Th2Options& options = {});

/// p/100 <= AB <= 101^2 p / 10^6 under the same conditions as check_th2.
BoundCheck check_th2_interior(const Representation& rep);

/// p prime ending in 1 with p + 10 = (10a + 7)(10b + 3), and the rational x0 solving
/// p = (10 x0 + 7)(10b + 3).
class Th3Instance {
public:
    /// Throws std::invalid_argument unless p + 10 = (10a+7)(10b+3) and x0 > 0.
    Th3Instance(Natural p, Natural a, Natural b);

    [[nodiscard]] Natural p() const noexcept { return p_; }
    [[nodiscard]] Natural a() const noexcept { return a_; }
    [[nodiscard]] Natural b() const noexcept { return b_; }
    [[nodiscard]] Natural A() const noexcept { return a_ + 1; }
    [[nodiscard]] const ExactRatio& x0() const noexcept { return x0_; }
    [[nodiscard]] ExactRatio X0() const { return x0_ + ExactRatio{1}; }
    /// A / X0.
    [[nodiscard]] ExactRatio ratio() const;

private:
    Natural p_;
    Natural a_;
    Natural b_;
    ExactRatio x0_;
};

/// {1 < A/X0 < (1 + 10/p) 101/100 for A >= 31,
///  10(p+10)/(11p) < A/X0 < 101(p+10)/(100p) for X0 >= 3.3}.
/// Throws std::invalid_argument if p is not prime.
std::pair<BoundCheck, BoundCheck> check_th3(const Th3Instance& inst);

/// A-branch: 1 <= (p + 70A - 21)/(p + 259) <= e^((7 sqrt p - 259)/p) for 4 <= A <= (sqrt p + 3)/10.
/// B-branch: 1 <= (p + 30B - 21)/(p + 219) <= e^((3 sqrt p - 3)/p) for 8 <= B <= (sqrt p + 7)/10.
/// Throws std::invalid_argument for a case other than 73.
std::pair<BoundCheck, BoundCheck> check_th4(const Representation& rep);

/// d inside the printed d-interval, for witnesses in its stated
/// region (x >= 3, y >= 7 for 73; x, y >= 2 for 99; x, y >= 9 for 11).
BoundCheck check_cor_range(const DSearchWitness& witness);

/// Re-runs the check named by a record from its stored witness.
/// Throws std::invalid_argument if the witness is missing or inconsistent.
BoundCheck reverify(const BoundCheck& record);

} // namespace dcf
