#pragma once

/// @file factorizer.hpp
/// All representations of p in a digit-class family, found three independent ways:
///
///  - oracle: divisor enumeration, the ground truth;
///  - d-search: scan d = 7x + 3y (case 73) or d = x + y (cases 99, 11) and test
///    whether the discriminant (5d + c)^2 - kp is a perfect square;
///  - lambda-search (case 73 only): the parametrization
///      (a, b) = ((p - 21 - 10L)/30, 3L/(p - 10L))  or  (7L/(p - 10L), (p - 21 - 10L)/70).
///
/// Sets are returned sorted by (a, b). In the symmetric cases 99 and 11 only
/// pairs with a <= b are emitted.

#include "dcf/numeric.hpp"
#include "dcf/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace dcf {

enum class RangeMode { Printed, Sound };

/// Closed interval of d values; empty when lo > hi.
struct DInterval {
    Natural lo = 1;
    Natural hi = 0;
    [[nodiscard]] bool empty() const noexcept { return lo > hi; }
    [[nodiscard]] bool contains(Natural d) const noexcept { return lo <= d && d <= hi; }
    friend bool operator==(const DInterval&, const DInterval&) = default;
};

/// s = 5^k 2^j (tau absent) or s = 5^k tau^j with tau odd and coprime to 5.
struct PowerForm {
    Natural k = 0;
    Natural j = 0;
    std::optional<Natural> tau;
    friend bool operator==(const PowerForm&, const PowerForm&) = default;
};

struct NonConforming {
    /// s = 0: the symmetric square case.
    bool zero_case = false;
    friend bool operator==(const NonConforming&, const NonConforming&) = default;
};

using Form = std::variant<PowerForm, NonConforming>;

enum class Parity { Even, Odd };

/// "5^1*2^2", "5^1*11^1", "nonconforming" or "zero".
std::string describe(const Form& form);

struct DSearchWitness {
    Natural d = 0;
    /// Root of the discriminant.
    Natural s = 0;
    Representation rep;
    Form form;
};

struct LambdaWitness {
    Natural lambda = 0;
    int form_index = 1;
    Representation rep;
};

struct LambdaOptions {
    /// Whether lambda = 0 counts as a natural number (p = 21 needs it).
    bool admit_zero = true;
};

/// Discriminant root for case c at d: s with s^2 = (5d + c0)^2 - k p, if any.
std::optional<Natural> discriminant_root(Natural p, ResidueCase rcase, Natural d);

/// d-parameter of a representation: 7a + 3b for case 73, a + b otherwise.
Natural d_parameter(const Representation& rep) noexcept;

/// Throws std::invalid_argument unless p ends in 1.
void require_ends_in_one(Natural p);

std::vector<Representation> oracle_representations(Natural p, ResidueCase rcase);

/// Printed: the published d-interval rounded inward. Sound: lower bound from
/// a nonnegative discriminant, upper bound from x, y >= 0.
DInterval d_bounds(Natural p, ResidueCase rcase, RangeMode mode);

Form form_classify(Natural s, Parity parity);

/// Witness built directly from a known representation (d and s recomputed exactly).
DSearchWitness witness_for(const Representation& rep);

/// Sorted by d, then by a. Throws std::range_error if (5d + c)^2 would leave 64 bits.
std::vector<DSearchWitness> dsearch_representations(Natural p, ResidueCase rcase,
                                                    RangeMode mode = RangeMode::Sound);

/// Case 73 only; sorted by (form_index, lambda).
std::vector<LambdaWitness> lambda_representations(Natural p, const LambdaOptions& options = {});

/// The representation set behind a list of witnesses, deduplicated and sorted.
std::vector<Representation> representations_of(const std::vector<DSearchWitness>& ws);
std::vector<Representation> representations_of(const std::vector<LambdaWitness>& ws);

/// Serial reference implementations kept for testing the fast paths.
namespace reference {

/// Trial division by every u <= p with u = m (mod 10).
std::vector<Representation> oracle_naive(Natural p, ResidueCase rcase);

/// Plain d scan with is_perfect_square on every discriminant, no residue filters.
std::vector<DSearchWitness> dsearch_plain(Natural p, ResidueCase rcase, RangeMode mode = RangeMode::Sound);

/// Scan lambda over [0, p/10] and keep values where both formulas are exact naturals.
std::vector<LambdaWitness> lambda_scan(Natural p, const LambdaOptions& options = {});

} // namespace reference

} // namespace dcf
