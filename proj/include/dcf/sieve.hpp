#pragma once

/// @file sieve.hpp
/// Prime generation, deterministic 64-bit primality and the last-digit
/// transition statistic of consecutive primes.

#include "dcf/numeric.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dcf {

/// Raised when a request would need a sieve or sweep beyond the configured ceiling.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr Natural kDefaultMaxLimit = 1'000'000'000;

/// kDefaultMaxLimit, or the value of DCF_MAX_LIMIT when set to a positive integer.
Natural configured_max_limit();

struct SieveOptions {
    /// Odd numbers per segment.
    Natural segment_odds = Natural{1} << 20;
    /// OpenMP threads; 0 uses the runtime default.
    int workers = 0;
    Natural max_limit = configured_max_limit();
};

/// All primes <= limit in increasing order. Memory beyond the output is
/// O(sqrt(limit) + segment). Throws std::invalid_argument for limit < 2 and
/// ResourceError above options.max_limit.
std::vector<Natural> sieve_primes(Natural limit, const SieveOptions& options = {});

/// Deterministic Miller-Rabin for every n < 2^64.
bool is_prime(Natural n) noexcept;

/// Counts of consecutive-prime last-digit pairs, indexed over {1, 3, 7, 9}.
struct TransitionMatrix {
    std::array<std::array<Natural, 4>, 4> counts{};
    Natural total = 0;

    static constexpr std::array<int, 4> kDigits{1, 3, 7, 9};
    /// Index of a last digit in kDigits; -1 for other digits.
    static constexpr int digit_index(Natural last_digit) noexcept
    {
        switch (last_digit) {
        case 1: return 0;
        case 3: return 1;
        case 7: return 2;
        case 9: return 3;
        default: return -1;
        }
    }

    [[nodiscard]] Natural row_sum(int from) const noexcept;
    /// counts[from][to] / row_sum(from); 0 for an empty row.
    [[nodiscard]] double frequency(int from, int to) const noexcept;

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;
};

/// Upper bound on the n-th prime (1-based), n >= 1.
Natural nth_prime_upper_bound(Natural n);

/// Transitions among the first prime_count primes greater than 5.
/// Throws std::invalid_argument for prime_count < 2 and ResourceError when the
/// required sieve limit exceeds options.max_limit.
TransitionMatrix transition_matrix(Natural prime_count, const SieveOptions& options = {});

/// Transitions among all primes p with 5 < p <= limit.
TransitionMatrix transition_matrix_upto(Natural limit, const SieveOptions& options = {});

/// Serial reference implementations kept for cross-checking the parallel kernels.
namespace reference {

/// Plain non-segmented Eratosthenes over [0, limit].
std::vector<Natural> simple_sieve(Natural limit);

/// Two-pass recount: materialize the primes, then walk adjacent pairs.
TransitionMatrix transition_matrix_naive(Natural prime_count);

} // namespace reference

} // namespace dcf
