#include "dcf/sieve.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace dcf {

Natural configured_max_limit()
{
    if (const char* env = std::getenv("DCF_MAX_LIMIT")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<Natural>(v);
    }
    return kDefaultMaxLimit;
}

namespace {

void check_limit(Natural limit, const SieveOptions& options)
{
    if (limit > options.max_limit)
        throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds the configured maximum "
                            + std::to_string(options.max_limit) + " (set DCF_MAX_LIMIT to raise it)");
}

int resolve_workers(int workers)
{
    return workers > 0 ? workers : omp_get_max_threads();
}

/// Primes among the odd numbers 2i + 1 for i in [lo, hi), capped at limit.
std::vector<Natural> sieve_segment(Natural lo, Natural hi, Natural limit, const std::vector<Natural>& base)
{
    std::vector<std::uint8_t> composite(hi - lo, 0);
    const Natural first = 2 * lo + 1;
    const Natural last = 2 * (hi - 1) + 1;
    for (Natural q : base) {
        const Wide sq = Wide{q} * q;
        if (sq > last)
            break;
        Natural start = std::max<Natural>(static_cast<Natural>(sq), (first + q - 1) / q * q);
        if (start % 2 == 0)
            start += q;
        for (Natural i = (start - 1) / 2; i < hi; i += q)
            composite[i - lo] = 1;
    }
    std::vector<Natural> primes;
    for (Natural i = lo; i < hi; ++i) {
        const Natural n = 2 * i + 1;
        if (n > limit)
            break;
        if (!composite[i - lo] && n != 1)
            primes.push_back(n);
    }
    return primes;
}

/// Odd primes up to sqrt(limit), used to cross off segments.
std::vector<Natural> base_primes(Natural limit)
{
    auto small = reference::simple_sieve(std::max<Natural>(isqrt(limit), 2));
    small.erase(small.begin());  // drop 2
    return small;
}

/// Runs sieve_segment over [0, limit] in ordered batches and hands each
/// segment's primes to `consume` in increasing order. `consume` returns false to stop.
template <typename Consume>
void for_each_segment(Natural limit, const SieveOptions& options, Consume&& consume)
{
    const Natural seg = std::max<Natural>(options.segment_odds, 1024);
    const Natural odd_count = (limit + 1) / 2;  // indices i with 2i+1 <= limit
    const Natural segments = (odd_count + seg - 1) / seg;
    const auto base = base_primes(limit);
    const int workers = resolve_workers(options.workers);
    const Natural batch = static_cast<Natural>(workers) * 4;

    for (Natural s0 = 0; s0 < segments; s0 += batch) {
        const Natural s1 = std::min(segments, s0 + batch);
        std::vector<std::vector<Natural>> results(s1 - s0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (Natural s = s0; s < s1; ++s) {
            const Natural lo = s * seg;
            const Natural hi = std::min(odd_count, lo + seg);
            results[s - s0] = sieve_segment(lo, hi, limit, base);
        }
        for (auto& r : results)
            if (!consume(r))
                return;
    }
}

Wide mul_mod(Wide a, Wide b, Wide m) { return a * b % m; }

Natural pow_mod(Natural base, Natural exp, Natural mod)
{
    Wide result = 1;
    Wide b = base % mod;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, b, mod);
        b = mul_mod(b, b, mod);
        exp >>= 1;
    }
    return static_cast<Natural>(result);
}

} // namespace

std::vector<Natural> sieve_primes(Natural limit, const SieveOptions& options)
{
    if (limit < 2)
        throw std::invalid_argument("sieve_primes requires limit >= 2");
    check_limit(limit, options);
    std::vector<Natural> primes{2};
    for_each_segment(limit, options, [&](const std::vector<Natural>& seg) {
        primes.insert(primes.end(), seg.begin(), seg.end());
        return true;
    });
    return primes;
}

bool is_prime(Natural n) noexcept
{
    if (n < 2)
        return false;
    for (Natural q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0)
            return n == q;
    }
    if (n < 41 * 41)
        return true;
    Natural d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // The first twelve primes are a deterministic witness set below 3.3e24.
    for (Natural a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Natural x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = static_cast<Natural>(mul_mod(x, x, n));
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

Natural TransitionMatrix::row_sum(int from) const noexcept
{
    Natural s = 0;
    for (Natural c : counts[from])
        s += c;
    return s;
}

double TransitionMatrix::frequency(int from, int to) const noexcept
{
    const Natural row = row_sum(from);
    return row == 0 ? 0.0 : static_cast<double>(counts[from][to]) / static_cast<double>(row);
}

Natural nth_prime_upper_bound(Natural n)
{
    if (n < 6)
        return 13;
    const double x = static_cast<double>(n);
    // Rosser: p_n < n (ln n + ln ln n) for n >= 6.
    return static_cast<Natural>(std::ceil(x * (std::log(x) + std::log(std::log(x))))) + 1;
}

TransitionMatrix transition_matrix(Natural prime_count, const SieveOptions& options)
{
    if (prime_count < 2)
        throw std::invalid_argument("transition_matrix requires prime_count >= 2");
    // 2, 3 and 5 precede the counted primes.
    const Natural limit = nth_prime_upper_bound(prime_count + 3);
    check_limit(limit, options);

    TransitionMatrix m;
    Natural seen = 0;
    int prev = -1;
    for_each_segment(limit, options, [&](const std::vector<Natural>& seg) {
        for (Natural q : seg) {
            if (q <= 5)
                continue;
            const int digit = TransitionMatrix::digit_index(q % 10);
            if (digit < 0)
                throw std::logic_error("prime " + std::to_string(q) + " has an impossible last digit");
            if (prev >= 0) {
                ++m.counts[prev][digit];
                ++m.total;
            }
            prev = digit;
            if (++seen == prime_count)
                return false;
        }
        return true;
    });
    if (seen < prime_count)
        throw std::logic_error("sieve bound too small for " + std::to_string(prime_count) + " primes");
    return m;
}

TransitionMatrix transition_matrix_upto(Natural limit, const SieveOptions& options)
{
    if (limit < 2)
        throw std::invalid_argument("transition_matrix_upto requires limit >= 2");
    check_limit(limit, options);
    TransitionMatrix m;
    int prev = -1;
    for_each_segment(limit, options, [&](const std::vector<Natural>& seg) {
        for (Natural q : seg) {
            if (q <= 5)
                continue;
            const int digit = TransitionMatrix::digit_index(q % 10);
            if (prev >= 0) {
                ++m.counts[prev][digit];
                ++m.total;
            }
            prev = digit;
        }
        return true;
    });
    return m;
}

namespace reference {

std::vector<Natural> simple_sieve(Natural limit)
{
    std::vector<bool> mark(limit + 1, true);
    mark[0] = false;
    if (limit >= 1)
        mark[1] = false;
    for (Natural i = 2; i * i <= limit; ++i)
        if (mark[i])
            for (Natural j = i * i; j <= limit; j += i)
                mark[j] = false;
    std::vector<Natural> primes;
    for (Natural i = 2; i <= limit; ++i)
        if (mark[i])
            primes.push_back(i);
    return primes;
}

TransitionMatrix transition_matrix_naive(Natural prime_count)
{
    const auto all = simple_sieve(nth_prime_upper_bound(prime_count + 3));
    std::vector<Natural> tail;
    for (Natural q : all)
        if (q > 5 && tail.size() < prime_count)
            tail.push_back(q);
    TransitionMatrix m;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
        ++m.counts[TransitionMatrix::digit_index(tail[i] % 10)][TransitionMatrix::digit_index(tail[i + 1] % 10)];
        ++m.total;
    }
    return m;
}

} // namespace reference

} // namespace dcf
