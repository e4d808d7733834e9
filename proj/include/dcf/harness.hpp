#pragma once

/// @file harness.hpp
/// Range campaigns over p = 1 (mod 10): factor every p by all methods, run the
/// selected claim checks, aggregate counters, mine counterexamples and study
/// whether AB grows with p.
///
/// Work is cut into fixed chunks of p values; chunks run in parallel under
/// OpenMP and are merged in chunk order, so reports and record streams do not
/// depend on the worker count.

#include "dcf/checks.hpp"
#include "dcf/factorizer.hpp"
#include "dcf/sieve.hpp"

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dcf {

enum class Th2Pairing { Literal10, ConsecutiveRepresentable };
enum class RecordFilter { All, Findings };
enum class OutputFormat { Jsonl, Csv };

struct SweepConfig {
    Natural lo = 1;
    Natural hi = 1;
    std::vector<ResidueCase> cases{kAllCases.begin(), kAllCases.end()};
    std::vector<ClaimId> claims{kAllClaims.begin(), kAllClaims.end()};
    int workers = 1;
    /// Record stream destination; empty for none.
    std::string output_path;
    OutputFormat format = OutputFormat::Jsonl;
    /// Findings keeps only fail and borderline records.
    RecordFilter records = RecordFilter::Findings;
    Th2Pairing th2_pairing = Th2Pairing::Literal10;
    bool th2_gate_on_next = true;
    bool th2_actual_step = false;
    RangeMode dsearch_mode = RangeMode::Sound;
    /// Compare oracle, d-search and lambda-search for p up to cross_check_limit.
    bool cross_check = true;
    Natural cross_check_limit = 1'000'000;
    /// p values per work unit.
    Natural chunk_size = 10'000;
    Natural max_limit = configured_max_limit();
    /// Stored violations/examples per list; counts are always complete.
    std::size_t list_cap = 1000;
};

struct ClaimCounters {
    Natural pass = 0;
    Natural fail = 0;
    Natural borderline = 0;
    Natural not_applicable = 0;
    Natural non_pairable = 0;

    void add(Outcome o) noexcept;
    [[nodiscard]] Natural total() const noexcept { return pass + fail + borderline + not_applicable + non_pairable; }
    ClaimCounters& operator+=(const ClaimCounters& o) noexcept;
    friend bool operator==(const ClaimCounters&, const ClaimCounters&) = default;
};

struct Disagreement {
    Natural p = 0;
    ResidueCase rcase = kSevenThree;
    std::vector<Representation> oracle;
    std::vector<Representation> dsearch;
    std::vector<Representation> lambda;
};

struct MethodEquivalence {
    /// (p, case) combinations compared.
    Natural compared = 0;
    Natural agree = 0;
    /// Combinations with at least one representation (the rest agree trivially).
    Natural representable = 0;
    std::vector<Disagreement> disagree;
};

struct FormConformance {
    Natural witnesses = 0;
    Natural power_two = 0;
    Natural power_tau = 0;
    Natural nonconforming = 0;
    Natural zero = 0;
    std::vector<DSearchWitness> nonconforming_examples;

    void add(const DSearchWitness& w, std::size_t cap);
    [[nodiscard]] double conforming_fraction() const noexcept;
};

/// One ordering statistic over consecutive representable p.
struct MonotonicityVariant {
    Natural pairs = 0;
    Natural increasing = 0;
    std::vector<std::pair<Natural, Natural>> violations;
    [[nodiscard]] double fraction() const noexcept;
    [[nodiscard]] Natural violation_count() const noexcept { return pairs - increasing; }
};

struct MonotonicityResult {
    ResidueCase rcase = kSevenThree;
    Natural representable = 0;
    /// Largest AB over the representations of each p.
    MonotonicityVariant max_ab;
    /// Smallest AB.
    MonotonicityVariant min_ab;
    /// Every representation of the next p beats every representation of p.
    MonotonicityVariant all_reps;
};

/// (p, min AB, max AB) for one representable p.
struct ProductRange {
    Natural p = 0;
    Wide min_ab = 0;
    Wide max_ab = 0;
};

MonotonicityResult summarize_monotonicity(ResidueCase rcase, const std::vector<ProductRange>& data,
                                          std::size_t cap = 1000);

/// Orders all representable p <= limit and measures how often AB increases.
/// Throws std::invalid_argument for limit < 100.
MonotonicityResult monotonicity_study(ResidueCase rcase, Natural limit, int workers = 1, std::size_t cap = 1000);

struct Th3Stats {
    /// Prime p with p + 10 case-73 representable and x0 > 0.
    Natural instances = 0;
    /// Instances where A/X0 > 1 failed.
    Natural strict_lower_violations = 0;
    /// Prime p with a representation of p + 10 that gives x0 <= 0.
    Natural non_constructible = 0;
};

struct SweepReport {
    Natural lo = 0;
    Natural hi = 0;
    Natural evaluated_p = 0;
    std::array<ClaimCounters, kAllClaims.size()> counters{};
    /// Independently tallied number of evaluations per claim.
    std::array<Natural, kAllClaims.size()> instances{};
    /// Th2 under both gating regimes, whatever the configured one.
    ClaimCounters th2_gate_both;
    ClaimCounters th2_gate_p_only;
    std::vector<BoundCheck> counterexamples;
    MethodEquivalence method_equivalence;
    std::array<FormConformance, 3> conformance{};
    std::vector<MonotonicityResult> monotonicity;
    Th3Stats th3;
    double elapsed_seconds = 0.0;

    [[nodiscard]] const ClaimCounters& counters_for(ClaimId id) const noexcept
    {
        return counters[static_cast<std::size_t>(id)];
    }
    [[nodiscard]] Natural instances_for(ClaimId id) const noexcept
    {
        return instances[static_cast<std::size_t>(id)];
    }
    /// Counter totals match instance tallies and counterexamples match fail + borderline.
    [[nodiscard]] bool consistent() const noexcept;
};

/// Runs a campaign. Throws std::invalid_argument for an invalid config,
/// ResourceError above max_limit and std::runtime_error for output failures.
SweepReport sweep(const SweepConfig& config);

/// counterexample_count is always complete; the listed records stop at counterexample_cap.
nlohmann::ordered_json to_json(const SweepReport& report,
                               std::size_t counterexample_cap = std::numeric_limits<std::size_t>::max());
nlohmann::ordered_json to_json(const MonotonicityResult& result);
nlohmann::ordered_json to_json(const DSearchWitness& witness);

} // namespace dcf
