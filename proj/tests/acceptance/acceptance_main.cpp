// Acceptance gate: one line per criterion, exit status 0 only if all pass.

#include "dcf/checks.hpp"
#include "dcf/factorizer.hpp"
#include "dcf/harness.hpp"
#include "dcf/records.hpp"
#include "dcf/sieve.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <algorithm>
#include <vector>

using namespace dcf;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("dcf_acceptance_" + name);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Natural findings(const ClaimCounters& c) { return c.fail + c.borderline; }

// 1. Oracle, d-search (sound range) and lambda-search agree for every p <= 1e6, single-threaded.
Result method_equivalence()
{
    SweepConfig cfg;
    cfg.lo = 1;
    cfg.hi = 1'000'000;
    cfg.claims = {ClaimId::Obs2};
    cfg.workers = 1;
    cfg.cross_check = true;
    cfg.cross_check_limit = cfg.hi;
    cfg.dsearch_mode = RangeMode::Sound;
    const auto t0 = Clock::now();
    const auto r = sweep(cfg);
    const double elapsed = seconds_since(t0);
    const auto& eq = r.method_equivalence;
    const bool ok = eq.compared == 300'000 && eq.agree == eq.compared && eq.disagree.empty() && elapsed <= 300.0;
    return {ok, std::to_string(eq.compared) + " (p, case) compared, " + std::to_string(eq.disagree.size())
                    + " disagreements, " + std::to_string(eq.representable) + " representable, "
                    + fmt("%.1f s", elapsed) + " (limit 300 s)"};
}

/// The shared 1e7 campaign behind criteria 2, 3, 4, 6 and 7.
struct Campaign {
    SweepReport report;
    std::filesystem::path findings_path;
    double elapsed = 0;
};

Campaign run_campaign()
{
    SweepConfig cfg;
    cfg.lo = 1;
    cfg.hi = 10'000'000;
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    cfg.cross_check = false; // criterion 1 covers method agreement
    cfg.records = RecordFilter::Findings;
    Campaign c;
    c.findings_path = scratch("findings.jsonl");
    cfg.output_path = c.findings_path.string();
    const auto t0 = Clock::now();
    c.report = sweep(cfg);
    c.elapsed = seconds_since(t0);
    return c;
}

// 2. Th1: zero counterexamples to 1e7; p = 1311 is gated with AB = 18 > 121p/10^4.
Result ab_bound(const Campaign& c)
{
    const auto& k = c.report.counters_for(ClaimId::Th1);
    const auto fixture = check_th1(Representation(1311, kSevenThree, 5, 2));
    const bool gated = !fixture.applicable && fixture.verdict.outcome == Outcome::NotApplicable
                       && fixture.gate == "B = 3 < 8" && ExactRatio(18) > ExactRatio(121 * 1311, 10'000);
    const bool ok = findings(k) == 0 && k.pass > 0 && gated;
    return {ok, std::to_string(k.pass) + " applicable pass, " + std::to_string(findings(k)) + " fail/borderline, "
                    + std::to_string(k.not_applicable) + " gated; p = 1311 (5, 2) " + (gated ? "gated" : "NOT gated")
                    + " with AB = 18 > 15.8631"};
}

// 3. Obs2: zero counterexamples to 1e7, no gate.
Result digit_bound(const Campaign& c)
{
    const auto& k = c.report.counters_for(ClaimId::Obs2);
    const bool ok = findings(k) == 0 && k.not_applicable == 0 && k.pass == c.report.instances_for(ClaimId::Obs2);
    return {ok, std::to_string(k.pass) + " pass, " + std::to_string(findings(k)) + " fail/borderline"};
}

// 4. Th4 A-branch: zero counterexamples to 1e7; p = 2701, A = 4 is exact equality mid = 1 and passes.
Result exp_bound(const Campaign& c)
{
    const auto& k = c.report.counters_for(ClaimId::Th4A);
    const auto [a, b] = check_th4(Representation(2701, kSevenThree, 3, 7));
    (void)b;
    const bool equality = a.applicable && a.mid.text == "1" && a.mid.exact && a.verdict.outcome == Outcome::Pass;
    const bool ok = findings(k) == 0 && k.pass > 0 && equality;
    return {ok, std::to_string(k.pass) + " applicable pass, " + std::to_string(findings(k))
                    + " fail/borderline; p = 2701 A = 4 mid = " + a.mid.text + " verdict "
                    + std::string(to_string(a.verdict.outcome))};
}

// 5. Th3: strict lower bound on every constructible instance to 1e6; both bounds hold on a
// fully applicable instance found by search (p = 25471 expected).
Result ratio_bound()
{
    Natural instances = 0, violations = 0, fully_applicable = 0;
    Natural first_full = 0;
    for (Natural p : sieve_primes(1'000'000)) {
        if (p % 10 != 1)
            continue;
        for (const auto& rep : oracle_representations(p + 10, kSevenThree)) {
            if (Wide{rep.b()} * 70 + 21 >= p)
                continue; // x0 <= 0
            const Th3Instance inst(p, rep.a(), rep.b());
            ++instances;
            if (!(inst.ratio() > ExactRatio(1)))
                ++violations;
            const auto [lo, ratio] = check_th3(inst);
            if (lo.applicable && ratio.applicable) {
                ++fully_applicable;
                if (first_full == 0 && lo.verdict.outcome == Outcome::Pass && ratio.verdict.outcome == Outcome::Pass)
                    first_full = p;
            }
        }
    }
    bool anchor = false;
    if (is_prime(25471)) {
        const Th3Instance inst(25471, 30, 8);
        const auto [lo, ratio] = check_th3(inst);
        anchor = inst.ratio() == ExactRatio(2573, 2572) && lo.applicable && ratio.applicable
                 && lo.verdict.outcome == Outcome::Pass && ratio.verdict.outcome == Outcome::Pass;
    }
    const bool ok = instances > 0 && violations == 0 && anchor;
    return {ok, std::to_string(instances) + " constructible instances, " + std::to_string(violations)
                    + " with A/X0 <= 1, " + std::to_string(fully_applicable)
                    + " fully applicable, first passing both at p = " + std::to_string(first_full)
                    + "; p = 25471 (A/X0 = 2573/2572) " + (anchor ? "passes both" : "FAILS")};
}

// 6. Th2 and its interior bound: complete, internally consistent audit; Fail records re-verify on reload.
Result growth_audit(const Campaign& c)
{
    const auto& r = c.report;
    bool sums = r.consistent();
    for (ClaimId id : kAllClaims)
        sums = sums && r.counters_for(id).total() == r.instances_for(id);
    const auto& th2 = r.counters_for(ClaimId::Th2Final);
    const auto& th2i = r.counters_for(ClaimId::Th2Interior);
    sums = sums && r.th2_gate_both.total() == th2.total() && r.th2_gate_p_only.total() == th2.total();

    const auto loaded = read_jsonl(c.findings_path);
    Natural expected = 0;
    for (ClaimId id : kAllClaims)
        expected += findings(r.counters_for(id));
    Natural reverified = 0, mismatched = 0;
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        const auto& rec = loaded[i];
        if (to_jsonl_line(reverify(rec)) == to_jsonl_line(rec) && to_jsonl_line(rec) == to_jsonl_line(r.counterexamples[i]))
            ++reverified;
        else
            ++mismatched;
    }
    bool monotone = r.monotonicity.size() == kAllCases.size();
    std::string fractions;
    for (const auto& m : r.monotonicity) {
        monotone = monotone && m.max_ab.fraction() >= 0.0 && m.max_ab.fraction() <= 1.0;
        fractions += " " + std::string(m.rcase.id()) + ":" + fmt("%.4f", m.max_ab.fraction()) + "/"
                     + fmt("%.4f", m.min_ab.fraction());
    }
    const bool ok = sums && loaded.size() == expected && mismatched == 0 && monotone;
    return {ok, "th2 evaluated " + std::to_string(th2.pass + th2.fail + th2.borderline) + " (fail "
                    + std::to_string(th2.fail) + "), gated " + std::to_string(th2.not_applicable)
                    + ", non-pairable " + std::to_string(th2.non_pairable) + "; th2i evaluated "
                    + std::to_string(th2i.pass + th2i.fail + th2i.borderline) + " (fail " + std::to_string(th2i.fail)
                    + "); counters " + (sums ? "consistent" : "INCONSISTENT") + "; " + std::to_string(reverified)
                    + "/" + std::to_string(loaded.size()) + " records re-verified; max/min AB increasing"
                    + fractions};
}

// 7. Power-form conformance fraction, with the nonconforming witness p = 4161, d = 56, s = 90.
Result conformance(const Campaign& c)
{
    std::string fractions;
    Natural witnesses = 0;
    for (std::size_t i = 0; i < kAllCases.size(); ++i) {
        const auto& fc = c.report.conformance[i];
        witnesses += fc.witnesses;
        fractions += " " + std::string(kAllCases[i].id()) + ":" + fmt("%.4f", fc.conforming_fraction());
    }
    bool derived = false;
    for (const auto& w : dsearch_representations(4161, kSevenThree))
        derived = derived || (w.d == 56 && w.s == 90 && std::holds_alternative<NonConforming>(w.form)
                              && !std::get<NonConforming>(w.form).zero_case);
    bool reported = false;
    for (const auto& w : c.report.conformance[0].nonconforming_examples)
        reported = reported || (w.rep.p() == 4161 && w.d == 56 && w.s == 90);
    const bool ok = witnesses > 0 && derived && reported;
    return {ok, std::to_string(witnesses) + " witnesses, conforming fraction" + fractions
                    + "; p = 4161 d = 56 s = 90 " + (derived && reported ? "nonconforming and reported" : "MISSING")};
}

// 8. (1 -> 1) frequency over the first 1e6 primes above 5 in [0.10, 0.22], within 30 s.
Result transitions()
{
    const auto t0 = Clock::now();
    const auto m = transition_matrix(1'000'000);
    const double elapsed = seconds_since(t0);
    const double f = m.frequency(0, 0);
    const bool cross = m == reference::transition_matrix_naive(1'000'000);
    const bool ok = f >= 0.10 && f <= 0.22 && elapsed <= 30.0 && cross && m.total == 999'999;
    return {ok, "frequency(1 -> 1) = " + fmt("%.6f", f) + " in [0.10, 0.22], " + fmt("%.2f s", elapsed)
                    + " (limit 30 s), naive recount " + (cross ? "agrees" : "DISAGREES")};
}

// 9. Byte-identical sweep output with 1, 4 and 8 workers on [1, 1e5].
Result determinism()
{
    std::vector<std::string> streams, reports;
    for (int workers : {1, 4, 8}) {
        SweepConfig cfg;
        cfg.lo = 1;
        cfg.hi = 100'000;
        cfg.workers = workers;
        cfg.records = RecordFilter::All;
        const auto path = scratch("det_" + std::to_string(workers) + ".jsonl");
        cfg.output_path = path.string();
        auto r = sweep(cfg);
        r.elapsed_seconds = 0;
        reports.push_back(to_json(r).dump());
        streams.push_back(slurp(path));
        std::filesystem::remove(path);
    }
    const bool ok = !streams[0].empty() && streams[0] == streams[1] && streams[0] == streams[2]
                    && reports[0] == reports[1] && reports[0] == reports[2];
    return {ok, std::to_string(streams[0].size()) + " bytes of records per run; streams and reports "
                    + (ok ? "identical" : "DIFFER")};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Result()>& fn) {
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << id << " " << name << ": " << r.detail
                  << std::endl;
        if (!r.pass)
            ++failures;
    };

    report(1, "method equivalence", method_equivalence);

    Campaign campaign;
    bool have_campaign = false;
    try {
        campaign = run_campaign();
        have_campaign = true;
        std::cout << "      sweep to 1e7: " << campaign.report.evaluated_p << " values in "
                  << fmt("%.1f s", campaign.elapsed) << std::endl;
    } catch (const std::exception& e) {
        std::cout << "      sweep to 1e7 failed: " << e.what() << std::endl;
    }
    auto with_campaign = [&](Result (*fn)(const Campaign&)) {
        return [&, fn]() -> Result {
            if (!have_campaign)
                return {false, "campaign did not run"};
            return fn(campaign);
        };
    };

    report(2, "AB bounds (th1)", with_campaign(ab_bound));
    report(3, "digit bounds (obs2)", with_campaign(digit_bound));
    report(4, "exp bound A-branch (th4_a)", with_campaign(exp_bound));
    report(5, "A/X0 bounds (th3)", ratio_bound);
    report(6, "growth audit (th2, th2i)", with_campaign(growth_audit));
    report(7, "form conformance", with_campaign(conformance));
    report(8, "digit transitions", transitions);
    report(9, "determinism", determinism);
    std::filesystem::remove(campaign.findings_path);

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
