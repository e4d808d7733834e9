#include "dcf/harness.hpp"
#include "dcf/records.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dcf;

namespace {

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string report_text(SweepReport r)
{
    r.elapsed_seconds = 0;
    return to_json(r).dump();
}

struct Tally {
    Natural pass = 0;
    Natural fail = 0;
    Natural not_applicable = 0;
};

/// Th1 and Obs2 over every (a, b) with product <= hi, by direct integer arithmetic.
std::pair<Tally, Tally> brute_force_th1_obs2(Natural hi)
{
    Tally th1, obs2;
    for (ResidueCase c : kAllCases) {
        const Natural min_a = c.tag() == CaseTag::SevenThree ? 4 : c.tag() == CaseTag::NineNine ? 2 : 10;
        const Natural min_b = c.tag() == CaseTag::SevenThree ? 8 : min_a;
        for (Natural a = 0; 10 * a + c.m() <= hi; ++a) {
            for (Natural b = c.symmetric() ? a : 0;; ++b) {
                const Natural p = (10 * a + c.m()) * (10 * b + c.n());
                if (p > hi)
                    break;
                const Natural A = a + 1, B = b + 1;
                if (A < min_a || B < min_b)
                    ++th1.not_applicable;
                else if (100 * A * B >= p && 10'000 * A * B <= 121 * p)
                    ++th1.pass;
                else
                    ++th1.fail;
                if (100 * a * b <= p && p <= 100 * A * B)
                    ++obs2.pass;
                else
                    ++obs2.fail;
            }
        }
    }
    return {th1, obs2};
}

} // namespace

TEST_CASE("smallest instance")
{
    SweepConfig cfg;
    cfg.lo = 21;
    cfg.hi = 21;
    cfg.cases = {kSevenThree};
    const auto r = sweep(cfg);
    CHECK(r.evaluated_p == 1);
    CHECK(r.counters_for(ClaimId::Th1).not_applicable == 1);
    CHECK(r.counters_for(ClaimId::Th1).total() == 1);
    CHECK(r.counters_for(ClaimId::Obs2).pass == 1);
    CHECK(r.method_equivalence.compared == 1);
    CHECK(r.method_equivalence.agree == 1);
    CHECK(r.consistent());
}

TEST_CASE("th1 and obs2 to 1e5 match a brute-force enumeration")
{
    SweepConfig cfg;
    cfg.lo = 1;
    cfg.hi = 100'000;
    cfg.claims = {ClaimId::Th1, ClaimId::Obs2};
    const auto r = sweep(cfg);
    const auto [th1, obs2] = brute_force_th1_obs2(cfg.hi);
    CHECK(r.counters_for(ClaimId::Th1).pass == th1.pass);
    CHECK(r.counters_for(ClaimId::Th1).fail == th1.fail);
    CHECK(r.counters_for(ClaimId::Th1).not_applicable == th1.not_applicable);
    CHECK(r.counters_for(ClaimId::Obs2).pass == obs2.pass);
    CHECK(r.counters_for(ClaimId::Obs2).fail == 0);
    CHECK(th1.fail == 0);
    CHECK(r.counterexamples.empty());
    CHECK(r.method_equivalence.disagree.empty());
    CHECK(r.consistent());
}

TEST_CASE("sweep validates its config")
{
    SweepConfig cfg;
    cfg.lo = 100;
    cfg.hi = 50;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
    cfg.lo = 1;
    cfg.hi = 2000;
    cfg.max_limit = 1000;
    CHECK_THROWS_AS(sweep(cfg), ResourceError);
    cfg.max_limit = 10'000;
    cfg.workers = 0;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
    cfg.workers = 1;
    cfg.output_path = "/nonexistent/dir/out.jsonl";
    CHECK_THROWS_AS(sweep(cfg), std::runtime_error);
}

TEST_CASE("literal Th2 pairing is mostly non-pairable")
{
    SweepConfig cfg;
    cfg.hi = 200'000;
    cfg.claims = {ClaimId::Th2Final};
    cfg.cross_check = false;
    cfg.records = RecordFilter::All;
    const auto r = sweep(cfg);
    const auto& c = r.counters_for(ClaimId::Th2Final);
    CHECK(c.non_pairable > c.pass + c.fail + c.borderline);
    CHECK(r.consistent());

    cfg.th2_pairing = Th2Pairing::ConsecutiveRepresentable;
    const auto consecutive = sweep(cfg);
    CHECK(consecutive.counters_for(ClaimId::Th2Final).non_pairable
          < c.non_pairable);
    CHECK(consecutive.consistent());
}

TEST_CASE("sweep output is independent of the worker count")
{
    SweepConfig cfg;
    cfg.lo = 1;
    cfg.hi = 60'000;
    cfg.chunk_size = 3'000;
    cfg.records = RecordFilter::All;
    std::vector<std::string> streams, reports;
    for (int workers : {1, 3, 8}) {
        cfg.workers = workers;
        cfg.output_path = (std::filesystem::temp_directory_path() / ("dcf_det_" + std::to_string(workers))).string();
        reports.push_back(report_text(sweep(cfg)));
        streams.push_back(slurp(cfg.output_path));
        std::filesystem::remove(cfg.output_path);
    }
    CHECK(!streams[0].empty());
    CHECK(streams[0] == streams[1]);
    CHECK(streams[0] == streams[2]);
    CHECK(reports[0] == reports[1]);
    CHECK(reports[0] == reports[2]);
}

TEST_CASE("findings stream holds exactly the counterexamples and re-verifies")
{
    SweepConfig cfg;
    cfg.hi = 300'000;
    cfg.claims = {ClaimId::Th2Final, ClaimId::Th2Interior};
    cfg.cross_check = false;
    cfg.output_path = (std::filesystem::temp_directory_path() / "dcf_findings.jsonl").string();
    const auto r = sweep(cfg);
    const auto loaded = read_jsonl(std::filesystem::path(cfg.output_path));
    std::filesystem::remove(cfg.output_path);
    REQUIRE(loaded.size() == r.counters_for(ClaimId::Th2Final).fail + r.counters_for(ClaimId::Th2Interior).fail);
    REQUIRE(!loaded.empty());
    for (const auto& rec : loaded) {
        REQUIRE(rec.verdict.outcome == Outcome::Fail);
        REQUIRE(to_jsonl_line(reverify(rec)) == to_jsonl_line(rec));
    }
}

TEST_CASE("csv output")
{
    SweepConfig cfg;
    cfg.hi = 2'000;
    cfg.cases = {kSevenThree};
    cfg.claims = {ClaimId::Th1};
    cfg.records = RecordFilter::All;
    cfg.format = OutputFormat::Csv;
    cfg.output_path = (std::filesystem::temp_directory_path() / "dcf_out.csv").string();
    const auto r = sweep(cfg);
    std::istringstream in(slurp(cfg.output_path));
    std::filesystem::remove(cfg.output_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == csv_header());
    Natural rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == r.counters_for(ClaimId::Th1).total());
}

TEST_CASE("form conformance includes the 4161 witness")
{
    SweepConfig cfg;
    cfg.lo = 4161;
    cfg.hi = 4161;
    cfg.cases = {kSevenThree};
    const auto r = sweep(cfg);
    const auto& fc = r.conformance[0];
    CHECK(fc.nonconforming >= 1);
    bool found = false;
    for (const auto& w : fc.nonconforming_examples)
        found = found || (w.rep.p() == 4161 && w.d == 56 && w.s == 90);
    CHECK(found);
}

TEST_CASE("monotonicity summaries")
{
    const auto single = summarize_monotonicity(kOneOne, {ProductRange{121, 4, 4}});
    CHECK(single.max_ab.pairs == 0);
    CHECK(single.max_ab.fraction() == 1.0);

    const std::vector<ProductRange> data{{11, 1, 2}, {21, 3, 5}, {31, 2, 4}, {41, 6, 6}};
    const auto s = summarize_monotonicity(kOneOne, data);
    CHECK(s.representable == 4);
    CHECK(s.max_ab.pairs == 3);
    CHECK(s.max_ab.increasing == 2);
    CHECK(s.max_ab.violations == std::vector<std::pair<Natural, Natural>>{{21, 31}});
    CHECK(s.min_ab.increasing == 2);
    CHECK(s.all_reps.increasing == 2); // 21 -> 31 fails: next min 2 is below current max 5
}

TEST_CASE("AB is not monotone in p")
{
    const auto r = monotonicity_study(kOneOne, 100'000, 2);
    CHECK(r.min_ab.fraction() < 1.0);
    CHECK_FALSE(r.min_ab.violations.empty());
    CHECK(r.all_reps.fraction() < 1.0);
    CHECK_THROWS_AS(monotonicity_study(kOneOne, 99), std::invalid_argument);

    const auto small = monotonicity_study(kSevenThree, 100);
    CHECK(small.representable >= 1);
    CHECK(small.max_ab.fraction() <= 1.0);
}
