#include "dcf/factorizer.hpp"
#include "dcf/records.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>
#include <fstream>
#include <sstream>

using namespace dcf;

namespace {

/// Mixed records from real checks: every claim, gated and applicable, exact and not.
std::vector<BoundCheck> fixture(std::size_t count)
{
    std::vector<BoundCheck> out;
    for (Natural p = 21; out.size() < count; p += 10) {
        for (ResidueCase c : kAllCases) {
            for (const auto& rep : oracle_representations(p, c)) {
                out.push_back(check_th1(rep));
                out.push_back(check_obs2(rep));
                out.push_back(check_th2_interior(rep));
                out.push_back(check_cor_range(witness_for(rep)));
                if (c.tag() == CaseTag::SevenThree) {
                    auto [a, b] = check_th4(rep);
                    out.push_back(a);
                    out.push_back(b);
                }
                for (const auto& next : oracle_representations(p + 10, c))
                    out.push_back(check_th2(Th2Pair(rep, next), Th2Options{(p / 10) % 2 == 0, (p / 10) % 3 == 0}));
            }
        }
    }
    out.resize(count);
    return out;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("dcf_test_" + name);
}

} // namespace

TEST_CASE("empty record list round-trips")
{
    std::stringstream ss;
    write_jsonl(ss, {});
    CHECK(ss.str().empty());
    CHECK(read_jsonl(ss).empty());
}

TEST_CASE("one record round-trips bit-identically")
{
    const auto rec = check_th1(Representation(1311, kSevenThree, 5, 2));
    const std::string line = to_jsonl_line(rec);
    CHECK(line
          == R"({"claim":"th1","p":1311,"case":"73","applicable":false,"gate":"B = 3 < 8","verdict":"na",)"
             R"("lhs":"1311/100","mid":"18","rhs":"158631/10000","exact":true,"witness":{"a":5,"b":2}})");
    std::stringstream ss;
    write_jsonl(ss, {rec});
    const auto back = read_jsonl(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == rec);
    CHECK(to_jsonl_line(back[0]) == line);
}

TEST_CASE("ten thousand mixed records round-trip in order")
{
    const auto records = fixture(10'000);
    std::set<std::string> claims;
    for (const auto& r : records)
        claims.insert(std::string(to_string(r.claim)));
    CHECK(claims.size() == 7); // th3 needs a prime instance, covered elsewhere

    const auto path = temp_file("roundtrip.jsonl");
    write_jsonl(path, records);
    const auto back = read_jsonl(path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        REQUIRE(to_jsonl_line(back[i]) == to_jsonl_line(records[i]));
    std::filesystem::remove(path);
}

TEST_CASE("large integers are strings")
{
    CHECK(json_natural(Natural{1} << 53).is_number());
    CHECK(json_natural((Natural{1} << 53) + 1).is_string());
    CHECK(json_natural((Natural{1} << 53) + 1).get<std::string>() == "9007199254740993");

    BoundCheck rec;
    rec.claim = ClaimId::Obs2;
    rec.p = 18'446'744'073'709'551'611ull;
    rec.rcase = kOneOne;
    rec.applicable = true;
    rec.verdict = {Outcome::Pass, std::nullopt};
    rec.lhs = {"0", true};
    rec.mid = {"18446744073709551611", true};
    rec.rhs = {"1", true};
    rec.witness = CheckWitness{};
    rec.witness->a = Natural{1} << 60;
    const auto line = to_jsonl_line(rec);
    CHECK(line.find(R"("p":"18446744073709551611")") != std::string::npos);
    std::stringstream ss(line + "\n");
    const auto back = read_jsonl(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0].p == rec.p);
    CHECK(back[0].witness->a == Natural{1} << 60);
}

TEST_CASE("malformed input names the line")
{
    const std::string good = to_jsonl_line(check_obs2(Representation(21, kSevenThree, 0, 0)));
    auto line_of_error = [](const std::string& text) -> std::size_t {
        std::stringstream ss(text);
        try {
            read_jsonl(ss);
        } catch (const RecordParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of_error(good + "\n" + good + "\n{not json\n") == 3);
    CHECK(line_of_error(good + "\n" + R"({"claim":"th9"})" + "\n") == 2);
    std::string wrong_case = good;
    wrong_case.replace(wrong_case.find(R"("case":"73")"), 11, R"("case":"42")");
    CHECK(line_of_error(wrong_case + "\n") == 1);
    std::string wrong_verdict = good;
    wrong_verdict.replace(wrong_verdict.find(R"("verdict":"pass")"), 16, R"("verdict":"meh")");
    CHECK(line_of_error(good + "\n" + wrong_verdict) == 2);
    CHECK(line_of_error(good + "\n\n" + good + "\n") == 0); // blank lines are skipped
    CHECK_THROWS_AS(read_jsonl(std::filesystem::path("/nonexistent/dir/x.jsonl")), std::runtime_error);
}

TEST_CASE("loaded records re-verify")
{
    const auto records = fixture(2'000);
    std::stringstream ss;
    write_jsonl(ss, records);
    for (const auto& rec : read_jsonl(ss))
        REQUIRE(to_jsonl_line(reverify(rec)) == to_jsonl_line(rec));
}

TEST_CASE("csv follows the JSONL key order")
{
    CHECK(csv_header() == "claim,p,case,applicable,gate,verdict,lhs,mid,rhs,exact,witness");
    const auto rec = check_th1(Representation(1311, kSevenThree, 5, 2));
    CHECK(to_csv_line(rec) == R"(th1,1311,73,false,B = 3 < 8,na,1311/100,18,158631/10000,true,"{""a"":5,""b"":2}")");
}
