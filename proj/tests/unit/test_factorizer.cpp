#include "dcf/factorizer.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace dcf;

namespace {

using Pairs = std::vector<std::pair<Natural, Natural>>;

Pairs pairs(const std::vector<Representation>& reps)
{
    Pairs out;
    for (const auto& r : reps)
        out.emplace_back(r.a(), r.b());
    return out;
}

/// Every (a, b) with (10a + m)(10b + n) = p by exhausting a, independent of the library.
Pairs brute_force(Natural p, ResidueCase c)
{
    Pairs out;
    for (Natural a = 0; 10 * a + c.m() <= p; ++a) {
        const Natural f = 10 * a + c.m();
        if (p % f != 0)
            continue;
        const Natural g = p / f;
        if (g % 10 != c.n())
            continue;
        const Natural b = g / 10;
        if (c.symmetric() && a > b)
            continue;
        out.emplace_back(a, b);
    }
    return out;
}

bool same_witnesses(const std::vector<DSearchWitness>& x, const std::vector<DSearchWitness>& y)
{
    if (x.size() != y.size())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].d != y[i].d || x[i].s != y[i].s || !(x[i].rep == y[i].rep) || !(x[i].form == y[i].form))
            return false;
    return true;
}

} // namespace

TEST_CASE("Representation validates its identity")
{
    const Representation r(2701, kSevenThree, 3, 7);
    CHECK(r.A() == 4);
    CHECK(r.B() == 8);
    CHECK(r.AB() == 32);
    CHECK(r.first_factor() == 37);
    CHECK(r.second_factor() == 73);
    CHECK_THROWS_AS(Representation(2701, kSevenThree, 7, 3), std::invalid_argument);
    CHECK_THROWS_AS(Representation(27, kSevenThree, 0, 0), std::invalid_argument);
}

TEST_CASE("oracle examples")
{
    CHECK(pairs(oracle_representations(21, kSevenThree)) == Pairs{{0, 0}});
    CHECK(pairs(oracle_representations(2701, kSevenThree)) == Pairs{{3, 7}});
    CHECK(pairs(oracle_representations(1001, kSevenThree)) == Pairs{{0, 14}, {7, 1}});
    CHECK(pairs(oracle_representations(361, kNineNine)) == Pairs{{1, 1}});
    CHECK(pairs(oracle_representations(8281, kOneOne)) == Pairs{{0, 828}, {9, 9}});
    CHECK(oracle_representations(2711, kSevenThree).empty());
    CHECK_THROWS_AS(oracle_representations(2700, kSevenThree), std::invalid_argument);
}

TEST_CASE("oracle matches brute force and the naive reference")
{
    for (Natural p = 1; p <= 30'001; p += 10)
        for (ResidueCase c : kAllCases) {
            const auto expected = brute_force(p, c);
            REQUIRE(pairs(oracle_representations(p, c)) == expected);
            if (p <= 5001)
                REQUIRE(pairs(reference::oracle_naive(p, c)) == expected);
        }
}

TEST_CASE("d_bounds examples")
{
    CHECK(d_bounds(2701, kSevenThree, RangeMode::Printed) == DInterval{42, 48});
    CHECK(d_bounds(2701, kSevenThree, RangeMode::Sound) == DInterval{42, 625});
    // The printed interval misses the true d = 41 of (5, 2) outside its region.
    const auto printed_1311 = d_bounds(1311, kSevenThree, RangeMode::Printed);
    CHECK(printed_1311.hi == 19);
    CHECK_FALSE(printed_1311.contains(41));
    CHECK(d_bounds(1311, kSevenThree, RangeMode::Sound).contains(41));
    CHECK(d_bounds(361, kNineNine, RangeMode::Sound).contains(2));
}

TEST_CASE("sound range contains every representation's d")
{
    for (Natural p = 1; p <= 50'001; p += 10)
        for (ResidueCase c : kAllCases) {
            const auto bounds = d_bounds(p, c, RangeMode::Sound);
            for (const auto& r : oracle_representations(p, c))
                REQUIRE(bounds.contains(d_parameter(r)));
        }
}

TEST_CASE("d-search examples")
{
    const auto w2701 = dsearch_representations(2701, kSevenThree);
    REQUIRE(w2701.size() == 1);
    CHECK(w2701[0].d == 42);
    CHECK(w2701[0].s == 20);
    CHECK(w2701[0].rep == Representation(2701, kSevenThree, 3, 7));
    CHECK(discriminant_root(2701, kSevenThree, 42) == 20);

    // 4161 = 57 * 73 = 1387 * 3; the first has d = 56.
    const auto w4161 = dsearch_representations(4161, kSevenThree);
    REQUIRE(w4161.size() == 2);
    CHECK(w4161[0].d == 56);
    CHECK(w4161[0].s == 90);
    CHECK(w4161[0].rep == Representation(4161, kSevenThree, 5, 7));
    CHECK(describe(w4161[0].form) == "nonconforming");
    CHECK(w4161[1].rep == Representation(4161, kSevenThree, 138, 0));

    const auto w361 = dsearch_representations(361, kNineNine);
    REQUIRE(w361.size() == 1);
    CHECK(w361[0].d == 2);
    CHECK(w361[0].s == 0);
    CHECK(w361[0].rep == Representation(361, kNineNine, 1, 1));
    CHECK(describe(w361[0].form) == "zero");
}

TEST_CASE("printed range d-search can miss representations")
{
    const auto printed = representations_of(dsearch_representations(1311, kSevenThree, RangeMode::Printed));
    const auto sound = representations_of(dsearch_representations(1311, kSevenThree, RangeMode::Sound));
    CHECK(printed.size() < sound.size());
    CHECK(sound == oracle_representations(1311, kSevenThree));
}

TEST_CASE("form_classify examples")
{
    CHECK(form_classify(20, Parity::Even) == Form{PowerForm{1, 2, std::nullopt}});
    CHECK(std::holds_alternative<NonConforming>(form_classify(90, Parity::Even)));
    CHECK(form_classify(55, Parity::Odd) == Form{PowerForm{1, 1, 11}});
    CHECK(form_classify(0, Parity::Even) == Form{NonConforming{true}});
    CHECK(describe(form_classify(20, Parity::Even)) == "5^1*2^2");
    CHECK(describe(form_classify(55, Parity::Odd)) == "5^1*11^1");
    // 5 * 9^2 = 5 * 3^4: the largest exponent wins.
    CHECK(form_classify(405, Parity::Odd) == Form{PowerForm{1, 4, 3}});
    CHECK(std::holds_alternative<NonConforming>(form_classify(21, Parity::Odd)));
    CHECK(std::holds_alternative<NonConforming>(form_classify(5 * 3 * 7, Parity::Odd)) == false);
}

TEST_CASE("witness for p = 3431 has an odd d and tau = 11")
{
    const auto w = witness_for(Representation(3431, kSevenThree, 4, 7));
    CHECK(w.d == 49);
    CHECK(w.s == 55);
    CHECK(describe(w.form) == "5^1*11^1");
}

TEST_CASE("filtered d-search matches the plain scan")
{
    for (Natural p = 1; p <= 20'001; p += 10)
        for (ResidueCase c : kAllCases)
            for (RangeMode mode : {RangeMode::Sound, RangeMode::Printed})
                REQUIRE(same_witnesses(dsearch_representations(p, c, mode), reference::dsearch_plain(p, c, mode)));
}

TEST_CASE("d-search finds exactly the oracle set")
{
    for (Natural p = 1; p <= 60'001; p += 10)
        for (ResidueCase c : kAllCases)
            REQUIRE(representations_of(dsearch_representations(p, c)) == oracle_representations(p, c));
}

TEST_CASE("witness_for reproduces d-search witnesses")
{
    for (Natural p = 1; p <= 10'001; p += 10)
        for (ResidueCase c : kAllCases)
            for (const auto& w : dsearch_representations(p, c)) {
                const auto v = witness_for(w.rep);
                REQUIRE(v.d == w.d);
                REQUIRE(v.s == w.s);
                REQUIRE(v.form == w.form);
            }
}

TEST_CASE("lambda examples")
{
    const auto w = lambda_representations(2701);
    REQUIRE(w.size() == 2);
    CHECK(w[0].lambda == 259);
    CHECK(w[0].form_index == 1);
    CHECK(w[1].lambda == 219);
    CHECK(w[1].form_index == 2);
    CHECK(w[0].rep == Representation(2701, kSevenThree, 3, 7));

    CHECK(lambda_representations(21).size() == 2);
    CHECK(lambda_representations(21, LambdaOptions{false}).empty());

    bool found = false;
    for (const auto& x : lambda_representations(1001))
        if (x.form_index == 1 && x.lambda == 77 && x.rep == Representation(1001, kSevenThree, 7, 1))
            found = true;
    CHECK(found);
}

TEST_CASE("lambda inversion matches the lambda scan")
{
    for (Natural p = 1; p <= 20'001; p += 10)
        for (bool zero : {true, false}) {
            const auto fast = lambda_representations(p, LambdaOptions{zero});
            const auto scan = reference::lambda_scan(p, LambdaOptions{zero});
            REQUIRE(fast.size() == scan.size());
            for (std::size_t i = 0; i < fast.size(); ++i) {
                REQUIRE(fast[i].lambda == scan[i].lambda);
                REQUIRE(fast[i].form_index == scan[i].form_index);
                REQUIRE(fast[i].rep == scan[i].rep);
            }
            if (zero)
                REQUIRE(representations_of(fast) == oracle_representations(p, kSevenThree));
        }
}

TEST_CASE("large p stays exact")
{
    // 10^9-scale semiprime (10a+7)(10b+3).
    const Natural f = 99'997; // ends in 7
    const Natural g = 100'003; // ends in 3
    const Natural p = f * g;
    REQUIRE(p % 10 == 1);
    const auto oracle = oracle_representations(p, kSevenThree);
    CHECK(std::find(oracle.begin(), oracle.end(), Representation(p, kSevenThree, 9'999, 10'000)) != oracle.end());
    CHECK(representations_of(lambda_representations(p)) == oracle);
    const Natural big = Natural{4'294'967'291} * 3; // needs the 128-bit lambda path
    if (big % 10 == 1)
        CHECK(representations_of(lambda_representations(big)) == oracle_representations(big, kSevenThree));
}
