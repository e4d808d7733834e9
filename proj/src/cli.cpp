#include "dcf/cli.hpp"
#include "dcf/checks.hpp"
#include "dcf/factorizer.hpp"
#include "dcf/harness.hpp"
#include "dcf/records.hpp"
#include "dcf/sieve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dcf::cli {

using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<ResidueCase> parse_cases(const std::string& s)
{
    if (s == "all")
        return {kAllCases.begin(), kAllCases.end()};
    if (auto c = ResidueCase::parse(s))
        return {*c};
    throw UsageError("unknown case '" + s + "' (expected 73, 99, 11 or all)");
}

/// CLI claim names: th1 obs2 th2 th2i th3 th4 cor, or a record claim id.
std::vector<ClaimId> parse_claims(const std::string& list)
{
    std::vector<ClaimId> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all")
            out.insert(out.end(), kAllClaims.begin(), kAllClaims.end());
        else if (item == "th3")
            out.insert(out.end(), {ClaimId::Th3Lower, ClaimId::Th3Ratio});
        else if (item == "th4")
            out.insert(out.end(), {ClaimId::Th4A, ClaimId::Th4B});
        else if (auto id = parse_claim(item))
            out.push_back(*id);
        else
            throw UsageError("unknown claim '" + item + "'");
    }
    if (out.empty())
        throw UsageError("no claims selected");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RangeMode parse_range(const std::string& s)
{
    if (s == "paper")
        return RangeMode::Printed;
    if (s == "sound")
        return RangeMode::Sound;
    throw UsageError("unknown d-search range '" + s + "'");
}

Th2Pairing parse_pairing(const std::string& s)
{
    if (s == "literal")
        return Th2Pairing::Literal10;
    if (s == "consecutive")
        return Th2Pairing::ConsecutiveRepresentable;
    throw UsageError("unknown th2 pairing '" + s + "'");
}

void check_p(Natural p)
{
    const Natural max = configured_max_limit();
    if (p > max)
        throw UsageError("p = " + std::to_string(p) + " exceeds the configured maximum " + std::to_string(max));
    if (p % 10 != 1)
        throw UsageError("p = " + std::to_string(p) + " does not end in 1");
}

bool has_findings(const std::vector<BoundCheck>& records)
{
    return std::any_of(records.begin(), records.end(), [](const BoundCheck& r) {
        return r.verdict.outcome == Outcome::Fail || r.verdict.outcome == Outcome::Borderline;
    });
}

ordered_json rep_pair(const Representation& r)
{
    return ordered_json::array({json_natural(r.a()), json_natural(r.b())});
}

// factor

struct FactorArgs {
    Natural p = 0;
    std::string rcase = "all";
    std::string method = "all";
    std::string range = "sound";
    std::string format = "json";
};

int cmd_factor(const FactorArgs& a, std::ostream& out, std::ostream& err)
{
    check_p(a.p);
    if (a.method != "oracle" && a.method != "dsearch" && a.method != "lambda" && a.method != "all")
        throw UsageError("unknown method '" + a.method + "'");
    const bool want_oracle = a.method == "oracle" || a.method == "all";
    const bool want_dsearch = a.method == "dsearch" || a.method == "all";
    const bool want_lambda = a.method == "lambda" || a.method == "all";
    const RangeMode mode = parse_range(a.range);

    ordered_json cases = ordered_json::array();
    bool all_agree = true;
    std::vector<std::string> csv_rows;
    for (ResidueCase c : parse_cases(a.rcase)) {
        std::vector<std::vector<Representation>> sets;
        ordered_json entry{{"case", std::string(c.id())}, {"oracle", nullptr}, {"dsearch", nullptr}, {"lambda", nullptr}};
        if (want_oracle) {
            const auto reps = oracle_representations(a.p, c);
            ordered_json arr = ordered_json::array();
            for (const auto& r : reps) {
                arr.push_back(rep_pair(r));
                csv_rows.push_back(std::string(c.id()) + ",oracle," + std::to_string(r.a()) + ","
                                   + std::to_string(r.b()) + ",,,,");
            }
            entry["oracle"] = arr;
            sets.push_back(reps);
        }
        if (want_dsearch) {
            const auto ws = dsearch_representations(a.p, c, mode);
            ordered_json arr = ordered_json::array();
            for (const auto& w : ws) {
                arr.push_back(to_json(w));
                csv_rows.push_back(std::string(c.id()) + ",dsearch," + std::to_string(w.rep.a()) + ","
                                   + std::to_string(w.rep.b()) + "," + std::to_string(w.d) + ","
                                   + std::to_string(w.s) + "," + describe(w.form) + ",");
            }
            entry["dsearch"] = arr;
            sets.push_back(representations_of(ws));
        }
        if (want_lambda && c.tag() == CaseTag::SevenThree) {
            const auto ws = lambda_representations(a.p);
            ordered_json arr = ordered_json::array();
            for (const auto& w : ws) {
                arr.push_back(ordered_json{{"lambda", json_natural(w.lambda)},
                                           {"form", w.form_index},
                                           {"a", json_natural(w.rep.a())},
                                           {"b", json_natural(w.rep.b())}});
                csv_rows.push_back(std::string(c.id()) + ",lambda," + std::to_string(w.rep.a()) + ","
                                   + std::to_string(w.rep.b()) + ",,,," + std::to_string(w.lambda));
            }
            entry["lambda"] = arr;
            sets.push_back(representations_of(ws));
        }
        const bool agree = std::all_of(sets.begin(), sets.end(), [&](const auto& s) { return s == sets.front(); });
        entry["agreement"] = agree;
        all_agree = all_agree && agree;
        cases.push_back(entry);
    }

    if (a.format == "csv") {
        out << "case,method,a,b,d,s,form,lambda\n";
        for (const auto& row : csv_rows)
            out << row << '\n';
    } else {
        ordered_json doc{{"command", "factor"},
                         {"p", json_natural(a.p)},
                         {"method", a.method},
                         {"dsearch_range", a.range},
                         {"cases", cases},
                         {"agreement", all_agree}};
        out << doc.dump(2) << '\n';
    }
    err << "factor " << a.p << ": methods " << (all_agree ? "agree" : "DISAGREE") << '\n';
    return all_agree ? kExitOk : kExitFindings;
}

// verify

struct VerifyArgs {
    Natural p = 0;
    std::string claim;
    std::string rcase = "all";
    std::string pairing = "literal";
    std::string th2_gate = "both";
    bool actual_step = false;
    std::string format = "json";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    check_p(a.p);
    const auto claims = parse_claims(a.claim);
    const Th2Pairing pairing = parse_pairing(a.pairing);
    if (a.th2_gate != "both" && a.th2_gate != "p")
        throw UsageError("unknown th2 gate '" + a.th2_gate + "'");
    const Th2Options th2_opts{a.th2_gate == "both", a.actual_step};
    auto wants = [&](ClaimId id) { return std::find(claims.begin(), claims.end(), id) != claims.end(); };

    std::vector<BoundCheck> records;
    ordered_json non_pairable = ordered_json::array();
    ordered_json notes = ordered_json::array();
    for (ResidueCase c : parse_cases(a.rcase)) {
        const auto reps = oracle_representations(a.p, c);
        for (const auto& rep : reps) {
            if (wants(ClaimId::Th1))
                records.push_back(check_th1(rep));
            if (wants(ClaimId::Obs2))
                records.push_back(check_obs2(rep));
            if (wants(ClaimId::Th2Interior))
                records.push_back(check_th2_interior(rep));
            if (c.tag() == CaseTag::SevenThree) {
                auto [ta, tb] = check_th4(rep);
                if (wants(ClaimId::Th4A))
                    records.push_back(ta);
                if (wants(ClaimId::Th4B))
                    records.push_back(tb);
            }
            if (wants(ClaimId::CorRange))
                records.push_back(check_cor_range(witness_for(rep)));
        }
        if (wants(ClaimId::Th2Final) && !reps.empty()) {
            Natural next = a.p + 10;
            if (pairing == Th2Pairing::ConsecutiveRepresentable)
                while (oracle_representations(next, c).empty())
                    next += 10;
            const auto there = oracle_representations(next, c);
            if (there.empty())
                non_pairable.push_back(std::string(c.id()));
            for (const auto& rp : reps)
                for (const auto& rn : there)
                    records.push_back(check_th2(Th2Pair(rp, rn), th2_opts));
        }
        if (c.tag() == CaseTag::SevenThree && (wants(ClaimId::Th3Lower) || wants(ClaimId::Th3Ratio))) {
            if (!is_prime(a.p)) {
                notes.push_back("th3 needs p prime; " + std::to_string(a.p) + " is composite");
            } else {
                const auto there = oracle_representations(a.p + 10, kSevenThree);
                if (there.empty())
                    non_pairable.push_back(std::string(c.id()));
                for (const auto& rn : there) {
                    if (Wide{rn.b()} * 70 + 21 >= a.p) {
                        notes.push_back("representation (" + std::to_string(rn.a()) + ", " + std::to_string(rn.b())
                                        + ") of p + 10 gives x0 <= 0");
                        continue;
                    }
                    auto [lo, ratio] = check_th3(Th3Instance(a.p, rn.a(), rn.b()));
                    if (wants(ClaimId::Th3Lower))
                        records.push_back(lo);
                    if (wants(ClaimId::Th3Ratio))
                        records.push_back(ratio);
                }
            }
        }
    }

    if (a.format == "csv") {
        out << csv_header() << '\n';
        for (const auto& r : records)
            out << to_csv_line(r) << '\n';
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& r : records)
            arr.push_back(to_json(r));
        ordered_json doc{{"command", "verify"},
                         {"p", json_natural(a.p)},
                         {"claim", a.claim},
                         {"records", arr},
                         {"non_pairable", non_pairable},
                         {"notes", notes}};
        out << doc.dump(2) << '\n';
    }
    const bool findings = has_findings(records);
    err << "verify " << a.p << " " << a.claim << ": " << records.size() << " record(s)"
        << (findings ? ", findings present" : "") << '\n';
    return findings ? kExitFindings : kExitOk;
}

// sweep

struct SweepArgs {
    Natural from = 1;
    Natural to = 0;
    std::string rcase = "all";
    std::string claims = "all";
    int jobs = 1;
    std::string out;
    std::string format = "json";
    std::string range = "sound";
    std::string pairing = "literal";
    std::string th2_gate = "both";
    bool actual_step = false;
    std::string records = "findings";
    bool no_cross_check = false;
    Natural cross_check_limit = 1'000'000;
    std::size_t list_cap = 50;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err)
{
    SweepConfig cfg;
    cfg.lo = a.from;
    cfg.hi = a.to;
    cfg.cases = parse_cases(a.rcase);
    cfg.claims = parse_claims(a.claims);
    cfg.workers = a.jobs;
    cfg.output_path = a.out;
    if (a.format != "json" && a.format != "csv")
        throw UsageError("unknown format '" + a.format + "'");
    cfg.format = a.format == "csv" ? OutputFormat::Csv : OutputFormat::Jsonl;
    cfg.dsearch_mode = parse_range(a.range);
    cfg.th2_pairing = parse_pairing(a.pairing);
    if (a.th2_gate != "both" && a.th2_gate != "p")
        throw UsageError("unknown th2 gate '" + a.th2_gate + "'");
    cfg.th2_gate_on_next = a.th2_gate == "both";
    cfg.th2_actual_step = a.actual_step;
    if (a.records != "all" && a.records != "findings")
        throw UsageError("unknown record filter '" + a.records + "'");
    cfg.records = a.records == "all" ? RecordFilter::All : RecordFilter::Findings;
    cfg.cross_check = !a.no_cross_check;
    cfg.cross_check_limit = a.cross_check_limit;
    cfg.list_cap = a.list_cap;
    if (a.jobs < 1)
        throw UsageError("--jobs must be positive");
    if (a.from > a.to)
        throw UsageError("--from must not exceed --to");
    if (a.to > cfg.max_limit)
        throw UsageError("--to exceeds the configured maximum " + std::to_string(cfg.max_limit));

    const SweepReport report = sweep(cfg);
    out << to_json(report, cfg.list_cap).dump(2) << '\n';
    const bool findings = !report.counterexamples.empty() || !report.method_equivalence.disagree.empty();
    err << "sweep [" << report.lo << ", " << report.hi << "]: " << report.evaluated_p << " values, "
        << report.counterexamples.size() << " counterexample(s), " << report.method_equivalence.disagree.size()
        << " method disagreement(s), " << std::fixed << std::setprecision(2) << report.elapsed_seconds << " s\n";
    return findings ? kExitFindings : kExitOk;
}

// stats

struct StatsArgs {
    bool transition = false;
    Natural primes = 0;
    Natural limit = 0;
    int jobs = 0;
    std::string format = "json";
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err)
{
    if (!a.transition)
        throw UsageError("stats needs --transition");
    if ((a.primes == 0) == (a.limit == 0))
        throw UsageError("stats needs exactly one of --primes or --limit");
    SieveOptions opts;
    opts.workers = a.jobs;
    const auto started = std::chrono::steady_clock::now();
    const TransitionMatrix m = a.primes != 0 ? transition_matrix(a.primes, opts) : transition_matrix_upto(a.limit, opts);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (a.format == "csv") {
        out << "from,to,count,frequency\n";
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out << TransitionMatrix::kDigits[i] << ',' << TransitionMatrix::kDigits[j] << ',' << m.counts[i][j]
                    << ',' << std::setprecision(17) << m.frequency(i, j) << '\n';
    } else {
        ordered_json counts = ordered_json::array();
        ordered_json freqs = ordered_json::array();
        for (int i = 0; i < 4; ++i) {
            ordered_json crow = ordered_json::array();
            ordered_json frow = ordered_json::array();
            for (int j = 0; j < 4; ++j) {
                crow.push_back(m.counts[i][j]);
                frow.push_back(m.frequency(i, j));
            }
            counts.push_back(crow);
            freqs.push_back(frow);
        }
        ordered_json doc{{"command", "stats"},
                         {"primes", a.primes != 0 ? ordered_json(a.primes) : ordered_json(m.total + 1)},
                         {"limit", a.limit != 0 ? ordered_json(a.limit) : ordered_json(nullptr)},
                         {"digits", TransitionMatrix::kDigits},
                         {"counts", counts},
                         {"frequencies", freqs},
                         {"transitions", m.total},
                         {"one_to_one", m.frequency(0, 0)},
                         {"elapsed_seconds", elapsed}};
        out << doc.dump(2) << '\n';
    }
    err << "stats: " << m.total << " transitions, 1->1 frequency " << std::setprecision(6) << m.frequency(0, 0)
        << '\n';
    return kExitOk;
}

// monotone

struct MonotoneArgs {
    std::string rcase = "all";
    Natural limit = 0;
    int jobs = 1;
};

int cmd_monotone(const MonotoneArgs& a, std::ostream& out, std::ostream& err)
{
    if (a.limit > configured_max_limit())
        throw UsageError("--limit exceeds the configured maximum");
    ordered_json arr = ordered_json::array();
    for (ResidueCase c : parse_cases(a.rcase)) {
        const auto r = monotonicity_study(c, a.limit, a.jobs);
        arr.push_back(to_json(r));
        err << "case " << c.id() << ": max-AB increasing fraction " << r.max_ab.fraction() << ", min-AB "
            << r.min_ab.fraction() << '\n';
    }
    out << ordered_json{{"command", "monotone"}, {"limit", a.limit}, {"results", arr}}.dump(2) << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Digit-class factorization and inequality audit for numbers ending in 1", "dcf"};
    app.require_subcommand(1);

    FactorArgs fa;
    auto* factor = app.add_subcommand("factor", "List representations of p by oracle, d-search and lambda-search");
    factor->add_option("p", fa.p, "Natural number ending in 1")->required();
    factor->add_option("--case", fa.rcase, "73, 99, 11 or all");
    factor->add_option("--method", fa.method, "oracle, dsearch, lambda or all");
    factor->add_option("--dsearch-range", fa.range, "paper or sound");
    factor->add_option("--format", fa.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check one claim on every representation of p");
    verify->add_option("p", va.p, "Natural number ending in 1")->required();
    verify->add_option("--claim", va.claim, "th1, obs2, th2, th2i, th3, th4 or cor")->required();
    verify->add_option("--case", va.rcase, "73, 99, 11 or all");
    verify->add_option("--th2-pairing", va.pairing, "literal or consecutive");
    verify->add_option("--th2-gate", va.th2_gate, "both or p");
    verify->add_flag("--th2-actual-step", va.actual_step, "Use the actual step in the (1 + 10/p) factor");
    verify->add_option("--format", va.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    SweepArgs sa;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run every check over a range of p");
    sweep_cmd->add_option("--from", sa.from, "Lower bound");
    sweep_cmd->add_option("--to", sa.to, "Upper bound")->required();
    sweep_cmd->add_option("--case", sa.rcase, "73, 99, 11 or all");
    sweep_cmd->add_option("--claims,--claim", sa.claims, "Comma-separated claims or all");
    sweep_cmd->add_option("--jobs", sa.jobs, "Worker threads");
    sweep_cmd->add_option("--out", sa.out, "Record stream path");
    sweep_cmd->add_option("--format", sa.format, "json (JSONL records) or csv");
    sweep_cmd->add_option("--dsearch-range", sa.range, "paper or sound");
    sweep_cmd->add_option("--th2-pairing", sa.pairing, "literal or consecutive");
    sweep_cmd->add_option("--th2-gate", sa.th2_gate, "both or p");
    sweep_cmd->add_flag("--th2-actual-step", sa.actual_step, "Use the actual step in the (1 + 10/p) factor");
    sweep_cmd->add_option("--records", sa.records, "all or findings");
    sweep_cmd->add_flag("--no-cross-check", sa.no_cross_check, "Skip the three-method comparison");
    sweep_cmd->add_option("--cross-check-limit", sa.cross_check_limit, "Largest p compared across methods");
    sweep_cmd->add_option("--list-cap", sa.list_cap, "Examples kept per report list (counts stay complete)");

    StatsArgs st;
    auto* stats = app.add_subcommand("stats", "Last-digit transitions of consecutive primes greater than 5");
    stats->add_flag("--transition", st.transition, "Transition matrix");
    stats->add_option("--primes", st.primes, "Number of primes greater than 5");
    stats->add_option("--limit", st.limit, "Use all primes up to this bound");
    stats->add_option("--jobs", st.jobs, "Worker threads (0 = runtime default)");
    stats->add_option("--format", st.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    MonotoneArgs ma;
    auto* mono = app.add_subcommand("monotone", "How often max/min AB increases along representable p");
    mono->add_option("--case", ma.rcase, "73, 99, 11 or all");
    mono->add_option("--limit", ma.limit, "Largest p")->required();
    mono->add_option("--jobs", ma.jobs, "Worker threads");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*factor)
            return cmd_factor(fa, out, err);
        if (*verify)
            return cmd_verify(va, out, err);
        if (*sweep_cmd)
            return cmd_sweep(sa, out, err);
        if (*stats)
            return cmd_stats(st, out, err);
        if (*mono)
            return cmd_monotone(ma, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        // Output and input failures.
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace dcf::cli
