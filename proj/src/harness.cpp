#include "dcf/harness.hpp"
#include "dcf/records.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <stdexcept>

namespace dcf {

using nlohmann::ordered_json;

void ClaimCounters::add(Outcome o) noexcept
{
    switch (o) {
    case Outcome::Pass: ++pass; break;
    case Outcome::Fail: ++fail; break;
    case Outcome::Borderline: ++borderline; break;
    case Outcome::NotApplicable: ++not_applicable; break;
    }
}

ClaimCounters& ClaimCounters::operator+=(const ClaimCounters& o) noexcept
{
    pass += o.pass;
    fail += o.fail;
    borderline += o.borderline;
    not_applicable += o.not_applicable;
    non_pairable += o.non_pairable;
    return *this;
}

void FormConformance::add(const DSearchWitness& w, std::size_t cap)
{
    ++witnesses;
    if (const auto* pf = std::get_if<PowerForm>(&w.form)) {
        ++(pf->tau ? power_tau : power_two);
        return;
    }
    if (std::get<NonConforming>(w.form).zero_case) {
        ++zero;
        return;
    }
    ++nonconforming;
    if (nonconforming_examples.size() < cap)
        nonconforming_examples.push_back(w);
}

double FormConformance::conforming_fraction() const noexcept
{
    if (witnesses == 0)
        return 1.0;
    return static_cast<double>(power_two + power_tau) / static_cast<double>(witnesses);
}

double MonotonicityVariant::fraction() const noexcept
{
    return pairs == 0 ? 1.0 : static_cast<double>(increasing) / static_cast<double>(pairs);
}

bool SweepReport::consistent() const noexcept
{
    std::array<Natural, kAllClaims.size()> findings{};
    for (const auto& c : counterexamples)
        ++findings[static_cast<std::size_t>(c.claim)];
    for (std::size_t i = 0; i < kAllClaims.size(); ++i) {
        if (counters[i].total() != instances[i])
            return false;
        if (counters[i].fail + counters[i].borderline != findings[i])
            return false;
    }
    return method_equivalence.agree + method_equivalence.disagree.size() == method_equivalence.compared;
}

namespace {

std::size_t index_of(ClaimId id) { return static_cast<std::size_t>(id); }
std::size_t index_of(ResidueCase c) { return static_cast<std::size_t>(c.tag()); }

bool is_finding(const BoundCheck& r)
{
    return r.verdict.outcome == Outcome::Fail || r.verdict.outcome == Outcome::Borderline;
}

/// Next p = 1 (mod 10) at or above v.
Natural round_up_to_one(Natural v)
{
    const Natural r = v % 10;
    if (r == 1)
        return v;
    return r == 0 ? v + 1 : v + (11 - r);
}

struct CaseProducts {
    std::vector<ProductRange> data;
};

struct ChunkResult {
    std::array<ClaimCounters, kAllClaims.size()> counters{};
    std::array<Natural, kAllClaims.size()> instances{};
    ClaimCounters th2_gate_both;
    ClaimCounters th2_gate_p_only;
    std::vector<BoundCheck> records;
    std::vector<BoundCheck> findings;
    MethodEquivalence equivalence;
    std::array<FormConformance, 3> conformance{};
    std::array<std::vector<ProductRange>, 3> products;
    Th3Stats th3;
    Natural evaluated_p = 0;
};

class ChunkRunner {
public:
    ChunkRunner(const SweepConfig& config, ChunkResult& out) : config_(config), out_(out)
    {
        for (ClaimId id : config.claims)
            enabled_[index_of(id)] = true;
    }

    void run(Natural first, Natural last)
    {
        for (Natural p = first; p <= last; p += 10) {
            ++out_.evaluated_p;
            for (ResidueCase c : config_.cases)
                run_case(p, c);
        }
    }

private:
    [[nodiscard]] bool enabled(ClaimId id) const { return enabled_[index_of(id)]; }

    void record(const BoundCheck& bc, bool count = true)
    {
        const auto i = index_of(bc.claim);
        if (count) {
            ++out_.instances[i];
            out_.counters[i].add(bc.verdict.outcome);
        }
        const bool finding = is_finding(bc);
        if (finding)
            out_.findings.push_back(bc);
        if (config_.records == RecordFilter::All || finding)
            out_.records.push_back(bc);
    }

    void non_pairable(ClaimId id)
    {
        ++out_.instances[index_of(id)];
        ++out_.counters[index_of(id)].non_pairable;
    }

    const std::vector<Representation>& reps(Natural p, ResidueCase c)
    {
        auto& cache = cache_[index_of(c)];
        auto it = std::find_if(cache.begin(), cache.end(), [p](const auto& e) { return e.first == p; });
        if (it != cache.end())
            return it->second;
        // Small sliding cache: lookups only reach a few steps ahead.
        if (cache.size() > 64)
            cache.erase(cache.begin(), cache.begin() + 32);
        cache.emplace_back(p, oracle_representations(p, c));
        return cache.back().second;
    }

    void cross_check(Natural p, ResidueCase c, const std::vector<Representation>& oracle)
    {
        auto& eq = out_.equivalence;
        ++eq.compared;
        if (!oracle.empty())
            ++eq.representable;
        const auto ds = representations_of(dsearch_representations(p, c, config_.dsearch_mode));
        std::vector<Representation> lam;
        bool same = ds == oracle;
        if (c.tag() == CaseTag::SevenThree) {
            lam = representations_of(lambda_representations(p));
            same = same && lam == oracle;
        }
        if (same)
            ++eq.agree;
        else
            eq.disagree.push_back({p, c, oracle, ds, lam});
    }

    void run_case(Natural p, ResidueCase c)
    {
        const auto here = reps(p, c);
        if (config_.cross_check && p <= config_.cross_check_limit)
            cross_check(p, c, here);

        if (!here.empty()) {
            ProductRange range{p, here.front().AB(), here.front().AB()};
            for (const auto& r : here) {
                range.min_ab = std::min(range.min_ab, r.AB());
                range.max_ab = std::max(range.max_ab, r.AB());
            }
            out_.products[index_of(c)].push_back(range);
        }

        for (const auto& rep : here) {
            if (enabled(ClaimId::Th1))
                record(check_th1(rep));
            if (enabled(ClaimId::Obs2))
                record(check_obs2(rep));
            if (enabled(ClaimId::Th2Interior))
                record(check_th2_interior(rep));
            if (c.tag() == CaseTag::SevenThree && (enabled(ClaimId::Th4A) || enabled(ClaimId::Th4B))) {
                auto [a_branch, b_branch] = check_th4(rep);
                if (enabled(ClaimId::Th4A))
                    record(a_branch);
                if (enabled(ClaimId::Th4B))
                    record(b_branch);
            }
            const auto w = witness_for(rep);
            out_.conformance[index_of(c)].add(w, config_.list_cap);
            if (enabled(ClaimId::CorRange))
                record(check_cor_range(w));
        }

        if (enabled(ClaimId::Th2Final) && !here.empty())
            run_th2(p, c, here);
        if (c.tag() == CaseTag::SevenThree && (enabled(ClaimId::Th3Lower) || enabled(ClaimId::Th3Ratio)))
            run_th3(p);
    }

    void run_th2(Natural p, ResidueCase c, const std::vector<Representation>& here)
    {
        Natural next = p + 10;
        if (config_.th2_pairing == Th2Pairing::ConsecutiveRepresentable)
            while (reps(next, c).empty())
                next += 10;
        const auto there = reps(next, c);
        if (there.empty()) {
            non_pairable(ClaimId::Th2Final);
            ++out_.th2_gate_both.non_pairable;
            ++out_.th2_gate_p_only.non_pairable;
            return;
        }
        for (const auto& rp : here) {
            for (const auto& rn : there) {
                const Th2Pair pair(rp, rn);
                const BoundCheck both = check_th2(pair, {true, config_.th2_actual_step});
                const BoundCheck p_only = check_th2(pair, {false, config_.th2_actual_step});
                out_.th2_gate_both.add(both.verdict.outcome);
                out_.th2_gate_p_only.add(p_only.verdict.outcome);
                record(config_.th2_gate_on_next ? both : p_only);
            }
        }
    }

    void run_th3(Natural p)
    {
        if (!is_prime(p))
            return;
        const auto there = reps(p + 10, kSevenThree);
        if (there.empty()) {
            if (enabled(ClaimId::Th3Lower))
                non_pairable(ClaimId::Th3Lower);
            if (enabled(ClaimId::Th3Ratio))
                non_pairable(ClaimId::Th3Ratio);
            return;
        }
        for (const auto& rep : there) {
            // a = 0 gives x0 = -1/(10b+3): no positive rational solution.
            if (Wide{rep.b()} * 70 + 21 >= p) {
                ++out_.th3.non_constructible;
                continue;
            }
            const Th3Instance inst(p, rep.a(), rep.b());
            ++out_.th3.instances;
            if (!(inst.ratio() > ExactRatio{1}))
                ++out_.th3.strict_lower_violations;
            auto [lower, ratio_check] = check_th3(inst);
            if (enabled(ClaimId::Th3Lower))
                record(lower);
            if (enabled(ClaimId::Th3Ratio))
                record(ratio_check);
        }
    }

    const SweepConfig& config_;
    ChunkResult& out_;
    std::array<bool, kAllClaims.size()> enabled_{};
    std::array<std::vector<std::pair<Natural, std::vector<Representation>>>, 3> cache_;
};

void merge_equivalence(MethodEquivalence& into, MethodEquivalence&& from)
{
    into.compared += from.compared;
    into.agree += from.agree;
    into.representable += from.representable;
    for (auto& d : from.disagree)
        into.disagree.push_back(std::move(d));
}

void merge_conformance(FormConformance& into, const FormConformance& from, std::size_t cap)
{
    into.witnesses += from.witnesses;
    into.power_two += from.power_two;
    into.power_tau += from.power_tau;
    into.nonconforming += from.nonconforming;
    into.zero += from.zero;
    for (const auto& w : from.nonconforming_examples)
        if (into.nonconforming_examples.size() < cap)
            into.nonconforming_examples.push_back(w);
}

class RecordSink {
public:
    RecordSink(const std::string& path, OutputFormat format) : format_(format)
    {
        if (path.empty())
            return;
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw std::runtime_error("cannot open " + path + " for writing");
        path_ = path;
        if (format_ == OutputFormat::Csv)
            out_ << csv_header() << '\n';
    }

    void write(const std::vector<BoundCheck>& records)
    {
        if (path_.empty())
            return;
        for (const auto& r : records)
            out_ << (format_ == OutputFormat::Csv ? to_csv_line(r) : to_jsonl_line(r)) << '\n';
        if (!out_)
            throw std::runtime_error("write failed: " + path_);
    }

private:
    OutputFormat format_;
    std::ofstream out_;
    std::string path_;
};

void validate(const SweepConfig& config)
{
    if (config.lo > config.hi)
        throw std::invalid_argument("sweep requires lo <= hi");
    if (config.hi > config.max_limit)
        throw ResourceError("sweep upper bound " + std::to_string(config.hi) + " exceeds the configured maximum "
                            + std::to_string(config.max_limit));
    if (config.workers < 1)
        throw std::invalid_argument("sweep requires at least one worker");
    if (config.chunk_size == 0)
        throw std::invalid_argument("chunk size must be positive");
    if (config.cases.empty())
        throw std::invalid_argument("sweep needs at least one case");
}

template <typename Task>
void run_parallel(Natural count, int workers, Task&& task)
{
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (Natural i = 0; i < count; ++i) {
        try {
            task(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

MonotonicityResult summarize_monotonicity(ResidueCase rcase, const std::vector<ProductRange>& data, std::size_t cap)
{
    MonotonicityResult result;
    result.rcase = rcase;
    result.representable = data.size();
    auto step = [cap](MonotonicityVariant& v, bool increased, Natural p, Natural next) {
        ++v.pairs;
        if (increased)
            ++v.increasing;
        else if (v.violations.size() < cap)
            v.violations.emplace_back(p, next);
    };
    for (std::size_t i = 0; i + 1 < data.size(); ++i) {
        const auto& a = data[i];
        const auto& b = data[i + 1];
        step(result.max_ab, b.max_ab > a.max_ab, a.p, b.p);
        step(result.min_ab, b.min_ab > a.min_ab, a.p, b.p);
        step(result.all_reps, b.min_ab > a.max_ab, a.p, b.p);
    }
    return result;
}

MonotonicityResult monotonicity_study(ResidueCase rcase, Natural limit, int workers, std::size_t cap)
{
    if (limit < 100)
        throw std::invalid_argument("monotonicity_study requires limit >= 100");
    constexpr Natural kChunk = 10'000;
    const Natural values = (limit - 1) / 10 + 1;  // p = 1, 11, ..., <= limit
    const Natural chunks = (values + kChunk - 1) / kChunk;
    std::vector<std::vector<ProductRange>> parts(chunks);
    run_parallel(chunks, std::max(workers, 1), [&](Natural ci) {
        const Natural first = 1 + ci * kChunk * 10;
        const Natural last = std::min(limit, first + (kChunk - 1) * 10);
        for (Natural p = first; p <= last; p += 10) {
            const auto reps = oracle_representations(p, rcase);
            if (reps.empty())
                continue;
            ProductRange r{p, reps.front().AB(), reps.front().AB()};
            for (const auto& rep : reps) {
                r.min_ab = std::min(r.min_ab, rep.AB());
                r.max_ab = std::max(r.max_ab, rep.AB());
            }
            parts[ci].push_back(r);
        }
    });
    std::vector<ProductRange> data;
    for (auto& part : parts)
        data.insert(data.end(), part.begin(), part.end());
    return summarize_monotonicity(rcase, data, cap);
}

SweepReport sweep(const SweepConfig& config)
{
    validate(config);
    const auto started = std::chrono::steady_clock::now();

    SweepReport report;
    report.lo = round_up_to_one(config.lo);
    report.hi = config.hi;
    RecordSink sink(config.output_path, config.format);
    std::array<std::vector<ProductRange>, 3> products;

    if (report.lo <= report.hi) {
        const Natural values = (report.hi - report.lo) / 10 + 1;
        const Natural chunks = (values + config.chunk_size - 1) / config.chunk_size;
        const Natural batch = static_cast<Natural>(config.workers) * 4;
        for (Natural c0 = 0; c0 < chunks; c0 += batch) {
            const Natural c1 = std::min(chunks, c0 + batch);
            std::vector<ChunkResult> results(c1 - c0);
            run_parallel(c1 - c0, config.workers, [&](Natural i) {
                const Natural first = report.lo + (c0 + i) * config.chunk_size * 10;
                const Natural last_index = std::min(values - 1, (c0 + i + 1) * config.chunk_size - 1);
                const Natural last = report.lo + last_index * 10;
                ChunkRunner(config, results[i]).run(first, last);
            });
            for (auto& r : results) {
                for (std::size_t k = 0; k < kAllClaims.size(); ++k) {
                    report.counters[k] += r.counters[k];
                    report.instances[k] += r.instances[k];
                }
                report.th2_gate_both += r.th2_gate_both;
                report.th2_gate_p_only += r.th2_gate_p_only;
                report.evaluated_p += r.evaluated_p;
                report.th3.instances += r.th3.instances;
                report.th3.strict_lower_violations += r.th3.strict_lower_violations;
                report.th3.non_constructible += r.th3.non_constructible;
                merge_equivalence(report.method_equivalence, std::move(r.equivalence));
                for (std::size_t k = 0; k < 3; ++k) {
                    merge_conformance(report.conformance[k], r.conformance[k], config.list_cap);
                    products[k].insert(products[k].end(), r.products[k].begin(), r.products[k].end());
                }
                sink.write(r.records);
                for (auto& f : r.findings)
                    report.counterexamples.push_back(std::move(f));
            }
        }
    }

    for (ResidueCase c : config.cases)
        report.monotonicity.push_back(summarize_monotonicity(c, products[index_of(c)], config.list_cap));

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

namespace {

ordered_json counters_json(const ClaimCounters& c)
{
    return ordered_json{{"pass", c.pass},
                        {"fail", c.fail},
                        {"borderline", c.borderline},
                        {"not_applicable", c.not_applicable},
                        {"non_pairable", c.non_pairable}};
}

ordered_json rep_json(const Representation& r)
{
    return ordered_json::array({json_natural(r.a()), json_natural(r.b())});
}

ordered_json reps_json(const std::vector<Representation>& reps)
{
    ordered_json arr = ordered_json::array();
    for (const auto& r : reps)
        arr.push_back(rep_json(r));
    return arr;
}

ordered_json variant_json(const MonotonicityVariant& v)
{
    ordered_json viol = ordered_json::array();
    for (const auto& [p, next] : v.violations)
        viol.push_back(ordered_json::array({json_natural(p), json_natural(next)}));
    return ordered_json{{"pairs", v.pairs},
                        {"increasing", v.increasing},
                        {"fraction", v.fraction()},
                        {"violation_count", v.violation_count()},
                        {"violations", viol}};
}

} // namespace

ordered_json to_json(const DSearchWitness& w)
{
    ordered_json form = ordered_json::object();
    form["kind"] = "nonconforming";
    form["k"] = 0;
    form["j"] = 0;
    form["tau"] = 0;
    form["zero"] = false;
    if (const auto* pf = std::get_if<PowerForm>(&w.form)) {
        form["kind"] = pf->tau ? "power_tau" : "power_two";
        form["k"] = pf->k;
        form["j"] = pf->j;
        form["tau"] = pf->tau.value_or(2);
    } else if (std::get<NonConforming>(w.form).zero_case) {
        form["zero"] = true;
    }
    return ordered_json{{"p", json_natural(w.rep.p())},
                        {"case", std::string(w.rep.residue_case().id())},
                        {"d", json_natural(w.d)},
                        {"s", json_natural(w.s)},
                        {"a", json_natural(w.rep.a())},
                        {"b", json_natural(w.rep.b())},
                        {"form", form},
                        {"form_text", describe(w.form)}};
}

ordered_json to_json(const MonotonicityResult& m)
{
    return ordered_json{{"case", std::string(m.rcase.id())},
                        {"representable", m.representable},
                        {"max_ab", variant_json(m.max_ab)},
                        {"min_ab", variant_json(m.min_ab)},
                        {"all_reps", variant_json(m.all_reps)}};
}

ordered_json to_json(const SweepReport& r, std::size_t counterexample_cap)
{
    ordered_json claims = ordered_json::object();
    for (ClaimId id : kAllClaims) {
        auto c = counters_json(r.counters_for(id));
        c["instances"] = r.instances_for(id);
        claims[std::string(to_string(id))] = c;
    }

    ordered_json disagree = ordered_json::array();
    for (const auto& d : r.method_equivalence.disagree)
        disagree.push_back(ordered_json{{"p", json_natural(d.p)},
                                        {"case", std::string(d.rcase.id())},
                                        {"oracle", reps_json(d.oracle)},
                                        {"dsearch", reps_json(d.dsearch)},
                                        {"lambda", reps_json(d.lambda)}});

    ordered_json conformance = ordered_json::object();
    for (ResidueCase c : kAllCases) {
        const auto& f = r.conformance[static_cast<std::size_t>(c.tag())];
        ordered_json examples = ordered_json::array();
        for (const auto& w : f.nonconforming_examples)
            examples.push_back(to_json(w));
        conformance[std::string(c.id())] = ordered_json{{"witnesses", f.witnesses},
                                                        {"power_two", f.power_two},
                                                        {"power_tau", f.power_tau},
                                                        {"nonconforming", f.nonconforming},
                                                        {"zero", f.zero},
                                                        {"conforming_fraction", f.conforming_fraction()},
                                                        {"nonconforming_examples", examples}};
    }

    ordered_json mono = ordered_json::array();
    for (const auto& m : r.monotonicity)
        mono.push_back(to_json(m));

    ordered_json cex = ordered_json::array();
    for (std::size_t i = 0; i < r.counterexamples.size() && i < counterexample_cap; ++i)
        cex.push_back(to_json(r.counterexamples[i]));

    return ordered_json{
        {"command", "sweep"},
        {"from", json_natural(r.lo)},
        {"to", json_natural(r.hi)},
        {"evaluated_p", r.evaluated_p},
        {"claims", claims},
        {"th2_regimes", ordered_json{{"gate_both", counters_json(r.th2_gate_both)},
                                     {"gate_p_only", counters_json(r.th2_gate_p_only)}}},
        {"th3", ordered_json{{"instances", r.th3.instances},
                             {"strict_lower_violations", r.th3.strict_lower_violations},
                             {"non_constructible", r.th3.non_constructible}}},
        {"method_equivalence", ordered_json{{"compared", r.method_equivalence.compared},
                                            {"representable", r.method_equivalence.representable},
                                            {"agree", r.method_equivalence.agree},
                                            {"disagree", disagree}}},
        {"form_conformance", conformance},
        {"monotonicity", mono},
        {"counterexample_count", r.counterexamples.size()},
        {"counterexamples", cex},
        {"consistent", r.consistent()},
        {"elapsed_seconds", r.elapsed_seconds},
    };
}

} // namespace dcf
