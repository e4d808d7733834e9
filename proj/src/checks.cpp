#include "dcf/checks.hpp"
#include "dcf/sieve.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dcf {

namespace {

struct Thresholds {
    Natural a;
    Natural b;
};

constexpr Thresholds th1_conditions(ResidueCase c) noexcept
{
    switch (c.tag()) {
    case CaseTag::SevenThree: return {4, 8};
    case CaseTag::NineNine: return {2, 2};
    case CaseTag::OneOne: return {10, 10};
    }
    return {0, 0};
}

constexpr Thresholds th2_conditions(ResidueCase c) noexcept
{
    switch (c.tag()) {
    case CaseTag::SevenThree: return {31, 71};
    case CaseTag::NineNine: return {11, 11};
    case CaseTag::OneOne: return {91, 91};
    }
    return {0, 0};
}

/// Region of the printed d-interval on the unshifted (x, y).
constexpr Thresholds cor_region(ResidueCase c) noexcept
{
    switch (c.tag()) {
    case CaseTag::SevenThree: return {3, 7};
    case CaseTag::NineNine: return {2, 2};
    case CaseTag::OneOne: return {9, 9};
    }
    return {0, 0};
}

std::string lt_gate(std::string_view name, Natural value, Natural bound)
{
    return std::string(name) + " = " + std::to_string(value) + " < " + std::to_string(bound);
}

/// Empty when both conditions hold, otherwise the first failing one.
std::string threshold_gate(Natural A, Natural B, Thresholds t, std::string_view a_name = "A",
                           std::string_view b_name = "B")
{
    if (A < t.a)
        return lt_gate(a_name, A, t.a);
    if (B < t.b)
        return lt_gate(b_name, B, t.b);
    return {};
}

BoundCheck base(ClaimId claim, const Representation& rep)
{
    BoundCheck bc;
    bc.claim = claim;
    bc.p = rep.p();
    bc.rcase = rep.residue_case();
    bc.witness = CheckWitness{};
    bc.witness->a = rep.a();
    bc.witness->b = rep.b();
    return bc;
}

Side exact_side(const ExactRatio& r) { return {r.to_string(), true}; }

ExactRatio ratio(Wide num, Wide den)
{
    return ExactRatio::from_wide(static_cast<SignedWide>(num), static_cast<SignedWide>(den));
}

void gate(BoundCheck& bc, std::string reason)
{
    bc.applicable = false;
    bc.gate = std::move(reason);
    bc.verdict = {Outcome::NotApplicable, std::nullopt};
}

Verdict pass_if(bool ok) { return {ok ? Outcome::Pass : Outcome::Fail, std::nullopt}; }

/// lower <= mid <= upper, all exact.
Verdict between(const ExactRatio& lower, const ExactRatio& mid, const ExactRatio& upper)
{
    return pass_if(lower <= mid && mid <= upper);
}

/// Combine an exact lower check 1 <= mid with a log-domain upper verdict.
Verdict lower_then(const ExactRatio& mid, const LogExpr& upper_log)
{
    if (mid < ExactRatio{1})
        return {Outcome::Fail, std::nullopt};
    return compare_log_bound(mid, upper_log);
}

std::string approx_decimal(long double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6Lf", v);
    return buf;
}

std::string step_label(Natural step) { return step == 10 ? "p+10" : "p+" + std::to_string(step); }

} // namespace

std::string_view to_string(ClaimId id) noexcept
{
    switch (id) {
    case ClaimId::Th1: return "th1";
    case ClaimId::Obs2: return "obs2";
    case ClaimId::Th2Final: return "th2";
    case ClaimId::Th2Interior: return "th2i";
    case ClaimId::Th3Lower: return "th3_lower";
    case ClaimId::Th3Ratio: return "th3_ratio";
    case ClaimId::Th4A: return "th4_a";
    case ClaimId::Th4B: return "th4_b";
    case ClaimId::CorRange: return "cor";
    }
    return "";
}

std::optional<ClaimId> parse_claim(std::string_view s) noexcept
{
    for (ClaimId id : kAllClaims)
        if (to_string(id) == s)
            return id;
    return std::nullopt;
}

BoundCheck check_th1(const Representation& rep)
{
    BoundCheck bc = base(ClaimId::Th1, rep);
    const Natural p = rep.p();
    const auto lower = ratio(p, 100);
    const auto mid = ratio(rep.AB(), 1);
    const auto upper = ratio(Wide{p} * 121, 10'000);
    bc.lhs = exact_side(lower);
    bc.mid = exact_side(mid);
    bc.rhs = exact_side(upper);
    if (auto g = threshold_gate(rep.A(), rep.B(), th1_conditions(rep.residue_case())); !g.empty()) {
        gate(bc, std::move(g));
        return bc;
    }
    bc.applicable = true;
    bc.verdict = between(lower, mid, upper);
    return bc;
}

BoundCheck check_obs2(const Representation& rep)
{
    BoundCheck bc = base(ClaimId::Obs2, rep);
    const auto lower = ratio(Wide{rep.a()} * rep.b() * 100, 1);
    const auto mid = ratio(rep.p(), 1);
    const auto upper = ratio(rep.AB() * 100, 1);
    bc.lhs = exact_side(lower);
    bc.mid = exact_side(mid);
    bc.rhs = exact_side(upper);
    bc.applicable = true;
    bc.verdict = between(lower, mid, upper);
    return bc;
}

Th2Pair::Th2Pair(Representation at_p, Representation at_next) : at_p_(at_p), at_next_(at_next)
{
    if (!(at_p_.residue_case() == at_next_.residue_case()))
        throw std::invalid_argument("Th2Pair representations belong to different cases");
    if (at_next_.p() <= at_p_.p())
        throw std::invalid_argument("Th2Pair requires the paired value to exceed p");
}

namespace {

/// render_exp memoized on (claim, p, extra); consecutive calls share p in a sweep.
const std::string& rendered_bound(ClaimId id, Natural p, Natural extra, const LogExpr& expr)
{
    struct Slot {
        Natural p = 0;
        Natural extra = 0;
        std::string text;
    };
    thread_local std::array<Slot, kAllClaims.size()> slots;
    Slot& slot = slots[static_cast<std::size_t>(id)];
    if (slot.text.empty() || slot.p != p || slot.extra != extra) {
        slot.text = render_exp(expr);
        slot.p = p;
        slot.extra = extra;
    }
    return slot.text;
}

} // namespace

BoundCheck check_th2(const Th2Pair& pair, const Th2Options& options)
{
    const auto& at_p = pair.at_p();
    const auto& at_next = pair.at_next();
    BoundCheck bc = base(ClaimId::Th2Final, at_p);
    bc.witness->p_next = at_next.p();
    bc.witness->a_next = at_next.a();
    bc.witness->b_next = at_next.b();
    bc.witness->gate_on_next = options.gate_on_next;
    bc.witness->actual_step = options.actual_step;

    const Natural p = at_p.p();
    const Natural step = options.actual_step ? pair.step() : 10;
    const auto r = ratio(at_next.AB(), at_p.AB());
    // ln R <= 100 (0.000201 + 0.101^2 ln(1 + step/p))
    LogExpr upper{{LogTerm::constant(ExactRatio{201, 10'000}),
                   LogTerm::ln(ExactRatio{10'201, 10'000}, ratio(Wide{p} + step, p))}};
    bc.lhs = {"1", true};
    bc.mid = exact_side(r);
    bc.rhs = {rendered_bound(ClaimId::Th2Final, p, step, upper), false};

    const auto t = th2_conditions(at_p.residue_case());
    std::string g = threshold_gate(at_p.A(), at_p.B(), t, "A(p)", "B(p)");
    if (g.empty() && options.gate_on_next) {
        const std::string label = step_label(pair.step());
        g = threshold_gate(at_next.A(), at_next.B(), t, "A(" + label + ")", "B(" + label + ")");
    }
    if (!g.empty()) {
        gate(bc, std::move(g));
        return bc;
    }
    bc.applicable = true;
    bc.verdict = lower_then(r, upper);
    return bc;
}

BoundCheck check_th2_interior(const Representation& rep)
{
    BoundCheck bc = base(ClaimId::Th2Interior, rep);
    const Natural p = rep.p();
    const auto lower = ratio(p, 100);
    const auto mid = ratio(rep.AB(), 1);
    const auto upper = ratio(Wide{p} * 10'201, 1'000'000);
    bc.lhs = exact_side(lower);
    bc.mid = exact_side(mid);
    bc.rhs = exact_side(upper);
    if (auto g = threshold_gate(rep.A(), rep.B(), th2_conditions(rep.residue_case())); !g.empty()) {
        gate(bc, std::move(g));
        return bc;
    }
    bc.applicable = true;
    bc.verdict = between(lower, mid, upper);
    return bc;
}

Th3Instance::Th3Instance(Natural p, Natural a, Natural b) : p_(p), a_(a), b_(b)
{
    const Wide g = Wide{b} * 10 + 3;
    if (Wide{p} + 10 != (Wide{a} * 10 + 7) * g)
        throw std::invalid_argument("p + 10 = " + to_string(Wide{p} + 10) + " is not (10a + 7)(10b + 3) for a = "
                                    + std::to_string(a) + ", b = " + std::to_string(b));
    // x0 = (p/(10b+3) - 7)/10 = (p - 7(10b+3)) / (10(10b+3))
    x0_ = ExactRatio::from_wide(static_cast<SignedWide>(p) - static_cast<SignedWide>(g * 7),
                                static_cast<SignedWide>(g * 10));
    if (!x0_.is_positive())
        throw std::invalid_argument("x0 = " + x0_.to_string() + " is not a positive rational");
}

ExactRatio Th3Instance::ratio() const
{
    const Wide g = Wide{b_} * 10 + 3;
    // A / X0 = 10 A (10b+3) / (p + 3(10b+3))
    return dcf::ratio(Wide{A()} * 10 * g, Wide{p_} + 3 * g);
}

std::pair<BoundCheck, BoundCheck> check_th3(const Th3Instance& inst)
{
    if (!is_prime(inst.p()))
        throw std::invalid_argument("Th3 requires p prime; " + std::to_string(inst.p()) + " is composite");
    const Natural p = inst.p();
    const Representation rep_next(p + 10, kSevenThree, inst.a(), inst.b());
    const auto mid = inst.ratio();
    const auto upper = ratio((Wide{p} + 10) * 101, Wide{p} * 100);

    auto make = [&](ClaimId id) {
        BoundCheck bc;
        bc.claim = id;
        bc.p = p;
        bc.rcase = kSevenThree;
        bc.witness = CheckWitness{};
        bc.witness->a = inst.a();
        bc.witness->b = inst.b();
        bc.witness->x0 = inst.x0();
        bc.mid = exact_side(mid);
        bc.rhs = exact_side(upper);
        return bc;
    };

    BoundCheck lower_check = make(ClaimId::Th3Lower);
    lower_check.lhs = {"1", true};
    if (inst.A() < 31) {
        gate(lower_check, lt_gate("A", inst.A(), 31));
    } else {
        lower_check.applicable = true;
        lower_check.verdict = pass_if(ExactRatio{1} < mid && mid < upper);
    }

    BoundCheck ratio_check = make(ClaimId::Th3Ratio);
    const auto lower = ratio((Wide{p} + 10) * 10, Wide{p} * 11);
    ratio_check.lhs = exact_side(lower);
    const ExactRatio X0 = inst.X0();
    if (X0 < ExactRatio{33, 10}) {
        gate(ratio_check, "X0 = " + X0.to_string() + " < 33/10");
    } else {
        ratio_check.applicable = true;
        ratio_check.verdict = pass_if(lower < mid && mid < upper);
    }
    return {lower_check, ratio_check};
}

std::pair<BoundCheck, BoundCheck> check_th4(const Representation& rep)
{
    if (rep.residue_case().tag() != CaseTag::SevenThree)
        throw std::invalid_argument("Th4 applies to case 73 only");
    const Natural p = rep.p();
    const auto P = static_cast<std::int64_t>(p);

    auto branch = [&](ClaimId id, Natural value, Natural min_value, Natural shift, Natural slope, Natural base_term,
                      std::int64_t sqrt_coeff, std::int64_t const_coeff, std::string_view name) {
        BoundCheck bc = base(id, rep);
        const auto mid = ratio(Wide{p} + Wide{slope} * value - 21, Wide{p} + base_term);
        // exponent = (c sqrt p - k)/p = c / sqrt(p) - k/p
        LogExpr upper{{LogTerm::sqrt_over(ExactRatio{sqrt_coeff}, ExactRatio{P}),
                       LogTerm::constant(ExactRatio{-const_coeff, P})}};
        bc.lhs = {"1", true};
        bc.mid = exact_side(mid);
        bc.rhs = {rendered_bound(id, p, 0, upper), false};
        const Wide root_side = Wide{value} * 10 - shift;
        if (value < min_value) {
            gate(bc, lt_gate(name, value, min_value));
        } else if (root_side * root_side > p) {
            gate(bc, "(10" + std::string(name) + " - " + std::to_string(shift) + ")^2 = "
                         + to_string(root_side * root_side) + " > " + std::to_string(p));
        } else {
            bc.applicable = true;
            bc.verdict = lower_then(mid, upper);
        }
        return bc;
    };

    return {branch(ClaimId::Th4A, rep.A(), 4, 3, 70, 259, 7, 259, "A"),
            branch(ClaimId::Th4B, rep.B(), 8, 7, 30, 219, 3, 3, "B")};
}

BoundCheck check_cor_range(const DSearchWitness& witness)
{
    const auto& rep = witness.rep;
    BoundCheck bc = base(ClaimId::CorRange, rep);
    bc.witness->d = witness.d;
    bc.witness->s = witness.s;
    bc.witness->form = describe(witness.form);

    const Natural p = rep.p();
    const Natural d = witness.d;
    Natural offset = 1;
    Natural coefficient = 1;
    ExactRatio upper;
    switch (rep.residue_case().tag()) {
    case CaseTag::SevenThree:
        offset = 29;
        coefficient = 21;
        upper = ExactRatio::from_wide(SignedWide{p} * 21 - 7900, 1000);
        break;
    case CaseTag::NineNine:
        offset = 9;
        upper = ExactRatio::from_wide(SignedWide{p} - 81, 90);
        break;
    case CaseTag::OneOne:
        upper = ExactRatio::from_wide(SignedWide{p} - 1, 10);
        break;
    }
    const long double lower_approx =
        (std::sqrt(static_cast<long double>(coefficient) * static_cast<long double>(p)) - offset) / 5.0L;
    bc.lhs = {approx_decimal(lower_approx), false};
    bc.mid = {std::to_string(d), true};
    bc.rhs = exact_side(upper);

    if (auto g = threshold_gate(rep.a(), rep.b(), cor_region(rep.residue_case()), "x", "y"); !g.empty()) {
        gate(bc, std::move(g));
        return bc;
    }
    bc.applicable = true;
    // (sqrt(kp) - c)/5 <= d  <=>  kp <= (5d + c)^2
    const Wide t = Wide{d} * 5 + offset;
    const bool lower_ok = Wide{coefficient} * p <= t * t;
    const bool upper_ok = ExactRatio::from_wide(SignedWide{d}, 1) <= upper;
    bc.verdict = pass_if(lower_ok && upper_ok);
    return bc;
}

BoundCheck reverify(const BoundCheck& record)
{
    if (!record.witness)
        throw std::invalid_argument("record has no witness to re-run");
    const auto& w = *record.witness;
    switch (record.claim) {
    case ClaimId::Th1: return check_th1(Representation(record.p, record.rcase, w.a, w.b));
    case ClaimId::Obs2: return check_obs2(Representation(record.p, record.rcase, w.a, w.b));
    case ClaimId::Th2Interior: return check_th2_interior(Representation(record.p, record.rcase, w.a, w.b));
    case ClaimId::Th2Final: {
        if (!w.p_next || !w.a_next || !w.b_next)
            throw std::invalid_argument("th2 record lacks the paired representation");
        Th2Options opts;
        opts.gate_on_next = w.gate_on_next.value_or(true);
        opts.actual_step = w.actual_step.value_or(false);
        return check_th2(Th2Pair(Representation(record.p, record.rcase, w.a, w.b),
                                 Representation(*w.p_next, record.rcase, *w.a_next, *w.b_next)),
                         opts);
    }
    case ClaimId::Th3Lower:
    case ClaimId::Th3Ratio: {
        auto [lower, ratio_check] = check_th3(Th3Instance(record.p, w.a, w.b));
        return record.claim == ClaimId::Th3Lower ? lower : ratio_check;
    }
    case ClaimId::Th4A:
    case ClaimId::Th4B: {
        auto [a_branch, b_branch] = check_th4(Representation(record.p, record.rcase, w.a, w.b));
        return record.claim == ClaimId::Th4A ? a_branch : b_branch;
    }
    case ClaimId::CorRange:
        return check_cor_range(witness_for(Representation(record.p, record.rcase, w.a, w.b)));
    }
    throw std::invalid_argument("unknown claim");
}

} // namespace dcf
