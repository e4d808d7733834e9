#include "dcf/log_bound.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dcf {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;
/// Rendering needs only a few guard digits beyond what is printed.
using Float28 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<28>>;

// Decisions in the fast path need |difference| above this; the double error
// for these term shapes is below 1e-14 absolute, so the slack is generous.
constexpr double kFastPathSlack = 1e-9;

void require_positive(const ExactRatio& q, const char* what)
{
    if (!q.is_positive())
        throw std::domain_error(std::string(what) + " argument must be positive, got " + q.to_string());
}

/// ln(n/d) computed as log1p((n - d)/d) with the difference formed exactly.
double ln_ratio_double(const ExactRatio& q)
{
    const double diff = static_cast<double>(SignedWide{q.numerator()} - q.denominator());
    return std::log1p(diff / static_cast<double>(q.denominator()));
}

template <class F>
F to_float(const ExactRatio& q)
{
    return F(q.numerator()) / F(q.denominator());
}

template <class F = Float50>
F ln_ratio_precise(const ExactRatio& q)
{
    const F diff = F(q.numerator()) - F(q.denominator());
    return boost::multiprecision::log1p(diff / F(q.denominator()));
}

double evaluate_double(const LogExpr& e)
{
    double sum = 0.0;
    for (const auto& t : e.terms) {
        const double c = t.coeff.to_double();
        switch (t.kind) {
        case LogTerm::Kind::Constant: sum += c; break;
        case LogTerm::Kind::LnRatio: sum += c * ln_ratio_double(t.arg); break;
        case LogTerm::Kind::SqrtOver: sum += c / std::sqrt(t.arg.to_double()); break;
        }
    }
    return sum;
}

template <class F = Float50>
F evaluate_precise(const LogExpr& e)
{
    F sum = 0;
    for (const auto& t : e.terms) {
        const F c = to_float<F>(t.coeff);
        switch (t.kind) {
        case LogTerm::Kind::Constant: sum += c; break;
        case LogTerm::Kind::LnRatio: sum += c * ln_ratio_precise<F>(t.arg); break;
        case LogTerm::Kind::SqrtOver: sum += c / boost::multiprecision::sqrt(to_float<F>(t.arg)); break;
        }
    }
    return sum;
}

void validate(const ExactRatio& lhs, const LogExpr& e)
{
    require_positive(lhs, "lhs");
    for (const auto& t : e.terms)
        if (t.kind != LogTerm::Kind::Constant)
            require_positive(t.arg, t.kind == LogTerm::Kind::LnRatio ? "ln" : "sqrt");
}

} // namespace

double log_bound_difference(const ExactRatio& lhs, const LogExpr& rhs_log)
{
    validate(lhs, rhs_log);
    return static_cast<double>(evaluate_precise(rhs_log) - ln_ratio_precise(lhs));
}

Verdict compare_log_bound(const ExactRatio& lhs, const LogExpr& rhs_log)
{
    validate(lhs, rhs_log);
    const double fast = evaluate_double(rhs_log) - ln_ratio_double(lhs);
    if (fast > kFastPathSlack)
        return {Outcome::Pass, std::nullopt};
    if (fast < -kFastPathSlack)
        return {Outcome::Fail, std::nullopt};

    const Float50 diff = evaluate_precise(rhs_log) - ln_ratio_precise(lhs);
    if (diff > kCertifiedMargin)
        return {Outcome::Pass, std::nullopt};
    if (diff < -kCertifiedMargin)
        return {Outcome::Fail, std::nullopt};
    return {Outcome::Borderline, static_cast<double>(boost::multiprecision::abs(diff))};
}

std::string render_exp(const LogExpr& rhs_log, int digits)
{
    if (digits <= 24) {
        const Float28 v = boost::multiprecision::exp(evaluate_precise<Float28>(rhs_log));
        std::ostringstream os;
        os.precision(digits);
        os << v;
        return os.str();
    }
    const Float50 v = boost::multiprecision::exp(evaluate_precise(rhs_log));
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

} // namespace dcf
