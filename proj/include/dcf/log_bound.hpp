#pragma once

/// @file log_bound.hpp
/// Certified comparison of ln(lhs) against a short sum of transcendental terms.
///
/// The right-hand side is a sum of terms
///   c              (Constant)
///   c * ln(q)      (LnRatio, q > 0 rational)
///   c * sqrt(q)/q  (SqrtOver, q > 0 rational)
/// A double-precision pass with a rigorous slack decides clear cases; anything
/// within 1e-9 is recomputed with 50-digit binary floats and compared against
/// the certified margin of 1e-12.

#include "dcf/numeric.hpp"
#include "dcf/types.hpp"

#include <string>
#include <vector>

namespace dcf {

struct LogTerm {
    enum class Kind { Constant, LnRatio, SqrtOver };
    Kind kind = Kind::Constant;
    ExactRatio coeff;
    ExactRatio arg{1};

    static LogTerm constant(ExactRatio c) { return {Kind::Constant, c, ExactRatio{1}}; }
    static LogTerm ln(ExactRatio c, ExactRatio q) { return {Kind::LnRatio, c, q}; }
    static LogTerm sqrt_over(ExactRatio c, ExactRatio q) { return {Kind::SqrtOver, c, q}; }
};

struct LogExpr {
    std::vector<LogTerm> terms;
};

inline constexpr double kCertifiedMargin = 1e-12;

/// Pass when lhs <= exp(rhs_log) by more than the margin, Fail when lhs exceeds it
/// by more than the margin, Borderline otherwise. Throws std::domain_error if lhs <= 0
/// or any ln/sqrt argument is not positive.
Verdict compare_log_bound(const ExactRatio& lhs, const LogExpr& rhs_log);

/// rhs_log - ln(lhs) at 50 significant digits.
double log_bound_difference(const ExactRatio& lhs, const LogExpr& rhs_log);

/// exp(rhs_log) rendered with the given number of significant digits.
std::string render_exp(const LogExpr& rhs_log, int digits = 20);

} // namespace dcf
