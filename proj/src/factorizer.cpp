#include "dcf/factorizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dcf {

namespace {

/// (5d + offset)^2 - coefficient * p is the discriminant for each case.
struct CaseConstants {
    Natural offset;
    Natural coefficient;
};

constexpr CaseConstants constants(ResidueCase c) noexcept
{
    switch (c.tag()) {
    case CaseTag::SevenThree: return {29, 21};
    case CaseTag::NineNine: return {9, 1};
    case CaseTag::OneOne: return {1, 1};
    }
    return {0, 0};
}

DInterval make_interval(Natural lo, std::optional<Natural> hi)
{
    if (!hi)
        return {};
    return {lo, *hi};
}

/// Smallest d >= 0 with (5d + offset)^2 >= coefficient * p.
Natural discriminant_lower(Natural p, ResidueCase c)
{
    const auto k = constants(c);
    const Wide target = Wide{k.coefficient} * p;
    Natural t = isqrt(target);
    if (Wide{t} * t < target)
        ++t;
    if (t <= k.offset)
        return 0;
    return (t - k.offset + 4) / 5;
}

void push_rep(std::vector<Representation>& out, Natural p, ResidueCase c, Natural u, Natural v)
{
    if (u % 10 != c.m() || v % 10 != c.n())
        return;
    if (c.symmetric() && u > v)
        std::swap(u, v);
    out.emplace_back(p, c, (u - c.m()) / 10, (v - c.n()) / 10);
}

void sort_unique(std::vector<Representation>& reps)
{
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
}

/// Candidate representations for a perfect-square discriminant, both branches.
void reconstruct(Natural p, ResidueCase c, Natural d, Natural s, std::vector<DSearchWitness>& out)
{
    const Natural t = 5 * d + constants(c).offset;
    auto emit = [&](Natural u, Natural v) {
        if (u < c.m() || v < c.n() || (u - c.m()) % 10 != 0 || (v - c.n()) % 10 != 0)
            return;
        if (Wide{u} * v != p)
            return;
        Representation rep(p, c, (u - c.m()) / 10, (v - c.n()) / 10);
        out.push_back({d, s, rep, form_classify(s, d % 2 == 0 ? Parity::Even : Parity::Odd)});
    };
    if (c.tag() == CaseTag::SevenThree) {
        // 7u + 3v = 2t and 7u - 3v = +-2s.
        const Natural plus = t + s;
        if (plus % 7 == 0 && t >= s && (t - s) % 3 == 0)
            emit(plus / 7, (t - s) / 3);
        if (s != 0 && t >= s && (t - s) % 7 == 0 && (t + s) % 3 == 0)
            emit((t - s) / 7, (t + s) / 3);
    } else {
        // u + v = 2t and |u - v| = 2s; emit u <= v only.
        if (t >= s)
            emit(t - s, t + s);
    }
}

/// Perfect-square test on the discriminant with cheap quadratic-residue filters first.
class SquareFilter {
public:
    SquareFilter()
    {
        for (Natural i = 0; i < 64; ++i)
            mod64_ |= Natural{1} << ((i * i) % 64);
        for (Natural i = 0; i < 63; ++i)
            mod63_[(i * i) % 63] = true;
        for (Natural i = 0; i < 65; ++i)
            mod65_[(i * i) % 65] = true;
    }

    [[nodiscard]] std::optional<Natural> root(Natural r) const noexcept
    {
        if (((mod64_ >> (r & 63)) & 1) == 0)
            return std::nullopt;
        if (!mod63_[r % 63] || !mod65_[r % 65])
            return std::nullopt;
        const Natural s = isqrt(r);
        if (s * s == r)
            return s;
        return std::nullopt;
    }

private:
    Natural mod64_ = 0;
    std::array<bool, 63> mod63_{};
    std::array<bool, 65> mod65_{};
};

const SquareFilter& square_filter()
{
    static const SquareFilter filter;
    return filter;
}

void sort_witnesses(std::vector<DSearchWitness>& ws)
{
    std::sort(ws.begin(), ws.end(), [](const DSearchWitness& x, const DSearchWitness& y) {
        return std::tie(x.d, x.rep) < std::tie(y.d, y.rep);
    });
}

Natural checked_t_max(const DInterval& range, ResidueCase c)
{
    const Wide t_max = Wide{range.hi} * 5 + constants(c).offset;
    if (t_max * t_max > Wide{~Natural{0}})
        throw std::range_error("d-search discriminant exceeds 64 bits for d up to " + std::to_string(range.hi));
    return static_cast<Natural>(t_max);
}

template <typename Int>
void lambda_by_inversion(Natural p, const LambdaOptions& options, std::vector<LambdaWitness>& out)
{
    const Int P = p;
    auto try_lambda = [&](Int lambda, int form) {
        if (lambda == 0 && !options.admit_zero)
            return;
        const Int ten_l = 10 * lambda;
        if (ten_l + 21 > P || ten_l >= P)
            return;
        const Int rest = P - 21 - ten_l;
        const Int denom = P - ten_l;
        if (form == 1) {
            if (rest % 30 != 0 || (3 * lambda) % denom != 0)
                return;
            out.push_back({static_cast<Natural>(lambda), 1,
                           Representation(p, kSevenThree, static_cast<Natural>(rest / 30),
                                          static_cast<Natural>(3 * lambda / denom))});
        } else {
            if (rest % 70 != 0 || (7 * lambda) % denom != 0)
                return;
            out.push_back({static_cast<Natural>(lambda), 2,
                           Representation(p, kSevenThree, static_cast<Natural>(7 * lambda / denom),
                                          static_cast<Natural>(rest / 70))});
        }
    };
    // Form 1 has b = 3L/(p - 10L), i.e. L = b p / (10b + 3); 10a + 7 >= 7 bounds b.
    for (Int b = 0; 7 * (10 * b + 3) <= P; ++b) {
        const Int g = 10 * b + 3;
        if ((b * P) % g == 0)
            try_lambda(b * P / g, 1);
    }
    // Form 2 has a = 7L/(p - 10L), i.e. L = a p / (10a + 7).
    for (Int a = 0; 3 * (10 * a + 7) <= P; ++a) {
        const Int g = 10 * a + 7;
        if ((a * P) % g == 0)
            try_lambda(a * P / g, 2);
    }
}

void sort_lambda(std::vector<LambdaWitness>& ws)
{
    std::sort(ws.begin(), ws.end(), [](const LambdaWitness& x, const LambdaWitness& y) {
        return std::tie(x.form_index, x.lambda) < std::tie(y.form_index, y.lambda);
    });
    ws.erase(std::unique(ws.begin(), ws.end(),
                         [](const LambdaWitness& x, const LambdaWitness& y) {
                             return x.form_index == y.form_index && x.lambda == y.lambda;
                         }),
             ws.end());
}

} // namespace

void require_ends_in_one(Natural p)
{
    if (p % 10 != 1)
        throw std::invalid_argument("p = " + std::to_string(p) + " does not end in 1");
}

std::string describe(const Form& form)
{
    if (const auto* nc = std::get_if<NonConforming>(&form))
        return nc->zero_case ? "zero" : "nonconforming";
    const auto& pf = std::get<PowerForm>(form);
    const std::string base = pf.tau ? std::to_string(*pf.tau) : "2";
    return "5^" + std::to_string(pf.k) + "*" + base + "^" + std::to_string(pf.j);
}

std::optional<Natural> discriminant_root(Natural p, ResidueCase rcase, Natural d)
{
    const auto k = constants(rcase);
    const Wide t = Wide{d} * 5 + k.offset;
    const Wide target = Wide{k.coefficient} * p;
    if (t * t < target)
        return std::nullopt;
    return is_perfect_square(t * t - target);
}

Natural d_parameter(const Representation& rep) noexcept
{
    if (rep.residue_case().tag() == CaseTag::SevenThree)
        return 7 * rep.a() + 3 * rep.b();
    return rep.a() + rep.b();
}

std::vector<Representation> oracle_representations(Natural p, ResidueCase rcase)
{
    require_ends_in_one(p);
    std::vector<Representation> reps;
    // p is odd and coprime to 5, so divisors end in 1, 3, 7 or 9.
    static constexpr std::array<Natural, 4> kStep{2, 4, 2, 2};  // 1 -> 3 -> 7 -> 9 -> 11
    std::size_t phase = 0;
    for (Natural u = 1; Wide{u} * u <= p; u += kStep[phase], phase = (phase + 1) % 4) {
        if (p % u != 0)
            continue;
        const Natural v = p / u;
        push_rep(reps, p, rcase, u, v);
        if (!rcase.symmetric() && u != v)
            push_rep(reps, p, rcase, v, u);
    }
    sort_unique(reps);
    return reps;
}

DInterval d_bounds(Natural p, ResidueCase rcase, RangeMode mode)
{
    require_ends_in_one(p);
    const Natural lo = discriminant_lower(p, rcase);
    std::optional<Natural> hi;
    switch (rcase.tag()) {
    case CaseTag::SevenThree:
        if (mode == RangeMode::Printed) {
            // 0.021 p - 7.9 = (21p - 7900) / 1000
            const Wide num = Wide{p} * 21;
            if (num >= 7900)
                hi = narrow((num - 7900) / 1000);
        } else if (Wide{p} * 7 >= 147) {
            hi = narrow((Wide{p} * 7 - 147) / 30);
        }
        break;
    case CaseTag::NineNine:
        if (p >= 81)
            hi = (p - 81) / 90;
        break;
    case CaseTag::OneOne:
        hi = (p - 1) / 10;
        break;
    }
    return make_interval(lo, hi);
}

Form form_classify(Natural s, Parity parity)
{
    if (s == 0)
        return NonConforming{true};
    Natural k = 0;
    while (s % 5 == 0) {
        s /= 5;
        ++k;
    }
    if (k == 0)
        return NonConforming{};
    if (parity == Parity::Even) {
        Natural j = 0;
        while (s % 2 == 0) {
            s /= 2;
            ++j;
        }
        if (j == 0 || s != 1)
            return NonConforming{};
        return PowerForm{k, j, std::nullopt};
    }
    if (s % 2 == 0)
        return NonConforming{};
    if (s == 1)
        return PowerForm{k, 1, Natural{1}};
    // Largest j such that s is a perfect j-th power.
    for (Natural j = 63; j >= 2; --j) {
        const auto root = static_cast<Natural>(std::llround(std::pow(static_cast<double>(s), 1.0 / static_cast<double>(j))));
        for (Natural cand = root > 1 ? root - 1 : 1; cand <= root + 1; ++cand) {
            if (cand < 2)
                continue;
            Wide acc = 1;
            Natural e = 0;
            while (e < j && acc <= s) {
                acc *= cand;
                ++e;
            }
            if (e == j && acc == s)
                return PowerForm{k, j, cand};
        }
    }
    return PowerForm{k, 1, s};
}

DSearchWitness witness_for(const Representation& rep)
{
    const Natural d = d_parameter(rep);
    const auto s = discriminant_root(rep.p(), rep.residue_case(), d);
    if (!s)
        throw std::logic_error("representation without square discriminant: p = " + std::to_string(rep.p()));
    return {d, *s, rep, form_classify(*s, d % 2 == 0 ? Parity::Even : Parity::Odd)};
}

std::vector<DSearchWitness> dsearch_representations(Natural p, ResidueCase rcase, RangeMode mode)
{
    require_ends_in_one(p);
    std::vector<DSearchWitness> out;
    const DInterval range = d_bounds(p, rcase, mode);
    if (range.empty())
        return out;
    checked_t_max(range, rcase);

    const auto k = constants(rcase);
    const Natural kp = k.coefficient * p;
    const auto& filter = square_filter();
    // A solution has s = 5|...|, so the discriminant is 0 mod 25. That pins d mod 5.
    for (Natural residue = 0; residue < 5; ++residue) {
        const Natural t_mod = (5 * residue + k.offset) % 25;
        if ((t_mod * t_mod + 25 * 25 - kp % 25) % 25 != 0)
            continue;
        Natural d = range.lo + (residue + 5 - range.lo % 5) % 5;
        if (d > range.hi)
            continue;
        Natural t = 5 * d + k.offset;
        Natural r = t * t - kp;
        for (;;) {
            if (const auto s = filter.root(r))
                reconstruct(p, rcase, d, *s, out);
            if (range.hi - d < 5)
                break;
            d += 5;
            // (t + 25)^2 - t^2 = 50t + 625
            r += 50 * t + 625;
            t += 25;
        }
    }
    sort_witnesses(out);
    return out;
}

std::vector<LambdaWitness> lambda_representations(Natural p, const LambdaOptions& options)
{
    require_ends_in_one(p);
    std::vector<LambdaWitness> out;
    if (p < (Natural{1} << 31))
        lambda_by_inversion<Natural>(p, options, out);
    else
        lambda_by_inversion<Wide>(p, options, out);
    sort_lambda(out);
    return out;
}

std::vector<Representation> representations_of(const std::vector<DSearchWitness>& ws)
{
    std::vector<Representation> reps;
    for (const auto& w : ws)
        reps.push_back(w.rep);
    sort_unique(reps);
    return reps;
}

std::vector<Representation> representations_of(const std::vector<LambdaWitness>& ws)
{
    std::vector<Representation> reps;
    for (const auto& w : ws)
        reps.push_back(w.rep);
    sort_unique(reps);
    return reps;
}

namespace reference {

std::vector<Representation> oracle_naive(Natural p, ResidueCase rcase)
{
    require_ends_in_one(p);
    std::vector<Representation> reps;
    for (Natural u = rcase.m(); u <= p; u += 10) {
        if (p % u != 0)
            continue;
        const Natural v = p / u;
        if (v % 10 != rcase.n())
            continue;
        if (rcase.symmetric() && u > v)
            continue;
        reps.emplace_back(p, rcase, (u - rcase.m()) / 10, (v - rcase.n()) / 10);
    }
    return reps;
}

std::vector<DSearchWitness> dsearch_plain(Natural p, ResidueCase rcase, RangeMode mode)
{
    require_ends_in_one(p);
    std::vector<DSearchWitness> out;
    const DInterval range = d_bounds(p, rcase, mode);
    if (range.empty())
        return out;
    for (Natural d = range.lo; d <= range.hi; ++d)
        if (const auto s = discriminant_root(p, rcase, d))
            reconstruct(p, rcase, d, *s, out);
    sort_witnesses(out);
    return out;
}

std::vector<LambdaWitness> lambda_scan(Natural p, const LambdaOptions& options)
{
    require_ends_in_one(p);
    std::vector<LambdaWitness> out;
    for (Natural lambda = options.admit_zero ? 0 : 1; 10 * lambda < p; ++lambda) {
        const Natural denom = p - 10 * lambda;
        if (10 * lambda + 21 > p)
            break;
        const Natural rest = p - 21 - 10 * lambda;
        if (rest % 30 == 0 && (3 * lambda) % denom == 0)
            out.push_back({lambda, 1, Representation(p, kSevenThree, rest / 30, 3 * lambda / denom)});
        if (rest % 70 == 0 && (7 * lambda) % denom == 0)
            out.push_back({lambda, 2, Representation(p, kSevenThree, 7 * lambda / denom, rest / 70)});
    }
    sort_lambda(out);
    return out;
}

} // namespace reference

} // namespace dcf
