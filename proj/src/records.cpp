#include "dcf/records.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace dcf {

using nlohmann::ordered_json;

namespace {

constexpr Natural kMaxExactDouble = Natural{1} << 53;

Natural parse_natural(const ordered_json& j, const char* key)
{
    if (j.is_number_unsigned())
        return j.get<Natural>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<Natural>(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        std::size_t used = 0;
        if (!s.empty() && s[0] != '-') {
            const unsigned long long v = std::stoull(s, &used, 10);
            if (used == s.size())
                return static_cast<Natural>(v);
        }
    }
    throw std::invalid_argument(std::string("field '") + key + "' is not a natural number");
}

const ordered_json& field(const ordered_json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field '") + key + "'");
    return *it;
}

std::string string_field(const ordered_json& j, const char* key)
{
    const auto& v = field(j, key);
    if (!v.is_string())
        throw std::invalid_argument(std::string("field '") + key + "' is not a string");
    return v.get<std::string>();
}

bool bool_field(const ordered_json& j, const char* key)
{
    const auto& v = field(j, key);
    if (!v.is_boolean())
        throw std::invalid_argument(std::string("field '") + key + "' is not a boolean");
    return v.get<bool>();
}

ExactRatio parse_ratio(const std::string& s)
{
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return ExactRatio{std::stoll(s)};
        return ExactRatio{std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed ratio '" + s + "'");
    }
}

ordered_json witness_json(const CheckWitness& w)
{
    ordered_json j = ordered_json::object();
    j["a"] = json_natural(w.a);
    j["b"] = json_natural(w.b);
    if (w.p_next)
        j["p_next"] = json_natural(*w.p_next);
    if (w.a_next)
        j["a_next"] = json_natural(*w.a_next);
    if (w.b_next)
        j["b_next"] = json_natural(*w.b_next);
    if (w.gate_on_next)
        j["gate_on_next"] = *w.gate_on_next;
    if (w.actual_step)
        j["actual_step"] = *w.actual_step;
    if (w.d)
        j["d"] = json_natural(*w.d);
    if (w.s)
        j["s"] = json_natural(*w.s);
    if (w.form)
        j["form"] = *w.form;
    if (w.x0)
        j["x0"] = w.x0->to_string();
    return j;
}

CheckWitness witness_from(const ordered_json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("witness is not an object");
    CheckWitness w;
    w.a = parse_natural(field(j, "a"), "a");
    w.b = parse_natural(field(j, "b"), "b");
    auto opt_nat = [&](const char* key, std::optional<Natural>& out) {
        if (auto it = j.find(key); it != j.end())
            out = parse_natural(*it, key);
    };
    auto opt_bool = [&](const char* key, std::optional<bool>& out) {
        if (auto it = j.find(key); it != j.end())
            out = bool_field(j, key);
    };
    opt_nat("p_next", w.p_next);
    opt_nat("a_next", w.a_next);
    opt_nat("b_next", w.b_next);
    opt_bool("gate_on_next", w.gate_on_next);
    opt_bool("actual_step", w.actual_step);
    opt_nat("d", w.d);
    opt_nat("s", w.s);
    if (j.contains("form"))
        w.form = string_field(j, "form");
    if (j.contains("x0"))
        w.x0 = parse_ratio(string_field(j, "x0"));
    return w;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

RecordParseError::RecordParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

ordered_json json_natural(Natural v)
{
    if (v <= kMaxExactDouble)
        return v;
    return std::to_string(v);
}

ordered_json to_json(const BoundCheck& r)
{
    ordered_json j = ordered_json::object();
    j["claim"] = std::string(to_string(r.claim));
    j["p"] = json_natural(r.p);
    j["case"] = std::string(r.rcase.id());
    j["applicable"] = r.applicable;
    j["gate"] = r.gate;
    j["verdict"] = std::string(to_string(r.verdict.outcome));
    j["lhs"] = r.lhs.text;
    j["mid"] = r.mid.text;
    j["rhs"] = r.rhs.text;
    j["exact"] = r.exact();
    j["witness"] = r.witness ? witness_json(*r.witness) : ordered_json(nullptr);
    return j;
}

BoundCheck from_json(const ordered_json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("record is not an object");
    BoundCheck r;
    const auto claim = parse_claim(string_field(j, "claim"));
    if (!claim)
        throw std::invalid_argument("unknown claim '" + string_field(j, "claim") + "'");
    r.claim = *claim;
    r.p = parse_natural(field(j, "p"), "p");
    const auto rc = ResidueCase::parse(string_field(j, "case"));
    if (!rc)
        throw std::invalid_argument("unknown case '" + string_field(j, "case") + "'");
    r.rcase = *rc;
    r.applicable = bool_field(j, "applicable");
    r.gate = string_field(j, "gate");
    const auto outcome = parse_outcome(string_field(j, "verdict"));
    if (!outcome)
        throw std::invalid_argument("unknown verdict '" + string_field(j, "verdict") + "'");
    r.verdict.outcome = *outcome;
    r.lhs.text = string_field(j, "lhs");
    r.mid.text = string_field(j, "mid");
    r.rhs.text = string_field(j, "rhs");
    // Per-side exactness is not persisted; a record is either all-exact or not.
    const bool exact = bool_field(j, "exact");
    r.lhs.exact = r.mid.exact = r.rhs.exact = exact;
    if (const auto& w = field(j, "witness"); !w.is_null())
        r.witness = witness_from(w);
    return r;
}

std::string to_jsonl_line(const BoundCheck& record)
{
    return to_json(record).dump();
}

void write_jsonl(std::ostream& out, const std::vector<BoundCheck>& records)
{
    for (const auto& r : records)
        out << to_jsonl_line(r) << '\n';
}

void write_jsonl(const std::filesystem::path& path, const std::vector<BoundCheck>& records)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_jsonl(out, records);
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

std::vector<BoundCheck> read_jsonl(std::istream& in)
{
    std::vector<BoundCheck> records;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty())
            continue;
        try {
            records.push_back(from_json(ordered_json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw RecordParseError(number, e.what());
        } catch (const std::invalid_argument& e) {
            throw RecordParseError(number, e.what());
        }
    }
    return records;
}

std::vector<BoundCheck> read_jsonl(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string() + " for reading");
    return read_jsonl(in);
}

std::string csv_header()
{
    return "claim,p,case,applicable,gate,verdict,lhs,mid,rhs,exact,witness";
}

std::string to_csv_line(const BoundCheck& r)
{
    std::string out;
    out += std::string(to_string(r.claim)) + ',';
    out += std::to_string(r.p) + ',';
    out += std::string(r.rcase.id()) + ',';
    out += std::string(r.applicable ? "true" : "false") + ',';
    out += csv_escape(r.gate) + ',';
    out += std::string(to_string(r.verdict.outcome)) + ',';
    out += csv_escape(r.lhs.text) + ',';
    out += csv_escape(r.mid.text) + ',';
    out += csv_escape(r.rhs.text) + ',';
    out += std::string(r.exact() ? "true" : "false") + ',';
    out += r.witness ? csv_escape(witness_json(*r.witness).dump()) : std::string{};
    return out;
}

} // namespace dcf
