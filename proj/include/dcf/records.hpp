#pragma once

/// @file records.hpp
/// Line-delimited JSON (and CSV) persistence of BoundCheck records.
///
/// One object per line with keys in this order:
///   claim, p, case, applicable, gate, verdict, lhs, mid, rhs, exact, witness
/// Integers above 2^53 are written as decimal strings.

#include "dcf/checks.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcf {

/// Malformed JSONL input; carries the 1-based line number.
class RecordParseError : public std::runtime_error {
public:
    RecordParseError(std::size_t line, const std::string& what);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

nlohmann::ordered_json to_json(const BoundCheck& record);
/// Throws std::invalid_argument on schema violations.
BoundCheck from_json(const nlohmann::ordered_json& j);

/// Integer as a JSON number when exactly representable in a double, else as a string.
nlohmann::ordered_json json_natural(Natural v);

/// Single-line serialization without a trailing newline.
std::string to_jsonl_line(const BoundCheck& record);

void write_jsonl(std::ostream& out, const std::vector<BoundCheck>& records);
void write_jsonl(const std::filesystem::path& path, const std::vector<BoundCheck>& records);
std::vector<BoundCheck> read_jsonl(std::istream& in);
/// Throws std::runtime_error naming the path if it cannot be opened.
std::vector<BoundCheck> read_jsonl(const std::filesystem::path& path);

/// Header row with the JSONL key order.
std::string csv_header();
/// Witness flattened to compact JSON in the last column.
std::string to_csv_line(const BoundCheck& record);

} // namespace dcf
