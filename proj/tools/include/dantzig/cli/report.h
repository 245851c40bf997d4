#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dantzig::cli {

// A report value. Reals are written with 17 significant digits and always
// carry a '.', an exponent or a non-finite spelling, so they never read back
// as integers.
using Value = std::variant<std::int64_t, double, bool, std::string>;

bool SameValue(const Value& a, const Value& b);
std::string FormatValue(const Value& value);
std::string FormatReal(double value);

// key = value [; note]. The note says which formula the number instantiates.
struct Entry {
  std::string key;
  Value value;
  std::string note;

  bool operator==(const Entry& other) const;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  bool operator==(const Table& other) const;
};

// A section holds either key/value entries ([name]) or one table ([[name]]).
struct Section {
  std::string name;
  bool is_table = false;
  std::vector<Entry> entries;
  Table table;

  bool operator==(const Section& other) const = default;

  Section& Add(std::string key, Value value, std::string note = {});
  const Entry* Find(std::string_view key) const;
};

struct Report {
  std::vector<Section> sections;

  bool operator==(const Report& other) const = default;

  Section& AddSection(std::string name);
  Section& AddTable(std::string name, std::vector<std::string> columns);
  const Section* Find(std::string_view name) const;
  // Looks up section.key; throws std::out_of_range when absent.
  const Value& Get(std::string_view section, std::string_view key) const;
};

std::string Serialize(const Report& report);

// Throws std::invalid_argument with a line number on malformed input.
Report ParseReport(std::string_view text);

// The report without its [timings] section.
Report WithoutTimings(Report report);

}  // namespace dantzig::cli
