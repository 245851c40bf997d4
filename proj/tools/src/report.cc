#include "dantzig/cli/report.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace dantzig::cli {
namespace {

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

void CheckName(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty report name");
  for (char c : name) {
    if (!IsNameChar(c)) {
      throw std::invalid_argument("invalid report name '" + std::string(name) +
                                  "'");
    }
  }
}

std::string Quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("report line " + std::to_string(line) + ": " +
                              what);
}

// Reads one value token starting at text[pos]; advances pos past it.
Value ReadValue(std::string_view text, std::size_t& pos, std::size_t line) {
  if (pos >= text.size()) Fail(line, "missing value");
  if (text[pos] == '"') {
    std::string out;
    ++pos;
    while (true) {
      if (pos >= text.size()) Fail(line, "unterminated string");
      const char c = text[pos++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos >= text.size()) Fail(line, "dangling escape");
      const char e = text[pos++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: Fail(line, std::string("unknown escape \\") + e);
      }
    }
    return out;
  }
  std::size_t end = pos;
  while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
  const std::string_view token = text.substr(pos, end - pos);
  pos = end;
  if (token == "true") return true;
  if (token == "false") return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  bool integral = !token.empty();
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && c == '-'))) {
      integral = false;
    }
  }
  if (integral && token != "-") {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) Fail(line, "bad integer '" + std::string(token) + "'");
    return value;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    Fail(line, "bad value '" + std::string(token) + "'");
  }
  return value;
}

void SkipBlanks(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
}

std::string_view Trim(std::string_view text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

}  // namespace

bool SameValue(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    if (std::isnan(*x) || std::isnan(y)) return std::isnan(*x) && std::isnan(y);
    return std::memcmp(x, &y, sizeof y) == 0;
  }
  return a == b;
}

std::string FormatReal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  std::string out = buffer;
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string FormatValue(const Value& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&value)) return FormatReal(*d);
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  return Quote(std::get<std::string>(value));
}

bool Entry::operator==(const Entry& other) const {
  return key == other.key && note == other.note && SameValue(value, other.value);
}

bool Table::operator==(const Table& other) const {
  if (columns != other.columns || rows.size() != other.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != other.rows[i].size()) return false;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (!SameValue(rows[i][j], other.rows[i][j])) return false;
    }
  }
  return true;
}

Section& Section::Add(std::string key, Value value, std::string note) {
  CheckName(key);
  if (note.find('\n') != std::string::npos) {
    throw std::invalid_argument("report note spans lines");
  }
  entries.push_back({std::move(key), std::move(value), std::string(Trim(note))});
  return *this;
}

const Entry* Section::Find(std::string_view key) const {
  for (const Entry& entry : entries) {
    if (entry.key == key) return &entry;
  }
  return nullptr;
}

Section& Report::AddSection(std::string name) {
  CheckName(name);
  sections.push_back({});
  sections.back().name = std::move(name);
  return sections.back();
}

Section& Report::AddTable(std::string name, std::vector<std::string> columns) {
  CheckName(name);
  if (columns.empty()) throw std::invalid_argument("table without columns");
  for (const std::string& column : columns) CheckName(column);
  Section& section = AddSection(std::move(name));
  section.is_table = true;
  section.table.columns = std::move(columns);
  return section;
}

const Section* Report::Find(std::string_view name) const {
  for (const Section& section : sections) {
    if (section.name == name) return &section;
  }
  return nullptr;
}

const Value& Report::Get(std::string_view section, std::string_view key) const {
  const Section* found = Find(section);
  const Entry* entry = found ? found->Find(key) : nullptr;
  if (!entry) {
    throw std::out_of_range("report has no " + std::string(section) + "." +
                            std::string(key));
  }
  return entry->value;
}

std::string Serialize(const Report& report) {
  std::string out = "# dantzig report\n";
  for (const Section& section : report.sections) {
    out += '\n';
    if (section.is_table) {
      out += "[[" + section.name + "]]\n";
      for (std::size_t j = 0; j < section.table.columns.size(); ++j) {
        out += (j ? " " : "") + section.table.columns[j];
      }
      out += '\n';
      for (const auto& row : section.table.rows) {
        if (row.size() != section.table.columns.size()) {
          throw std::invalid_argument("table row width mismatch in " +
                                      section.name);
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
          out += (j ? " " : "") + FormatValue(row[j]);
        }
        out += '\n';
      }
      continue;
    }
    out += "[" + section.name + "]\n";
    for (const Entry& entry : section.entries) {
      out += entry.key + " = " + FormatValue(entry.value);
      if (!entry.note.empty()) out += " ; " + entry.note;
      out += '\n';
    }
  }
  return out;
}

Report ParseReport(std::string_view text) {
  Report report;
  Section* current = nullptr;
  bool need_columns = false;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    if (line.size() >= 4 && line.substr(0, 2) == "[[" &&
        line.substr(line.size() - 2) == "]]") {
      const std::string name(line.substr(2, line.size() - 4));
      try {
        CheckName(name);
      } catch (const std::invalid_argument& e) {
        Fail(line_number, e.what());
      }
      report.sections.push_back({});
      current = &report.sections.back();
      current->name = name;
      current->is_table = true;
      need_columns = true;
    } else if (line.front() == '[' && line.back() == ']') {
      const std::string name(line.substr(1, line.size() - 2));
      try {
        CheckName(name);
      } catch (const std::invalid_argument& e) {
        Fail(line_number, e.what());
      }
      report.sections.push_back({});
      current = &report.sections.back();
      current->name = name;
      need_columns = false;
    } else if (!current) {
      Fail(line_number, "content before the first section");
    } else if (current->is_table && need_columns) {
      std::size_t pos = 0;
      while (pos < line.size()) {
        std::size_t stop = pos;
        while (stop < line.size() && line[stop] != ' ' && line[stop] != '\t') ++stop;
        const std::string column(line.substr(pos, stop - pos));
        if (!std::all_of(column.begin(), column.end(), IsNameChar)) {
          Fail(line_number, "bad column name '" + column + "'");
        }
        current->table.columns.push_back(column);
        pos = stop;
        SkipBlanks(line, pos);
      }
      need_columns = false;
    } else if (current->is_table) {
      std::vector<Value> row;
      std::size_t pos = 0;
      while (pos < line.size()) {
        row.push_back(ReadValue(line, pos, line_number));
        SkipBlanks(line, pos);
      }
      if (row.size() != current->table.columns.size()) {
        Fail(line_number, "expected " +
                              std::to_string(current->table.columns.size()) +
                              " values, found " + std::to_string(row.size()));
      }
      current->table.rows.push_back(std::move(row));
    } else {
      const std::size_t eq = line.find(" = ");
      if (eq == std::string_view::npos) Fail(line_number, "expected 'key = value'");
      Entry entry;
      entry.key = std::string(Trim(line.substr(0, eq)));
      if (entry.key.empty() ||
          !std::all_of(entry.key.begin(), entry.key.end(), IsNameChar)) {
        Fail(line_number, "bad key '" + entry.key + "'");
      }
      std::size_t pos = eq + 3;
      SkipBlanks(line, pos);
      entry.value = ReadValue(line, pos, line_number);
      SkipBlanks(line, pos);
      if (pos < line.size()) {
        if (line[pos] != ';') Fail(line_number, "trailing text after value");
        entry.note = std::string(Trim(line.substr(pos + 1)));
      }
      current->entries.push_back(std::move(entry));
    }
    if (end == text.size()) break;
  }
  if (need_columns) Fail(line_number, "table without a column line");
  return report;
}

Report WithoutTimings(Report report) {
  std::erase_if(report.sections,
                [](const Section& section) { return section.name == "timings"; });
  return report;
}

}  // namespace dantzig::cli
