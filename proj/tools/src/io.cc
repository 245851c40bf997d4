#include "dantzig/cli/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "dantzig/errors.h"

namespace dantzig::cli {
namespace {

std::string Trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

// Splits one CSV record; fields may be wrapped in double quotes with "" as an
// escaped quote.
std::vector<std::string> SplitRecord(const std::string& line, std::size_t number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (was_quoted && c != ',') {
      if (c != ' ' && c != '\t' && c != '\r') {
        Fail(number, "text after a closing quote");
      }
    } else if (c == '"' && Trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : Trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) Fail(number, "unterminated quoted field");
  fields.push_back(was_quoted ? field : Trim(field));
  return fields;
}

double ParseNumber(const std::string& text, std::size_t line,
                   const std::string& column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    Fail(line, "column '" + column + "': '" + text + "' is not a number");
  }
  if (!std::isfinite(value)) {
    Fail(line, "column '" + column + "': non-finite value");
  }
  return value;
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Dataset ReadCsvDataset(std::istream& in, const std::string& response) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++number;
    if (!Trim(line).empty()) {
      header = SplitRecord(line, number);
      break;
    }
  }
  if (header.empty()) throw DataError("empty input: no header row");

  std::set<std::string> seen;
  std::ptrdiff_t response_column = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j].empty()) Fail(number, "empty column name");
    if (!seen.insert(header[j]).second) {
      Fail(number, "duplicate column '" + header[j] + "'");
    }
    if (header[j] == response) response_column = static_cast<std::ptrdiff_t>(j);
  }
  if (response_column < 0) {
    Fail(number, "no response column '" + response + "'");
  }
  if (header.size() < 2) Fail(number, "no regressor columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitRecord(line, number);
    if (fields.size() != header.size()) {
      Fail(number, "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row[j] = ParseNumber(fields[j], number, header[j]);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(header.size()) - 1;
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index c = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (static_cast<std::ptrdiff_t>(j) == response_column) {
        y(i) = rows[i][j];
      } else {
        x(i, c++) = rows[i][j];
      }
    }
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset ReadCsvDatasetFile(const std::string& path, const std::string& response) {
  std::ifstream in = OpenOrThrow(path);
  return ReadCsvDataset(in, response);
}

GramMatrix ReadPsi(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) row.push_back(ParseNumber(token, number, std::to_string(row.size() + 1)));
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      Fail(number, "expected " + std::to_string(rows.front().size()) +
                       " entries, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty Psi matrix");
  const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
  if (static_cast<Eigen::Index>(rows.front().size()) != p) {
    throw DataError("Psi matrix is " + std::to_string(p) + " x " +
                    std::to_string(rows.front().size()) + ", not square");
  }
  GramMatrix psi;
  psi.psi.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) psi.psi(i, j) = rows[i][j];
  }
  const double scale = psi.psi.cwiseAbs().maxCoeff();
  if ((psi.psi - psi.psi.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale)) {
    throw DataError("Psi matrix is not symmetric");
  }
  return psi;
}

GramMatrix ReadPsiFile(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadPsi(in);
}

}  // namespace dantzig::cli
