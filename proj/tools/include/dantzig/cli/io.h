#pragma once

#include <istream>
#include <string>

#include "dantzig/data.h"

namespace dantzig::cli {

// CSV with a header row. The `response` column is Y; every other column is a
// regressor, in header order. Throws DataError naming the offending line.
Dataset ReadCsvDataset(std::istream& in, const std::string& response = "y");
Dataset ReadCsvDatasetFile(const std::string& path,
                           const std::string& response = "y");

// Whitespace-separated p x p grid. Throws DataError unless square, finite
// and symmetric to 1e-10 relative.
GramMatrix ReadPsi(std::istream& in);
GramMatrix ReadPsiFile(const std::string& path);

}  // namespace dantzig::cli
