#ifndef SLE_DATASET_HPP
#define SLE_DATASET_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sle/text.hpp"

namespace sle {

/// One patient row: id, binary label, fixed-width numeric features, free text.
struct DatasetRecord {
  std::string id;
  std::optional<int> label;
  std::vector<double> numeric;
  std::string text;
};

struct IngestOptions {
  /// Abort on the first bad row instead of skipping it.
  bool strict = false;
  /// Rows without a label are rejected; prediction inputs may turn this off.
  bool require_label = true;
};

struct IngestResult {
  std::vector<DatasetRecord> records;
  std::vector<std::string> diagnostics;  // "line N: reason" per skipped row
  std::size_t numeric_width = 0;
};

/// Splits CSV text into records of fields (RFC 4180 quoting, quoted newlines
/// allowed). Each record carries the 1-based line it starts on.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Header: id,label,<numeric columns...>,text. Throws SchemaError on a bad
/// header and IoError when the file cannot be read.
IngestResult ingest_csv(const std::string& path, const IngestOptions& opts = {});
IngestResult ingest_csv_text(std::string_view text, const IngestOptions& opts = {});

/// Writes records in the ingest schema; numeric columns are named f1..fn.
void write_dataset_csv(std::ostream& out, const std::vector<DatasetRecord>& records);

/// Column-oriented view used by training and cross-validation.
struct Dataset {
  std::vector<std::string> ids;
  std::vector<int> labels;
  Eigen::MatrixXd numeric;
  std::vector<Document> documents;

  std::size_t size() const { return ids.size(); }
};

/// Normalizes every text; texts that normalize to nothing become sentinel
/// documents. Missing labels are stored as -1.
Dataset make_dataset(const std::vector<DatasetRecord>& records, const NormalizationConfig& norm);

}  // namespace sle

#endif  // SLE_DATASET_HPP
