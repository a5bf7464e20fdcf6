#include "sle/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sle/error.hpp"

namespace sle {

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false, field_started = false;
  std::size_t line = 1;
  row.line = 1;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) in_quotes = true;
        else field.push_back(c);
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (!field.empty() || !row.fields.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  if (b == e) return false;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

}  // namespace

IngestResult ingest_csv_text(std::string_view text, const IngestOptions& opts) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorKind::SchemaError, "empty CSV, expected a header");
  const auto& header = rows.front().fields;
  if (header.size() < 3 || header[0] != "id" || header[1] != "label" || header.back() != "text")
    throw Error(ErrorKind::SchemaError, "header must be id,label,<numeric columns>,text");

  IngestResult result;
  result.numeric_width = header.size() - 3;
  auto reject = [&](const CsvRow& row, const std::string& why) {
    const std::string msg = "line " + std::to_string(row.line) + ": " + why;
    if (opts.strict) throw Error(ErrorKind::ParseError, msg);
    result.diagnostics.push_back(msg);
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      reject(row, "expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(row.fields.size()));
      continue;
    }
    DatasetRecord rec;
    rec.id = row.fields[0];
    if (rec.id.empty()) {
      reject(row, "missing id");
      continue;
    }
    const auto& label = row.fields[1];
    if (label == "0" || label == "1") {
      rec.label = label == "1" ? 1 : 0;
    } else if (!label.empty() || opts.require_label) {
      reject(row, label.empty() ? "missing label" : "label must be 0 or 1, got \"" + label + "\"");
      continue;
    }
    bool ok = true;
    rec.numeric.resize(result.numeric_width);
    for (std::size_t j = 0; j < result.numeric_width && ok; ++j) {
      if (!parse_double(row.fields[2 + j], rec.numeric[j])) {
        reject(row, "malformed numeric value in column " + header[2 + j]);
        ok = false;
      }
    }
    if (!ok) continue;
    rec.text = row.fields.back();
    result.records.push_back(std::move(rec));
  }
  return result;
}

IngestResult ingest_csv(const std::string& path, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest_csv_text(ss.str(), opts);
}

void write_dataset_csv(std::ostream& out, const std::vector<DatasetRecord>& records) {
  const std::size_t width = records.empty() ? 0 : records.front().numeric.size();
  out << "id,label";
  for (std::size_t j = 0; j < width; ++j) out << ",f" << (j + 1);
  out << ",text\n";
  char buf[64];
  for (const auto& r : records) {
    out << csv_escape(r.id) << ',' << (r.label ? std::to_string(*r.label) : "");
    for (double v : r.numeric) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    // text is always quoted
    std::string quoted = "\"";
    for (char c : r.text) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    out << ',' << quoted << "\"\n";
  }
}

Dataset make_dataset(const std::vector<DatasetRecord>& records, const NormalizationConfig& norm) {
  Dataset ds;
  const std::size_t width = records.empty() ? 0 : records.front().numeric.size();
  ds.numeric.resize(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.numeric.size() != width)
      throw Error(ErrorKind::SchemaError, "record " + r.id + " has inconsistent numeric width");
    ds.ids.push_back(r.id);
    ds.labels.push_back(r.label ? *r.label : -1);
    for (std::size_t j = 0; j < width; ++j)
      ds.numeric(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.numeric[j];
    ds.documents.push_back(normalize_or_sentinel(r.text, norm, r.id));
  }
  return ds;
}

}  // namespace sle
