/*
 * ordqual - calibrated one-dimensional quality measures from ordinal
 * classifier probabilities.
 *
 * Copyright 2026 the ordqual authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ordqual/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace fs = std::filesystem;

namespace ordqual {

namespace {

constexpr std::array<std::string_view, 8> kDatasetColumns = {
    "id", "p_stub", "p_start", "p_c", "p_b", "p_ga", "p_fa", "label"};

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  double out = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t out = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return out;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (in_quotes) {
    raise(Errc::IoFailure, "unterminated quote on line " + std::to_string(line_no));
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(Errc::IoFailure, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) {
    if (current.back() == '\r') current.pop_back();
    lines.push_back(std::move(current));
  }
  return lines;
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      raise(Errc::IoFailure, "cannot open " + tmp.string() + " for writing");
    }
    out << content;
    if (!out) {
      raise(Errc::IoFailure, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    raise(Errc::IoFailure, "rename to " + path.string() + " failed: " + ec.message());
  }
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

// Collects per-row failures; in strict mode the read fails afterwards with an
// aggregate message carrying the first row's error code.
class RowErrorCollector {
public:
  explicit RowErrorCollector(ReadMode mode) : mode_(mode) {}

  void add(std::size_t row_no, Errc code, const std::string& message) {
    if (!first_code_) first_code_ = code;
    messages_.push_back("row " + std::to_string(row_no) + ": " + message);
  }

  void finish(ReadReport& report) {
    report.rows_dropped = messages_.size();
    report.row_errors = messages_;
    if (mode_ == ReadMode::Strict && !messages_.empty()) {
      std::string aggregate = std::to_string(messages_.size()) + " invalid row(s): ";
      const std::size_t shown = std::min<std::size_t>(messages_.size(), 10);
      for (std::size_t i = 0; i < shown; ++i) {
        if (i) aggregate += "; ";
        aggregate += messages_[i];
      }
      if (messages_.size() > shown) {
        aggregate += "; and " + std::to_string(messages_.size() - shown) + " more";
      }
      raise(*first_code_, aggregate);
    }
  }

private:
  ReadMode mode_;
  std::vector<std::string> messages_;
  std::optional<Errc> first_code_;
};

DatasetReadResult read_dataset_csv(const fs::path& path, ReadMode mode) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    raise(Errc::MissingColumn, "empty file: " + path.string());
  }
  const auto header = split_csv_line(lines[0], 1);
  std::array<std::size_t, 8> column_index{};
  for (std::size_t c = 0; c < kDatasetColumns.size(); ++c) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == kDatasetColumns[c]) {
        column_index[c] = i;
        found = true;
        break;
      }
    }
    if (!found) {
      raise(Errc::MissingColumn,
            "column '" + std::string(kDatasetColumns[c]) + "' missing in " + path.string());
    }
  }

  DatasetReadResult result;
  result.dataset.provenance = path.string();
  RowErrorCollector errors(mode);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t row_no = i + 1;  // 1-based file line
    const auto fields = split_csv_line(lines[i], row_no);
    if (fields.size() < header.size()) {
      errors.add(row_no, Errc::MissingColumn, "expected " + std::to_string(header.size()) +
                                                  " fields, got " +
                                                  std::to_string(fields.size()));
      continue;
    }
    RawRow raw;
    raw.id = fields[column_index[0]];
    bool ok = true;
    for (int k = 0; k < kNumClasses; ++k) {
      const auto& text = fields[column_index[static_cast<std::size_t>(k + 1)]];
      const auto value = parse_double(text);
      if (!value) {
        errors.add(row_no, Errc::IoFailure, "bad number '" + text + "'");
        ok = false;
        break;
      }
      raw.probs[static_cast<std::size_t>(k)] = *value;
    }
    if (!ok) continue;
    raw.label = fields[column_index[7]];
    try {
      result.dataset.instances.push_back(validate_instance(raw));
    } catch (const Error& e) {
      errors.add(row_no, e.code(), e.what());
    }
  }
  errors.finish(result.report);
  result.report.rows_accepted = result.dataset.size();
  result.report.class_counts = result.dataset.class_counts();
  return result;
}

DatasetReadResult read_dataset_jsonl(const fs::path& path, ReadMode mode) {
  const auto lines = read_lines(path);
  DatasetReadResult result;
  result.dataset.provenance = path.string();
  RowErrorCollector errors(mode);
  const std::array<std::string_view, 6> prob_keys = {"p_stub", "p_start", "p_c",
                                                     "p_b",    "p_ga",    "p_fa"};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t row_no = i + 1;
    nlohmann::json row = nlohmann::json::parse(lines[i], nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      errors.add(row_no, Errc::IoFailure, "invalid JSON object");
      continue;
    }
    RawRow raw;
    bool ok = true;
    if (!row.contains("id") || !row["id"].is_string()) {
      errors.add(row_no, Errc::MissingColumn, "missing string key 'id'");
      continue;
    }
    raw.id = row["id"].get<std::string>();
    for (int k = 0; k < kNumClasses && ok; ++k) {
      const auto key = std::string(prob_keys[static_cast<std::size_t>(k)]);
      if (!row.contains(key) || !row[key].is_number()) {
        errors.add(row_no, Errc::MissingColumn, "missing numeric key '" + key + "'");
        ok = false;
        break;
      }
      raw.probs[static_cast<std::size_t>(k)] = row[key].get<double>();
    }
    if (!ok) continue;
    if (!row.contains("label") || !row["label"].is_string()) {
      errors.add(row_no, Errc::MissingColumn, "missing string key 'label'");
      continue;
    }
    raw.label = row["label"].get<std::string>();
    try {
      result.dataset.instances.push_back(validate_instance(raw));
    } catch (const Error& e) {
      errors.add(row_no, e.code(), e.what());
    }
  }
  errors.finish(result.report);
  result.report.rows_accepted = result.dataset.size();
  result.report.class_counts = result.dataset.class_counts();
  return result;
}

nlohmann::ordered_json finite_array(const double* data, int n, const char* what) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(data[i])) {
      raise(Errc::IoFailure, std::string("non-finite value in ") + what);
    }
    arr.push_back(data[i]);
  }
  return arr;
}

}  // namespace

DatasetReadResult read_dataset(const fs::path& path, DatasetFormat format,
                               ReadMode mode) {
  return format == DatasetFormat::Csv ? read_dataset_csv(path, mode)
                                      : read_dataset_jsonl(path, mode);
}

void write_dataset_csv(const Dataset& dataset, const fs::path& path) {
  std::string out = "id,p_stub,p_start,p_c,p_b,p_ga,p_fa,label\n";
  for (const auto& inst : dataset.instances) {
    out += csv_field(inst.id);
    for (int k = 0; k < kNumClasses; ++k) {
      out += ',';
      out += format_double(inst.probs[k]);
    }
    out += ',';
    out += to_string(inst.label);
    out += '\n';
  }
  atomic_write(path, out);
}

PopulationCounts read_population(const fs::path& path) {
  const auto lines = read_lines(path);
  PopulationCounts counts;
  std::array<bool, kNumClasses> seen{};
  bool seen_unit = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::IoFailure, "expected 'key = value' on line " + std::to_string(i + 1));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "unit") {
      counts.unit = value;
      seen_unit = true;
      continue;
    }
    bool matched = false;
    for (int k = 0; k < kNumClasses; ++k) {
      if (key != to_string(quality_class_from_code(k))) continue;
      matched = true;
      const auto idx = static_cast<std::size_t>(k);
      if (seen[idx]) {
        raise(Errc::IoFailure, "duplicate class " + key);
      }
      const auto parsed = parse_int(value);
      if (!parsed) {
        raise(Errc::IoFailure, "bad count '" + value + "' for class " + key);
      }
      if (*parsed < 0) {
        raise(Errc::NegativeCount, "class " + key + " has negative count");
      }
      counts.counts[idx] = *parsed;
      seen[idx] = true;
      break;
    }
    if (!matched) {
      raise(Errc::IoFailure, "unknown key '" + key + "'");
    }
  }
  for (int k = 0; k < kNumClasses; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      raise(Errc::MissingClass, "class " +
                                    std::string(to_string(quality_class_from_code(k))) +
                                    " missing (zero counts must be explicit)");
    }
  }
  if (!seen_unit) counts.unit = "custom";
  return counts;
}

std::string format_weight_table(
    const WeightTable& table, const std::array<std::int64_t, kNumClasses>& sample_counts) {
  std::string out = "unit = " + table.unit + "\n";
  for (int k = 0; k < kNumClasses; ++k) {
    out += std::string(to_string(quality_class_from_code(k))) + " = " +
           format_double(table.weights[static_cast<std::size_t>(k)]) + "\n";
  }
  for (int k = 0; k < kNumClasses; ++k) {
    out += "sample_" + std::string(to_string(quality_class_from_code(k))) + " = " +
           std::to_string(sample_counts[static_cast<std::size_t>(k)]) + "\n";
  }
  return out;
}

void write_model(const ModelFile& file, const fs::path& path) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = file.schema_version;
  doc["unit"] = file.unit;
  nlohmann::ordered_json pca;
  pca["mean"] = finite_array(file.pca.mean.data(), 6, "pca.mean");
  nlohmann::ordered_json loadings = nlohmann::ordered_json::array();
  for (int r = 0; r < 5; ++r) {
    const Vector6 row = file.pca.loadings.row(r).transpose();
    loadings.push_back(finite_array(row.data(), 6, "pca.loadings"));
  }
  pca["loadings"] = loadings;
  doc["pca"] = pca;
  doc["coefficients"] = finite_array(file.model.coefficients.data(), 5, "coefficients");
  doc["thresholds"] = finite_array(file.model.thresholds.data(), 5, "thresholds");
  nlohmann::ordered_json covariance = nlohmann::ordered_json::array();
  for (int r = 0; r < 10; ++r) {
    const Vector10 row = file.model.covariance.row(r).transpose();
    covariance.push_back(finite_array(row.data(), 10, "covariance"));
  }
  doc["covariance"] = covariance;
  nlohmann::ordered_json fit;
  if (!std::isfinite(file.model.loglik) || !std::isfinite(file.model.n_effective) ||
      !std::isfinite(file.model.grad_norm)) {
    raise(Errc::IoFailure, "non-finite fit metadata");
  }
  fit["loglik"] = file.model.loglik;
  fit["n"] = file.model.n_effective;
  fit["converged"] = file.model.converged;
  fit["grad_norm"] = file.model.grad_norm;
  doc["fit"] = fit;
  atomic_write(path, doc.dump(2) + "\n");
}

ModelFile read_model(const fs::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    raise(Errc::IoFailure, "not a JSON object: " + path.string());
  }
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    raise(Errc::IoFailure, "missing schema_version in " + path.string());
  }
  if (doc["schema_version"].get<int>() != kModelSchemaVersion) {
    raise(Errc::SchemaVersionMismatch,
          "unsupported schema version " + std::to_string(doc["schema_version"].get<int>()));
  }
  const auto need = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) {
      raise(Errc::IoFailure, std::string("missing key '") + key + "'");
    }
    return doc[key];
  };
  const auto read_vector = [](const nlohmann::json& arr, double* out, std::size_t n,
                              const char* what) {
    if (!arr.is_array() || arr.size() != n) {
      raise(Errc::IoFailure, std::string("expected array of ") + std::to_string(n) +
                                 " for " + what);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = arr[i].get<double>();
  };

  ModelFile file;
  file.schema_version = kModelSchemaVersion;
  file.unit = need("unit").get<std::string>();
  const auto& pca = need("pca");
  read_vector(pca.at("mean"), file.pca.mean.data(), 6, "pca.mean");
  if (!pca.contains("loadings") || !pca["loadings"].is_array() ||
      pca["loadings"].size() != 5) {
    raise(Errc::IoFailure, "expected 5 loading rows");
  }
  for (int r = 0; r < 5; ++r) {
    Vector6 row;
    read_vector(pca["loadings"][static_cast<std::size_t>(r)], row.data(), 6,
                "pca.loadings row");
    file.pca.loadings.row(r) = row.transpose();
  }
  file.pca.eigenvalues.setZero();
  read_vector(need("coefficients"), file.model.coefficients.data(), 5, "coefficients");
  read_vector(need("thresholds"), file.model.thresholds.data(), 5, "thresholds");
  const auto& covariance = need("covariance");
  if (!covariance.is_array() || covariance.size() != 10) {
    raise(Errc::IoFailure, "expected 10 covariance rows");
  }
  for (int r = 0; r < 10; ++r) {
    Vector10 row;
    read_vector(covariance[static_cast<std::size_t>(r)], row.data(), 10,
                "covariance row");
    file.model.covariance.row(r) = row.transpose();
  }
  const auto& fit = need("fit");
  file.model.loglik = fit.at("loglik").get<double>();
  file.model.n_effective = fit.at("n").get<double>();
  file.model.converged = fit.at("converged").get<bool>();
  file.model.grad_norm = fit.at("grad_norm").get<double>();
  return file;
}

void write_scores_csv(std::span<const ScoreRecord> records, const fs::path& path) {
  std::string out =
      "id,phi,ci_low,ci_high,phi_norm,predicted_class,mpqc,evenly_spaced\n";
  for (const auto& rec : records) {
    out += csv_field(rec.id);
    out += ',' + format_double(rec.phi);
    out += ',' + format_double(rec.ci_low);
    out += ',' + format_double(rec.ci_high);
    out += ',' + format_double(rec.phi_norm);
    out += ',' + std::string(to_string(rec.predicted_class));
    out += ',' + std::string(to_string(rec.mpqc));
    out += ',' + format_double(rec.evenly_spaced);
    out += '\n';
  }
  atomic_write(path, out);
}

std::vector<ScoreRecord> read_scores_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    raise(Errc::MissingColumn, "empty file: " + path.string());
  }
  const auto header = split_csv_line(lines[0], 1);
  const std::array<std::string_view, 8> expected = {
      "id",       "phi",  "ci_low", "ci_high", "phi_norm", "predicted_class",
      "mpqc",     "evenly_spaced"};
  std::array<std::size_t, 8> index{};
  for (std::size_t c = 0; c < expected.size(); ++c) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == expected[c]) {
        index[c] = i;
        found = true;
        break;
      }
    }
    if (!found) {
      raise(Errc::MissingColumn,
            "column '" + std::string(expected[c]) + "' missing in " + path.string());
    }
  }
  std::vector<ScoreRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv_line(lines[i], i + 1);
    if (fields.size() < header.size()) {
      raise(Errc::IoFailure, "short row at line " + std::to_string(i + 1));
    }
    const auto number = [&](std::size_t c) {
      const auto v = parse_double(fields[index[c]]);
      if (!v) {
        raise(Errc::IoFailure, "bad number at line " + std::to_string(i + 1));
      }
      return *v;
    };
    ScoreRecord rec;
    rec.id = fields[index[0]];
    rec.phi = number(1);
    rec.ci_low = number(2);
    rec.ci_high = number(3);
    rec.phi_norm = number(4);
    rec.predicted_class = parse_quality_class(fields[index[5]]);
    rec.mpqc = parse_quality_class(fields[index[6]]);
    rec.evenly_spaced = number(7);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_thresholds_csv(const ScoringResult& scoring, const Vector5& thresholds,
                          const fs::path& path) {
  std::string out = "k,alpha,ci_low,ci_high,alpha_norm,ci_norm_low,ci_norm_high\n";
  for (int k = 0; k < 5; ++k) {
    const auto& [lo, hi] = scoring.threshold_intervals[static_cast<std::size_t>(k)];
    out += std::to_string(k + 1);
    out += ',' + format_double(thresholds(k));
    out += ',' + format_double(lo);
    out += ',' + format_double(hi);
    out += ',' + format_double(scoring.thresholds_norm(k));
    out += ',' + format_double(scoring.normalization.apply(lo));
    out += ',' + format_double(scoring.normalization.apply(hi));
    out += '\n';
  }
  atomic_write(path, out);
}

void write_accuracy_csv(std::span<const AccuracyRow> rows, const fs::path& path) {
  std::string out = "unit,model,accuracy,off_by_one\n";
  for (const auto& row : rows) {
    out += csv_field(row.unit) + ',' + csv_field(row.model);
    out += ',' + format_double(row.accuracy);
    out += ',' + format_double(row.off_by_one);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_calibration_csv(std::span<const CalibrationRow> rows, const fs::path& path) {
  std::string out = "unit,model,class,diff,stderr\n";
  for (const auto& row : rows) {
    out += csv_field(row.unit) + ',' + csv_field(row.model);
    out += ',' + std::string(to_string(row.cls));
    out += ',' + format_double(row.diff);
    out += ',' + format_double(row.se);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_series_csv(std::span<const SeriesPoint> points, const fs::path& path) {
  std::string out = "series,x,y,y_low,y_high\n";
  for (const auto& p : points) {
    out += csv_field(p.series);
    out += ',' + format_double(p.x);
    out += ',' + format_double(p.y);
    out += ',' + format_double(p.y_low);
    out += ',' + format_double(p.y_high);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_correlations_csv(const CorrelationMatrix& matrix, const fs::path& path) {
  std::string out = "measure_a,measure_b,pearson_r,kendall_tau\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      const auto& entry = matrix.at(i, j);
      out += csv_field(matrix.names[i]) + ',' + csv_field(matrix.names[j]);
      out += ',' + format_double(entry.pearson);
      out += ',' + format_double(entry.kendall);
      out += '\n';
    }
  }
  atomic_write(path, out);
}

void write_truth_csv(const SynthResult& synth, const fs::path& path) {
  std::string out =
      "id,phi_true,x_0,x_1,x_2,x_3,x_4,"
      "p_true_stub,p_true_start,p_true_c,p_true_b,p_true_ga,p_true_fa\n";
  for (std::size_t i = 0; i < synth.truth.size(); ++i) {
    const auto& truth = synth.truth[i];
    out += csv_field(synth.dataset.instances[i].id);
    out += ',' + format_double(truth.phi);
    for (int j = 0; j < 5; ++j) out += ',' + format_double(truth.x(j));
    for (int k = 0; k < kNumClasses; ++k) {
      out += ',' + format_double(truth.class_probs[static_cast<std::size_t>(k)]);
    }
    out += '\n';
  }
  atomic_write(path, out);
}

}  // namespace ordqual
