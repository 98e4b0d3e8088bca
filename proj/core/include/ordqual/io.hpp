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
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ordqual/evaluation.hpp"
#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/scoring.hpp"
#include "ordqual/synth.hpp"
#include "ordqual/types.hpp"
#include "ordqual/weighting.hpp"

namespace ordqual {

/// Dataset files carry the fixed column set
///   id,p_stub,p_start,p_c,p_b,p_ga,p_fa,label
/// as a CSV header or as JSONL keys. All writers are atomic
/// (write-temp-then-rename) and serialize doubles with shortest
/// round-trip decimals, so write-then-read is the identity.

enum class DatasetFormat { Csv, Jsonl };

enum class ReadMode {
  Strict,   ///< any invalid row fails the read, with row numbers aggregated
  Lenient,  ///< invalid rows are dropped and reported
};

struct ReadReport {
  std::size_t rows_accepted = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::string> row_errors;  ///< "row N: message"
  std::array<std::int64_t, kNumClasses> class_counts{};
};

struct DatasetReadResult {
  Dataset dataset;
  ReadReport report;
};

DatasetReadResult read_dataset(const std::filesystem::path& path, DatasetFormat format,
                               ReadMode mode = ReadMode::Strict);

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Population config: flat "key = value" lines with a `unit` name and all six
/// class names mapped to non-negative integers (zeros must be explicit).
PopulationCounts read_population(const std::filesystem::path& path);

/// WeightTable in the population-config key-value format, followed by
/// sample_<Class> count lines.
std::string format_weight_table(const WeightTable& table,
                                const std::array<std::int64_t, kNumClasses>& sample_counts);

/// A fitted model together with the PCA transform and unit it was fit under.
/// PCA eigenvalues are not part of the file schema and read back as zeros.
struct ModelFile {
  int schema_version = 1;
  std::string unit;
  PcaTransform pca;
  FittedOrdinalModel model;
};

inline constexpr int kModelSchemaVersion = 1;

/// Versioned JSON document with keys, in order: schema_version, unit,
/// pca{mean,loadings}, coefficients[5], thresholds[5], covariance[10x10],
/// fit{loglik,n,converged,grad_norm}. Round-trips bit-exactly.
/// Throws IoFailure (including non-finite parameters).
void write_model(const ModelFile& file, const std::filesystem::path& path);

/// Throws SchemaVersionMismatch for unknown versions, IoFailure otherwise.
ModelFile read_model(const std::filesystem::path& path);

/// Score report CSV: id,phi,ci_low,ci_high,phi_norm,predicted_class,mpqc,evenly_spaced.
void write_scores_csv(std::span<const ScoreRecord> records,
                      const std::filesystem::path& path);

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path);

/// Threshold report: k,alpha,ci_low,ci_high,alpha_norm,ci_norm_low,ci_norm_high.
void write_thresholds_csv(const ScoringResult& scoring, const Vector5& thresholds,
                          const std::filesystem::path& path);

struct AccuracyRow {
  std::string unit;
  std::string model;
  double accuracy = 0.0;
  double off_by_one = 0.0;
};

/// Accuracy table CSV: unit,model,accuracy,off_by_one.
void write_accuracy_csv(std::span<const AccuracyRow> rows,
                        const std::filesystem::path& path);

struct CalibrationRow {
  std::string unit;
  std::string model;
  QualityClass cls = QualityClass::Stub;
  double diff = 0.0;
  double se = 0.0;
};

/// Calibration table CSV: unit,model,class,diff,stderr.
void write_calibration_csv(std::span<const CalibrationRow> rows,
                           const std::filesystem::path& path);

/// Plot-ready series CSV: series,x,y,y_low,y_high.
struct SeriesPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double y_low = 0.0;
  double y_high = 0.0;
};

void write_series_csv(std::span<const SeriesPoint> points,
                      const std::filesystem::path& path);

/// Correlation matrix CSV (long form): measure_a,measure_b,pearson_r,kendall_tau.
void write_correlations_csv(const CorrelationMatrix& matrix,
                            const std::filesystem::path& path);

/// Ground-truth sidecar for synthetic datasets:
/// id,phi_true,x_0..x_4,p_true_stub..p_true_fa.
void write_truth_csv(const SynthResult& synth, const std::filesystem::path& path);

}  // namespace ordqual
