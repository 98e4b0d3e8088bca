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
#include <CLI11.hpp>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "ordqual/evaluation.hpp"
#include "ordqual/io.hpp"
#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/scoring.hpp"
#include "ordqual/synth.hpp"
#include "ordqual/types.hpp"
#include "ordqual/weighting.hpp"

namespace {

using namespace ordqual;

template <std::size_t N>
std::array<double, N> parse_reals(const std::string& text, const std::string& flag) {
  std::array<double, N> out{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto comma = text.find(',', pos);
    const std::string part = comma == std::string::npos ? text.substr(pos)
                                                        : text.substr(pos, comma - pos);
    try {
      out[i] = std::stod(part);
    } catch (const std::exception&) {
      raise(Errc::IoFailure, flag + " expects " + std::to_string(N) +
                                 " comma-separated numbers");
    }
    if (comma == std::string::npos) {
      if (i + 1 != N) {
        raise(Errc::IoFailure, flag + " expects " + std::to_string(N) + " values");
      }
      pos = text.size();
    } else {
      pos = comma + 1;
    }
  }
  if (pos != text.size() && pos != text.size() + 1) {
    raise(Errc::IoFailure, flag + " has trailing values");
  }
  return out;
}

std::array<std::int64_t, kNumClasses> parse_counts(const std::string& text,
                                                   const std::string& flag) {
  const auto reals = parse_reals<kNumClasses>(text, flag);
  std::array<std::int64_t, kNumClasses> out{};
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    out[i] = static_cast<std::int64_t>(reals[i]);
    if (static_cast<double>(out[i]) != reals[i]) {
      raise(Errc::IoFailure, flag + " expects integers");
    }
  }
  return out;
}

PopulationCounts resolve_population(const std::string& unit,
                                    const std::string& population_path) {
  if (unit == "article") return article_population();
  if (unit == "revision") return revision_population();
  if (unit == "class") return quality_class_population();
  if (population_path.empty()) {
    raise(Errc::IoFailure, "--population <file> is required with --unit custom");
  }
  return read_population(population_path);
}

DatasetFormat format_from_name(const std::string& name) {
  return name == "jsonl" ? DatasetFormat::Jsonl : DatasetFormat::Csv;
}

void print_read_report(const ReadReport& report) {
  std::cout << "rows = " << report.rows_accepted << "\n";
  for (int k = 0; k < kNumClasses; ++k) {
    std::cout << to_string(quality_class_from_code(k)) << " = "
              << report.class_counts[static_cast<std::size_t>(k)] << "\n";
  }
  std::cout << "dropped = " << report.rows_dropped << "\n";
  const std::size_t shown = std::min<std::size_t>(report.row_errors.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    std::cout << "# " << report.row_errors[i] << "\n";
  }
  if (report.row_errors.size() > shown) {
    std::cout << "# and " << report.row_errors.size() - shown << " more\n";
  }
}

struct CommonDatasetArgs {
  std::string path;
  std::string format = "csv";
  bool lenient = false;

  DatasetReadResult read() const {
    return read_dataset(path, format_from_name(format),
                        lenient ? ReadMode::Lenient : ReadMode::Strict);
  }
};

void add_dataset_options(CLI::App* cmd, CommonDatasetArgs& args) {
  cmd->add_option("dataset", args.path, "Dataset file")->required();
  cmd->add_option("--format", args.format, "Dataset format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  cmd->add_flag("--lenient", args.lenient, "Drop invalid rows instead of failing");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Calibrated one-dimensional quality measures from ordinal classifier probabilities"};
  app.require_subcommand(1);
  app.set_config("--config");

  // validate ---------------------------------------------------------------
  auto* validate_cmd = app.add_subcommand("validate", "Validate a dataset and report counts");
  auto validate_args = std::make_shared<CommonDatasetArgs>();
  add_dataset_options(validate_cmd, *validate_args);
  validate_cmd->callback([validate_args] {
    const auto result = validate_args->read();
    print_read_report(result.report);
  });

  // weights ----------------------------------------------------------------
  auto* weights_cmd =
      app.add_subcommand("weights", "Compute inverse-probability weights for a unit of analysis");
  auto weights_dataset = std::make_shared<std::string>();
  auto weights_format = std::make_shared<std::string>("csv");
  auto weights_sample = std::make_shared<std::string>();
  auto weights_unit = std::make_shared<std::string>("article");
  auto weights_population = std::make_shared<std::string>();
  weights_cmd->add_option("--dataset", *weights_dataset,
                          "Derive sample counts from this dataset");
  weights_cmd->add_option("--format", *weights_format, "Dataset format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  weights_cmd->add_option("--sample-counts", *weights_sample,
                          "Six comma-separated per-class sample counts");
  weights_cmd->add_option("--unit", *weights_unit, "Unit of analysis")
      ->check(CLI::IsMember({"article", "revision", "class", "custom"}))
      ->capture_default_str();
  weights_cmd->add_option("--population", *weights_population,
                          "Population config file (with --unit custom)");
  weights_cmd->callback([=] {
    std::array<std::int64_t, kNumClasses> sample{};
    if (!weights_sample->empty()) {
      sample = parse_counts(*weights_sample, "--sample-counts");
    } else if (!weights_dataset->empty()) {
      const auto result =
          read_dataset(*weights_dataset, format_from_name(*weights_format));
      sample = result.dataset.class_counts();
    } else {
      raise(Errc::IoFailure, "provide --sample-counts or --dataset");
    }
    const auto population = resolve_population(*weights_unit, *weights_population);
    const auto table = compute_weights(sample, population);
    std::cout << format_weight_table(table, sample);
  });

  // fit --------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit the weighted ordinal model");
  auto fit_dataset = std::make_shared<CommonDatasetArgs>();
  add_dataset_options(fit_cmd, *fit_dataset);
  auto fit_output = std::make_shared<std::string>();
  auto fit_unit = std::make_shared<std::string>("article");
  auto fit_population = std::make_shared<std::string>();
  auto fit_penalty = std::make_shared<std::string>("t");
  auto fit_seed = std::make_shared<std::uint64_t>(0);
  auto fit_sample = std::make_shared<std::string>();
  auto fit_unweighted_pca = std::make_shared<bool>(false);
  fit_cmd->add_option("-o,--output", *fit_output, "Model file to write")->required();
  fit_cmd->add_option("--unit", *fit_unit, "Unit of analysis to calibrate to")
      ->check(CLI::IsMember({"article", "revision", "class", "custom"}))
      ->capture_default_str();
  fit_cmd->add_option("--population", *fit_population,
                      "Population config file (with --unit custom)");
  fit_cmd->add_option("--penalty", *fit_penalty, "Penalty: weakly informative t or none")
      ->check(CLI::IsMember({"t", "none"}))
      ->capture_default_str();
  fit_cmd->add_option("--seed", *fit_seed, "Seed (reserved; fitting is deterministic)")
      ->capture_default_str();
  fit_cmd->add_option("--sample-counts", *fit_sample,
                      "Override the per-class sample counts used for weighting");
  fit_cmd->add_flag("--unweighted-pca", *fit_unweighted_pca,
                    "Fit the PCA without analysis weights (sensitivity analysis)");
  fit_cmd->callback([=] {
    const auto read = fit_dataset->read();
    auto sample = read.dataset.class_counts();
    if (!fit_sample->empty()) sample = parse_counts(*fit_sample, "--sample-counts");
    const auto population = resolve_population(*fit_unit, *fit_population);
    const auto table = compute_weights(sample, population);
    const Dataset weighted = apply_weights(read.dataset, table);
    const PcaTransform pca =
        fit_pca(weighted, *fit_unweighted_pca ? PcaWeighting::Unweighted
                                              : PcaWeighting::AnalysisWeights);
    FitOptions options;
    options.penalty = *fit_penalty == "none" ? PenaltyKind::None : PenaltyKind::StudentT;
    const FittedOrdinalModel model = fit(weighted, pca, options);
    write_model(ModelFile{kModelSchemaVersion, population.unit, pca, model}, *fit_output);
    std::cout << "unit = " << population.unit << "\n"
              << "n_effective = " << model.n_effective << "\n"
              << "loglik = " << model.loglik << "\n"
              << "converged = " << (model.converged ? "true" : "false") << "\n"
              << "grad_norm = " << model.grad_norm << "\n";
    if (!model.converged) {
      std::cerr << "warning: fit did not converge within the iteration budget\n";
    }
  });

  // score ------------------------------------------------------------------
  auto* score_cmd = app.add_subcommand("score", "Score a dataset with a fitted model");
  auto score_dataset_args = std::make_shared<CommonDatasetArgs>();
  add_dataset_options(score_cmd, *score_dataset_args);
  auto score_model = std::make_shared<std::string>();
  auto score_output = std::make_shared<std::string>();
  auto score_thresholds = std::make_shared<std::string>();
  auto score_draws = std::make_shared<int>(2000);
  auto score_seed = std::make_shared<std::uint64_t>(0);
  score_cmd->add_option("--model", *score_model, "Model file")->required();
  score_cmd->add_option("-o,--output", *score_output, "Score report CSV")->required();
  score_cmd->add_option("--thresholds-out", *score_thresholds,
                        "Also write the threshold report CSV here");
  score_cmd->add_option("--draws", *score_draws, "Posterior draws for intervals")
      ->check(CLI::Range(1000, 10000000))
      ->capture_default_str();
  score_cmd->add_option("--seed", *score_seed, "Seed for the interval draws")
      ->capture_default_str();
  score_cmd->callback([=] {
    const auto read = score_dataset_args->read();
    const ModelFile model = read_model(*score_model);
    const ScoringResult scoring =
        score_dataset(read.dataset, model.model, model.pca, *score_draws, *score_seed);
    write_scores_csv(scoring.records, *score_output);
    if (!score_thresholds->empty()) {
      write_thresholds_csv(scoring, model.model.thresholds, *score_thresholds);
    }
    std::cout << "scored = " << scoring.records.size() << "\n";
  });

  // evaluate ---------------------------------------------------------------
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Accuracy and calibration of a model on a dataset");
  auto eval_dataset = std::make_shared<CommonDatasetArgs>();
  add_dataset_options(eval_cmd, *eval_dataset);
  auto eval_model_path = std::make_shared<std::string>();
  auto eval_unit = std::make_shared<std::string>("article");
  auto eval_population = std::make_shared<std::string>();
  auto eval_sample = std::make_shared<std::string>();
  auto eval_output = std::make_shared<std::string>();
  auto eval_model_name = std::make_shared<std::string>();
  eval_cmd->add_option("--model", *eval_model_path, "Model file")->required();
  eval_cmd->add_option("--unit", *eval_unit, "Unit of analysis to evaluate under")
      ->check(CLI::IsMember({"article", "revision", "class", "custom"}))
      ->capture_default_str();
  eval_cmd->add_option("--population", *eval_population,
                       "Population config file (with --unit custom)");
  eval_cmd->add_option("--sample-counts", *eval_sample,
                       "Use these sample counts for the evaluation weights instead of "
                       "recomputing them on this dataset");
  eval_cmd->add_option("-o,--output-prefix", *eval_output, "Prefix for the report CSVs")
      ->required();
  eval_cmd->add_option("--model-name", *eval_model_name,
                       "Model label in the reports (default: the model's unit)");
  eval_cmd->callback([=] {
    const auto read = eval_dataset->read();
    const ModelFile model = read_model(*eval_model_path);
    auto sample = read.dataset.class_counts();
    if (!eval_sample->empty()) sample = parse_counts(*eval_sample, "--sample-counts");
    const auto population = resolve_population(*eval_unit, *eval_population);
    const auto table = compute_weights(sample, population);
    const std::string model_name =
        eval_model_name->empty() ? model.unit + "-model" : *eval_model_name;
    const EvaluationReport report =
        evaluate_model(read.dataset, model.model, model.pca, table, model_name);

    const std::vector<AccuracyRow> accuracy = {
        {report.unit, report.model_name, report.model_accuracy.accuracy,
         report.model_accuracy.off_by_one},
        {report.unit, "mpqc", report.mpqc_accuracy.accuracy,
         report.mpqc_accuracy.off_by_one},
    };
    std::vector<CalibrationRow> calibration;
    std::vector<SeriesPoint> plot;
    for (int k = 0; k < kNumClasses; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      const auto cls = quality_class_from_code(k);
      const auto& mc = report.model_calibration[idx];
      const auto& rc = report.raw_calibration[idx];
      calibration.push_back({report.unit, report.model_name, cls, mc.diff, mc.se});
      calibration.push_back({report.unit, "raw", cls, rc.diff, rc.se});
      plot.push_back({report.model_name, static_cast<double>(k), mc.diff,
                      mc.diff - 1.96 * mc.se, mc.diff + 1.96 * mc.se});
      plot.push_back({"raw", static_cast<double>(k), rc.diff, rc.diff - 1.96 * rc.se,
                      rc.diff + 1.96 * rc.se});
    }
    write_accuracy_csv(accuracy, *eval_output + "_accuracy.csv");
    write_calibration_csv(calibration, *eval_output + "_calibration.csv");
    write_series_csv(plot, *eval_output + "_plot.csv");
    for (const auto& row : accuracy) {
      std::cout << row.unit << "," << row.model << "," << row.accuracy << ","
                << row.off_by_one << "\n";
    }
  });

  // compare ----------------------------------------------------------------
  auto* compare_cmd =
      app.add_subcommand("compare", "Correlation matrix across score reports");
  auto compare_files = std::make_shared<std::vector<std::string>>();
  auto compare_names = std::make_shared<std::string>();
  auto compare_output = std::make_shared<std::string>();
  compare_cmd->add_option("scores", *compare_files, "Two or more score report CSVs")
      ->required()
      ->expected(2, 1000);
  compare_cmd->add_option("--names", *compare_names,
                          "Comma-separated measure names (default: file stems)");
  compare_cmd->add_option("-o,--output", *compare_output, "Correlation CSV")->required();
  compare_cmd->callback([=] {
    std::vector<NamedMeasure> measures;
    std::vector<std::string> names;
    if (!compare_names->empty()) {
      std::size_t pos = 0;
      while (true) {
        const auto comma = compare_names->find(',', pos);
        names.push_back(compare_names->substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (names.size() != compare_files->size()) {
        raise(Errc::LengthMismatch, "--names must match the number of score files");
      }
    }
    std::vector<std::string> first_ids;
    for (std::size_t f = 0; f < compare_files->size(); ++f) {
      const auto records = read_scores_csv((*compare_files)[f]);
      std::vector<double> phis;
      phis.reserve(records.size());
      std::vector<std::string> ids;
      ids.reserve(records.size());
      for (const auto& rec : records) {
        phis.push_back(rec.phi);
        ids.push_back(rec.id);
      }
      if (f == 0) {
        first_ids = ids;
        std::vector<double> evenly;
        evenly.reserve(records.size());
        for (const auto& rec : records) evenly.push_back(rec.evenly_spaced);
        measures.push_back({"evenly_spaced", std::move(evenly)});
      } else if (ids != first_ids) {
        raise(Errc::LengthMismatch,
              "score files must list the same ids in the same order");
      }
      const std::string name =
          names.empty() ? std::filesystem::path((*compare_files)[f]).stem().string()
                        : names[f];
      measures.push_back({name, std::move(phis)});
    }
    const CorrelationMatrix matrix = correlation_matrix(measures);
    write_correlations_csv(matrix, *compare_output);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      for (std::size_t j = i + 1; j < matrix.size(); ++j) {
        std::cout << matrix.names[i] << " ~ " << matrix.names[j]
                  << ": r = " << matrix.at(i, j).pearson
                  << ", tau = " << matrix.at(i, j).kendall << "\n";
      }
    }
  });

  // synth ------------------------------------------------------------------
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic dataset from a known model");
  auto synth_output = std::make_shared<std::string>();
  auto synth_truth = std::make_shared<std::string>();
  auto synth_alpha = std::make_shared<std::string>("-2.5,-1.2,0,1.2,2.5");
  auto synth_beta = std::make_shared<std::string>("1.8,0.6,0.4,0.2,0.1");
  auto synth_kappa = std::make_shared<double>(50.0);
  auto synth_n = std::make_shared<int>(10000);
  auto synth_seed = std::make_shared<std::uint64_t>(0);
  synth_cmd->add_option("-o,--output", *synth_output, "Dataset CSV to write")->required();
  synth_cmd->add_option("--truth-out", *synth_truth, "Ground-truth sidecar CSV");
  synth_cmd->add_option("--alpha", *synth_alpha, "Five true thresholds, increasing")
      ->capture_default_str();
  synth_cmd->add_option("--beta", *synth_beta, "Five true coefficients")
      ->capture_default_str();
  synth_cmd->add_option("--kappa", *synth_kappa, "Dirichlet concentration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--n", *synth_n, "Instances to generate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", *synth_seed, "Seed")->capture_default_str();
  synth_cmd->callback([=] {
    GeneratorSpec spec;
    const auto alpha = parse_reals<5>(*synth_alpha, "--alpha");
    const auto beta = parse_reals<5>(*synth_beta, "--beta");
    for (int i = 0; i < 5; ++i) {
      spec.alpha(i) = alpha[static_cast<std::size_t>(i)];
      spec.beta(i) = beta[static_cast<std::size_t>(i)];
    }
    spec.kappa = *synth_kappa;
    spec.n = *synth_n;
    spec.seed = *synth_seed;
    const SynthResult result = generate(spec);
    write_dataset_csv(result.dataset, *synth_output);
    if (!synth_truth->empty()) write_truth_csv(result, *synth_truth);
    std::cout << "generated = " << result.dataset.size() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error code=" << errc_name(e.code()) << " message=\"" << e.what()
              << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error code=Internal message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
