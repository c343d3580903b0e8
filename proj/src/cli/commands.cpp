#include "adview/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adview/analysis.hpp"
#include "adview/dataset.hpp"
#include "adview/error.hpp"
#include "adview/features.hpp"
#include "adview/models/bundle.hpp"
#include "adview/preprocess.hpp"
#include "adview/rng.hpp"

namespace adview::cli {

namespace fs = std::filesystem;

namespace {

Schema resolve_schema(const RunConfig& config) {
  Schema schema = config.schema_path ? load_schema(*config.schema_path) : default_schema();
  if (schema.target().name != config.target_name) schema = schema.with_target(config.target_name);
  return schema;
}

struct CleanData {
  Schema schema;
  RawTable table;
  std::size_t dropped = 0;
};

CleanData load_clean(const RunConfig& config, std::ostream& log) {
  if (config.data_path.empty()) throw InputError("--data is required");
  if (!fs::exists(config.data_path)) {
    throw InputError("data file '" + config.data_path + "' does not exist");
  }
  Schema schema = resolve_schema(config);
  const RawTable raw = read_csv_file(config.data_path, schema);
  auto [table, dropped] = drop_missing(raw, schema);
  log << "rows read: " << raw.row_count() << ", dropped with missing values: " << dropped
      << ", kept: " << table.row_count() << "\n";
  return {std::move(schema), std::move(table), dropped};
}

struct Prepared {
  Schema schema;
  std::vector<LabelEncoder> encoders;
  MinMaxScaler scaler;
  FeatureMatrix train_x, test_x;
  TargetVector train_y, test_y;
};

TargetVector take(const TargetVector& y, std::span<const std::size_t> idx) {
  TargetVector out{std::vector<double>(idx.size()), y.name};
  for (std::size_t i = 0; i < idx.size(); ++i) out.values[i] = y.values[idx[i]];
  return out;
}

// clean -> encode -> split -> fit scaler on train -> scale both partitions
Prepared prepare(const RunConfig& config, std::ostream& log) {
  auto clean = load_clean(config, log);
  if (clean.table.row_count() < 2) {
    throw InputError("need at least 2 usable rows after cleaning, have " +
                     std::to_string(clean.table.row_count()));
  }
  Prepared p{std::move(clean.schema), {}, {}, {}, {}, {}, {}};
  p.encoders = fit_label_encoders(clean.table, p.schema);
  const auto encoded = encode_table(clean.table, p.schema, p.encoders);
  const auto split = train_test_split(encoded.features.rows(), config.split_ratio,
                                      derive_seed(config.seed, seed_stream::split));
  const FeatureMatrix train_raw{encoded.features.values.select_rows(split.train_indices),
                                encoded.features.feature_names};
  const FeatureMatrix test_raw{encoded.features.values.select_rows(split.test_indices),
                               encoded.features.feature_names};
  p.scaler = MinMaxScaler::fit(train_raw);
  p.train_x = p.scaler.transform(train_raw);
  p.test_x = p.scaler.transform(test_raw);
  p.train_y = take(encoded.target, split.train_indices);
  p.test_y = take(encoded.target, split.test_indices);
  log << "train rows: " << p.train_x.rows() << ", test rows: " << p.test_x.rows()
      << ", features: " << p.train_x.cols() << "\n";
  return p;
}

ModelBundle make_bundle(const Prepared& p, Regressor model) {
  return {std::move(model), p.scaler, p.encoders, p.train_x.feature_names, p.train_y.name,
          p.schema};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

fs::path ensure_dir(const std::string& dir) {
  const fs::path path = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw InputError("cannot create output directory '" + path.string() + "'");
  return path;
}

std::string safe_file_stem(std::string name) {
  for (auto& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return name;
}

}  // namespace

int cmd_explore(const RunConfig& config, std::ostream& log) {
  auto clean = load_clean(config, log);
  const fs::path dir = ensure_dir(config.out);

  std::ostringstream summary;
  summary << "source: " << config.data_path << "\n";
  summary << "usable rows: " << clean.table.row_count() << "\n";
  summary << "dropped rows: " << clean.dropped << "\n";
  summary << "columns: " << clean.schema.size() << "\n\n";
  summary << "column\tkind\tnon_missing\tdistinct\tmin\tmax\n";
  for (const auto& s : summarize(clean.table, clean.schema)) {
    summary << s.name << '\t' << to_string(s.kind) << '\t' << s.non_missing << '\t' << s.distinct
            << '\t' << (s.min ? format_double(*s.min) : "-") << '\t'
            << (s.max ? format_double(*s.max) : "-") << '\n';
  }
  write_file(dir / "summary.txt", summary.str());
  log << summary.str();

  if (clean.table.row_count() == 0) {
    log << "warning: no usable rows; skipping histograms and correlation\n";
    return kOk;
  }
  const auto encoders = fit_label_encoders(clean.table, clean.schema);
  const auto encoded = encode_table(clean.table, clean.schema, encoders);
  for (std::size_t j = 0; j <= encoded.features.cols(); ++j) {
    const bool is_target = j == encoded.features.cols();
    const std::string name = is_target ? encoded.target.name : encoded.features.feature_names[j];
    const auto values = is_target ? encoded.target.values : encoded.features.values.column(j);
    std::ostringstream csv;
    write_histogram_csv(csv, histogram(values, config.bins, name));
    write_file(dir / ("hist_" + safe_file_stem(name) + ".csv"), csv.str());
  }
  if (encoded.features.rows() < 2) {
    log << "warning: fewer than 2 usable rows; skipping correlation\n";
    return kOk;
  }
  std::ostringstream corr;
  write_correlation_csv(corr, correlation_matrix(encoded.features, encoded.target));
  write_file(dir / "correlation.csv", corr.str());
  log << "wrote " << (encoded.features.cols() + 1) << " histograms and correlation.csv to "
      << dir.string() << "\n";
  return kOk;
}

int cmd_train(const RunConfig& config, std::ostream& log) {
  ModelKind kind;
  try {
    kind = model_kind_from_string(config.model);
  } catch (const KindError& e) {
    throw InputError(std::string(e.what()) + " (expected linear|svr|tree|forest|ann)");
  }
  const auto p = prepare(config, log);
  Regressor model = fit_model(kind, p.train_x.values, p.train_y.values, config.models, config.seed);
  const double train_rmse = rmse(predict(model, p.train_x.values), p.train_y.values);
  const double test_rmse = rmse(predict(model, p.test_x.values), p.test_y.values);

  const std::string path =
      config.out.empty() ? "model_" + std::string(to_string(kind)) + ".json" : config.out;
  save_model(make_bundle(p, std::move(model)), path);
  log << display_name(kind) << "\n";
  log << "train RMSE: " << format_double(train_rmse) << "\n";
  log << "test RMSE: " << format_double(test_rmse) << "\n";
  log << "bundle: " << path << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
  const auto p = prepare(config, log);
  auto result = compare_models(p.train_x, p.train_y, p.test_x, p.test_y, config.models, config.seed,
                               fs::path(config.data_path).filename().string());
  result.report.split_ratio = config.split_ratio;

  const fs::path dir = ensure_dir(config.out);
  const ReportOptions opts{config.timings};
  std::ostringstream text, tsv;
  write_report_text(text, result.report, opts);
  write_report_tsv(tsv, result.report, opts);
  write_file(dir / "report.txt", text.str());
  write_file(dir / "report.tsv", tsv.str());

  for (std::size_t i = 0; i < result.models.size(); ++i) {
    if (!result.models[i]) continue;
    const auto kind = result.report.rows[i].kind;
    save_model(make_bundle(p, std::move(*result.models[i])),
               (dir / ("model_" + std::string(to_string(kind)) + ".json")).string());
  }
  log << text.str();
  return kOk;
}

int cmd_predict(const RunConfig& config, std::ostream& log) {
  if (config.model.empty()) throw InputError("--model (bundle path) is required");
  const ModelBundle bundle = load_model(config.model);
  if (config.data_path.empty()) throw InputError("--data is required");
  if (!fs::exists(config.data_path)) {
    throw InputError("data file '" + config.data_path + "' does not exist");
  }

  // Prediction inputs may or may not carry the target column.
  Schema schema = bundle.schema;
  RawTable table;
  try {
    table = read_csv_file(config.data_path, schema);
  } catch (const SchemaError&) {
    schema = bundle.schema.without_target();
    table = read_csv_file(config.data_path, schema);
  }

  std::optional<std::size_t> id_col;
  for (std::size_t c = 0; c < schema.size() && !id_col; ++c) {
    if (schema[c].kind == ColumnKind::identifier) id_col = c;
  }

  const std::size_t n = table.row_count();
  const std::size_t d = bundle.feature_names.size();
  std::vector<std::string> errors(n);
  Matrix raw(n, d);
  std::size_t n_ok = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    try {
      for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].kind != ColumnKind::target && schema[c].kind != ColumnKind::identifier &&
            schema[c].is_missing(row[c])) {
          throw InputError("row " + std::to_string(r + 1) + ", column '" + schema[c].name +
                           "': missing value");
        }
      }
      encode_row(row, schema, bundle.encoders, raw.row(n_ok), std::to_string(r + 1));
      ++n_ok;
    } catch (const InputError& e) {
      errors[r] = e.what();
    }
  }
  Matrix usable(n_ok, d);
  std::copy_n(raw.data().begin(), n_ok * d, usable.data().begin());
  const auto preds = n_ok ? predict_bundle(bundle, usable) : std::vector<double>{};

  std::ostringstream csv;
  write_csv_row(csv, {id_col ? schema[*id_col].name : std::string("row"),
                      "predicted_" + bundle.target_name, "error"});
  std::size_t k = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string id = id_col ? table.rows[r][*id_col] : std::to_string(r + 1);
    if (errors[r].empty()) {
      write_csv_row(csv, {id, format_double(preds[k++]), ""});
    } else {
      write_csv_row(csv, {id, "", errors[r]});
    }
  }
  if (config.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(config.out, csv.str());
  }
  const std::size_t failed = n - n_ok;
  log << "predicted " << n_ok << " of " << n << " rows";
  if (failed) log << "; " << failed << " rows failed";
  log << "\n";
  return failed ? kPartialPrediction : kOk;
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (config.synthetic.n_rows < 2) throw InputError("--rows must be at least 2");
  if (!(config.synthetic.noise_sd >= 0.0)) throw InputError("--noise must be >= 0");
  if (config.synthetic.d_numeric < 1) throw InputError("--d-numeric must be at least 1");
  const RawTable table = testkit::generate_synthetic(config.synthetic);
  if (config.out.empty()) {
    write_csv(out, table);
  } else {
    write_file(config.out, to_csv(table));
    log << "wrote " << table.row_count() << " rows to " << config.out << "\n";
  }
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BundleError*>(&e)) return kBundleError;
  if (dynamic_cast<const SchemaError*>(&e)) return kSchemaError;
  if (dynamic_cast<const InputError*>(&e)) return kInputError;
  return kFailure;
}

}  // namespace adview::cli
