#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "adview/cli.hpp"
#include "adview/error.hpp"
#include "adview/testkit.hpp"

namespace {

using adview::cli::RunConfig;

struct ModelFlags {
  std::optional<std::size_t> epochs, svr_epochs, ann_epochs;
  std::optional<double> learning_rate, svr_learning_rate, ann_learning_rate;
  std::optional<double> epsilon, c;
  std::optional<std::size_t> max_depth, min_samples_leaf, n_trees, m_try, batch_size;
  std::optional<std::string> hidden;
  bool no_bootstrap = false;
};

std::vector<std::size_t> parse_hidden(const std::string& text) {
  std::vector<std::size_t> sizes;
  if (text.empty() || text == "none") return sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw adview::InputError("--hidden expects comma-separated positive widths, got '" + text +
                               "'");
    }
  }
  return sizes;
}

void apply(const ModelFlags& f, adview::ModelConfigs& m) {
  if (f.epochs) m.svr.epochs = m.ann.epochs = *f.epochs;
  if (f.svr_epochs) m.svr.epochs = *f.svr_epochs;
  if (f.ann_epochs) m.ann.epochs = *f.ann_epochs;
  if (f.learning_rate) m.svr.learning_rate = m.ann.learning_rate = *f.learning_rate;
  if (f.svr_learning_rate) m.svr.learning_rate = *f.svr_learning_rate;
  if (f.ann_learning_rate) m.ann.learning_rate = *f.ann_learning_rate;
  if (f.epsilon) m.svr.epsilon = *f.epsilon;
  if (f.c) m.svr.c = *f.c;
  if (f.max_depth) m.tree.max_depth = m.forest.tree.max_depth = *f.max_depth;
  if (f.min_samples_leaf) m.tree.min_samples_leaf = m.forest.tree.min_samples_leaf = *f.min_samples_leaf;
  if (f.n_trees) m.forest.n_trees = *f.n_trees;
  if (f.m_try) m.forest.m_try = *f.m_try;
  if (f.no_bootstrap) m.forest.bootstrap = false;
  if (f.batch_size) m.ann.batch_size = *f.batch_size;
  if (f.hidden) m.ann.hidden_sizes = parse_hidden(*f.hidden);
}

void add_data_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--data", cfg.data_path, "Input CSV")->required();
  cmd->add_option("--schema", cfg.schema_path, "Schema JSON (default: built-in 9-column schema)");
  cmd->add_option("--target", cfg.target_name, "Target column")->capture_default_str();
  cmd->set_config("--config", "", "Flat key=value file; command-line flags take precedence");
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& cfg, ModelFlags& f) {
  cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  cmd->add_option("--split", cfg.split_ratio, "Training fraction")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--epochs", f.epochs, "Epochs for SVR and ANN");
  cmd->add_option("--svr-epochs", f.svr_epochs, "SVR epochs (default 500)");
  cmd->add_option("--ann-epochs", f.ann_epochs, "ANN epochs (default 100)");
  cmd->add_option("--learning-rate", f.learning_rate, "Learning rate for SVR and ANN");
  cmd->add_option("--svr-learning-rate", f.svr_learning_rate, "SVR learning rate (default 1e-3)");
  cmd->add_option("--ann-learning-rate", f.ann_learning_rate, "ANN learning rate (default 1e-3)");
  cmd->add_option("--epsilon", f.epsilon, "SVR tube half-width (default 0.1)");
  cmd->add_option("--c", f.c, "SVR loss weight (default 1)");
  cmd->add_option("--max-depth", f.max_depth, "Tree/forest depth limit (default 12)");
  cmd->add_option("--min-samples-leaf", f.min_samples_leaf, "Tree/forest leaf size (default 2)");
  cmd->add_option("--n-trees", f.n_trees, "Forest size (default 100)");
  cmd->add_option("--m-try", f.m_try, "Features tried per split (default max(1, d/3))");
  cmd->add_flag("--no-bootstrap", f.no_bootstrap, "Grow forest trees on the full training set");
  cmd->add_option("--hidden", f.hidden, "ANN hidden widths, e.g. 64,32 or none (default 64,32)");
  cmd->add_option("--batch-size", f.batch_size, "ANN mini-batch size (default 32)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"YouTube ad-view regression pipeline"};
  app.require_subcommand(1);
  RunConfig cfg;
  ModelFlags flags;
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");

  auto* explore = app.add_subcommand("explore", "Summaries, histograms and correlation matrix");
  add_data_flags(explore, cfg);
  explore->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  explore->add_option("--bins", cfg.bins, "Histogram bins")->capture_default_str()->check(
      CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train one model and save its bundle");
  add_data_flags(train, cfg);
  add_pipeline_flags(train, cfg, flags);
  train->add_option("--model", cfg.model, "linear|svr|tree|forest|ann")->required();
  train->add_option("--out", cfg.out, "Bundle path (default model_<kind>.json)");

  auto* compare = app.add_subcommand("compare", "Train all five models and report test RMSE");
  add_data_flags(compare, cfg);
  add_pipeline_flags(compare, cfg, flags);
  compare->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  compare->add_flag("--timings", cfg.timings, "Include wall-clock training times in reports");

  auto* predict = app.add_subcommand("predict", "Predict ad views with a saved bundle");
  predict->add_option("--model", cfg.model, "Bundle path")->required();
  predict->add_option("--data", cfg.data_path, "Input CSV")->required();
  predict->add_option("--out", cfg.out, "Prediction CSV (default stdout)");

  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  std::string kind = "linear";
  bool no_categorical = false;
  generate->add_option("--kind", kind, "linear|tree_structured|noisy_mixed")->capture_default_str();
  generate->add_option("--rows", cfg.synthetic.n_rows, "Data rows")->capture_default_str();
  generate->add_option("--noise", cfg.synthetic.noise_sd, "Noise standard deviation")
      ->capture_default_str();
  generate->add_option("--d-numeric", cfg.synthetic.d_numeric, "Numeric columns carrying signal")
      ->capture_default_str();
  generate->add_flag("--no-categorical", no_categorical, "Single category for every row");
  generate->add_option("--seed", cfg.synthetic.seed, "Seed")->capture_default_str();
  generate->add_option("--out", cfg.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : adview::cli::kInputError;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    apply(flags, cfg.models);
    if (*explore) return adview::cli::cmd_explore(cfg, std::cerr);
    if (*train) return adview::cli::cmd_train(cfg, std::cerr);
    if (*compare) return adview::cli::cmd_compare(cfg, std::cerr);
    if (*predict) return adview::cli::cmd_predict(cfg, std::cerr);
    if (*generate) {
      cfg.synthetic.kind = adview::testkit::synthetic_kind_from_string(kind);
      cfg.synthetic.include_categorical = !no_categorical;
      return adview::cli::cmd_generate(cfg, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (*train && dynamic_cast<const adview::InputError*>(&e)) std::cerr << train->help();
    return adview::cli::exit_code_for(e);
  }
  return adview::cli::kFailure;
}
