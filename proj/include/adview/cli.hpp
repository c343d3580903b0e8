#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "adview/models/regressor.hpp"
#include "adview/testkit.hpp"

namespace adview::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kSchemaError = 3,
  kPartialPrediction = 4,
  kBundleError = 5,
};

struct RunConfig {
  std::string data_path;
  std::optional<std::string> schema_path;
  std::string target_name = "adview";
  double split_ratio = 0.8;
  std::uint64_t seed = 42;
  // train: model kind; predict: bundle path.
  std::string model;
  ModelConfigs models;
  // compare/explore: output directory; train: bundle path; predict and
  // generate: CSV path (stdout when empty).
  std::string out;
  std::size_t bins = 30;
  bool timings = false;
  testkit::SyntheticSpec synthetic;
};

// Each command writes progress and results to `log` and returns an exit
// code; library errors propagate as exceptions (see exit_code_for).
int cmd_explore(const RunConfig& config, std::ostream& log);
int cmd_train(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_predict(const RunConfig& config, std::ostream& log);
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& log);

// Maps an in-flight exception to the documented exit code.
int exit_code_for(const std::exception& e);

}  // namespace adview::cli
