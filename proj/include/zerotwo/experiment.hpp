#ifndef ZEROTWO_EXPERIMENT_HPP
#define ZEROTWO_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zerotwo {

// Batch runner: parse a JSON experiment config, execute the referenced
// law/bundle operation, persist JSON + CSV (+ optional SVG) artifacts.
// The runner adds no numerics of its own.

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  bool plot = false;
  bool write_files = true;
};

struct RunOutcome {
  // 0 verdict success, 1 error, 2 premise violated, 3 schema violation
  int exit_code = 1;
  std::string verdict;
  std::string message;      // diagnostics on failure
  std::string result_json;  // full result document (empty on schema errors)
  std::vector<std::string> files_written;
};

RunOutcome run_config_string(const std::string& json_text,
                             const RunOptions& opts = {});
RunOutcome run_config_file(const std::string& path,
                           const RunOptions& opts = {});

struct ExampleConfig {
  const char* name;
  const char* json;
};

// Bundled example configs, one per exercised statement of the theory.
const std::vector<ExampleConfig>& example_configs();

}  // namespace zerotwo

#endif
