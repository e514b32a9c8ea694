// Batch experiment runner over the zerotwo C API.
#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "zerotwo.h"

namespace {

int cmd_run(const std::string& config, const std::string& out_dir,
            long long seed, bool plot, bool quiet) {
  int32_t exit_code = 1;
  char* result = nullptr;
  zt_run_config_file(config.c_str(), out_dir.c_str(), seed, plot ? 1 : 0,
                     &exit_code, &result);
  if (!quiet && result) std::fputs(result, stdout);
  if (exit_code != 0) std::fprintf(stderr, "%s\n", zt_last_error());
  zt_string_free(result);
  return exit_code;
}

int cmd_list_examples() {
  const int32_t n = zt_example_count();
  for (int32_t i = 0; i < n; ++i) std::printf("%s\n", zt_example_name(i));
  return 0;
}

int cmd_show_example(const std::string& name) {
  const int32_t n = zt_example_count();
  for (int32_t i = 0; i < n; ++i) {
    if (name == zt_example_name(i)) {
      std::printf("%s\n", zt_example_config(i));
      return 0;
    }
  }
  std::fprintf(stderr, "unknown example '%s'\n", name.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zerotwo: a numerical laboratory for the uniform zero-two "
               "law on finite-dimensional non-commutative L1-spaces"};
  app.set_version_flag("--version", std::string(zt_version()));
  app.require_subcommand(1);

  std::string config, out_dir = ".", example_name;
  long long seed = -1;
  bool plot = false, quiet = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config, "JSON experiment config")->required();
  run->add_option("--out", out_dir, "output directory (default: .)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--plot", plot, "also write an SVG decay plot");
  run->add_flag("--quiet", quiet, "suppress the result document on stdout");

  app.add_subcommand("list-examples", "print the bundled example configs");

  CLI::App* show =
      app.add_subcommand("show-example", "print one bundled config as JSON");
  show->add_option("name", example_name, "example name")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config, out_dir, seed, plot, quiet);
  if (app.got_subcommand("list-examples")) return cmd_list_examples();
  return cmd_show_example(example_name);
}
