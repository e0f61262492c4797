#include <CLI11.hpp>

#include <iostream>

#include "fixpave/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Enclose fixed points of set-valued maps from a JSON problem spec"};
  std::string spec_path;
  fixpave::cli::Overrides flags;
  app.add_option("spec", spec_path, "Problem spec (JSON)")->required();
  app.add_option("--delta-min", flags.delta_min, "Stop bisecting below this diameter");
  app.add_option("--max-boxes", flags.max_boxes, "Budget on boxes per level");
  app.add_option("--threads", flags.threads, "Worker threads (default: FIXPAVE_THREADS, then spec)")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--tol", flags.tol, "Tolerance (argopt grid, iterate, minimax, approx)");
  app.add_option("--output,-o", flags.output, "Result file (default: standard output)");
  app.add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fixpave::cli::kInvalidSpec;
  }
  return fixpave::cli::run(spec_path, flags, std::cout, std::cerr);
}
