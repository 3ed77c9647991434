#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") return ddvep::io::slurp(std::cin);
  return ddvep::cli::read_file(path);
}

std::size_t env_workers() {
  const char* s = std::getenv("DDVEP_WORKERS");
  if (s == nullptr) return 1;
  try {
    const long v = std::stol(s);
    return v > 0 ? static_cast<std::size_t>(v) : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ddvep::cli;
  CLI::App app{"Incremental vertex enumeration and outer approximation of multiobjective linear programs"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::string> cone_file;

  VertenumOptions ve;
  auto* vertenum = app.add_subcommand("vertenum", "Vertex enumeration of an H-representation file");
  vertenum->add_option("file", file, "H-representation file ('-' for stdin)")->required();
  vertenum->add_option("--mode", ve.mode, "offline | online-box | online-cone")
      ->check(CLI::IsMember({"offline", "online-box", "online-cone"}))
      ->capture_default_str();
  vertenum->add_option("--M", ve.M, "Box size for online-box")->capture_default_str();
  vertenum->add_option("--cone", cone_file, "Ordering cone file (default: nonnegative orthant)");

  SolveCliOptions so;
  bool solve_no_timing = false;
  auto* solve = app.add_subcommand("solve", "Outer approximation of a multiobjective LP");
  solve->add_option("file", file, "Instance file ('-' for stdin)")->required();
  solve->add_option("--eps", so.eps, "Tolerance (default 0.005 for d=2, 0.05 otherwise)");
  solve->add_option("--backend", so.backend, "cone | box | offline")
      ->check(CLI::IsMember({"cone", "box", "offline"}))
      ->capture_default_str();
  solve->add_option("--M", so.M, "Box size for the box backend")->capture_default_str();
  solve->add_option("--cone", cone_file, "Ordering cone file (default: nonnegative orthant)");
  solve->add_option("--out", so.out_prefix, "Write <prefix>.poly and <prefix>.iterations.csv");
  solve->add_flag("--no-timing", solve_no_timing, "Print zero for all timings");

  BenchCliOptions bo;
  bool bench_no_timing = false;
  std::optional<std::size_t> workers;
  auto* bench = app.add_subcommand("bench", "Random-instance timing benchmark of the three backends");
  bench->add_option("--d", bo.d, "Number of objectives")->capture_default_str();
  bench->add_option("--n", bo.n, "Number of variables (constraints m = 2n)")->capture_default_str();
  bench->add_option("--samples", bo.samples, "Accepted instances to draw")->capture_default_str();
  bench->add_option("--seed", bo.seed, "Base seed")->capture_default_str();
  bench->add_option("--eps", bo.eps, "Tolerance (default 0.005 for d=2, 0.05 otherwise)");
  bench->add_option("--M", bo.M, "Box size for the box backend")->capture_default_str();
  bench->add_option("--backends", bo.backends, "Comma-separated subset of offline,box,cone")->capture_default_str();
  bench->add_option("--subsample", bo.subsample, "Average over the instances with the most iterations");
  bench->add_option("--repetitions", bo.repetitions, "Report the median of this many timings")->capture_default_str();
  bench->add_option("--workers", workers, "Parallel workers (default: DDVEP_WORKERS or 1)");
  bench->add_flag("--artificial-table", bo.artificial_table, "Print the artificial-vertex table instead");
  bench->add_flag("--no-timing", bench_no_timing, "Print zero for all timings");
  bench->add_option("--out", bo.out_prefix, "Write <prefix>.records.csv and <prefix>.summary.csv");

  int gd = 2, gn = 5;
  std::uint64_t gseed = 1;
  auto* generate = app.add_subcommand("generate", "Print a random accepted instance");
  generate->add_option("--d", gd, "Number of objectives")->capture_default_str();
  generate->add_option("--n", gn, "Number of variables (constraints m = 2n)")->capture_default_str();
  generate->add_option("--seed", gseed, "Base seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::string> cone_text;
    if (cone_file) cone_text = read_file(*cone_file);
    if (*vertenum) {
      ve.cone_text = cone_text;
      return cmd_vertenum(read_input(file), ve, std::cout, std::cerr);
    }
    if (*solve) {
      so.cone_text = cone_text;
      so.with_timing = !solve_no_timing;
      return cmd_solve(read_input(file), so, std::cout, std::cerr);
    }
    if (*bench) {
      bo.with_timing = !bench_no_timing;
      bo.workers = workers.value_or(env_workers());
      return cmd_bench(bo, std::cout, std::cerr);
    }
    if (*generate) return cmd_generate(gd, gn, gseed, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
