// Command-line front end: simulate, verify-kinematics, cutoff-study,
// symmetry-suite and norms.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mboltz/mboltz.hpp"

namespace fs = std::filesystem;
using namespace mboltz;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "configuration file (key = value)");
  cmd->add_option("--out", f.out_dir, "output directory (overrides output.directory)");
  cmd->add_option("--seed", f.seed, "seed (overrides the config seed)");
  cmd->add_option("--workers", f.workers, "worker threads, 0 = all hardware threads")->capture_default_str();
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    c = parse_config(read_text_file(f.config_path));
  }
  if (!f.out_dir.empty()) c.output.directory = f.out_dir;
  if (f.seed) c.seed = *f.seed;
  return c;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  auto os = open_output(path);
  w(os);
  finish_output(os, path);
}

int cmd_simulate(const CommonFlags& f) {
  const RunConfig c = resolve_config(f);
  const SimulationResult r = simulate(c, f.workers);
  const fs::path dir = c.output.directory;
  write_simulation_outputs(dir, c, r);
  const TimeSample& first = r.series.samples.front();
  const TimeSample& last = r.series.samples.back();
  std::cout << "steps = " << r.steps << "\n"
            << "t = " << detail::fmt17(last.t) << (r.frozen ? " (frozen)" : "") << "\n"
            << "N/N0 - 1 = " << detail::fmt17(last.N / first.N - 1.0) << "\n"
            << "E/E0 - 1 = " << detail::fmt17(last.E / first.E - 1.0) << "\n"
            << "wrote " << (dir / "timeseries.csv").string() << ", "
            << (dir / "final.snapshot").string() << "\n";
  return 0;
}

int cmd_kinematics(const CommonFlags& f, int trials) {
  const RunConfig c = resolve_config(f);
  const KinematicsReport r = run_kinematics_suite(c.seed, trials);
  const std::string header = config_comment_header(c);
  write_file(fs::path(c.output.directory) / "kinematics.txt", [&](std::ostream& os) {
    os << header;
    write_report(os, r);
  });
  write_report(std::cout, r);
  return 0;
}

int cmd_cutoff_study(const CommonFlags& f) {
  const RunConfig c = resolve_config(f);
  const auto cutoffs = c.study_cutoffs.empty() ? default_cutoffs(c.kernel.family) : c.study_cutoffs;
  const CutoffStudyReport r = run_cutoff_study(c, cutoffs, f.workers);
  const std::string header = config_comment_header(c);
  const fs::path dir = c.output.directory;
  write_file(dir / "cutoff_study.txt", [&](std::ostream& os) {
    os << header;
    write_report(os, r);
  });
  write_file(dir / "distance_matrix.csv",
             [&](std::ostream& os) { write_distance_matrix_csv(os, r, header); });
  write_report(std::cout, r);
  return 0;
}

int cmd_symmetry(const CommonFlags& f) {
  const RunConfig c = resolve_config(f);
  const SymmetryReport r = run_symmetry_suite(c, f.workers);
  write_file(fs::path(c.output.directory) / "symmetry.txt", [&](std::ostream& os) {
    os << config_comment_header(c);
    write_report(os, r);
  });
  write_report(std::cout, r);
  return 0;
}

int cmd_norms(const std::string& snapshot) {
  std::string text = read_text_file(snapshot);
  std::istringstream is(text);
  const DistributionState s = read_snapshot(is);
  const Moments m = moments(s);
  std::cout << "t = " << detail::fmt17(s.time) << "\n"
            << "N = " << detail::fmt17(m.number) << "\n"
            << "E = " << detail::fmt17(m.energy) << "\n"
            << "L1_m1 = " << detail::fmt17(norm_l1r(s, -1.0)) << "\n"
            << "L1_m2 = " << detail::fmt17(norm_l1r(s, -2.0)) << "\n"
            << "L1_p1 = " << detail::fmt17(norm_l1r(s, 1.0)) << "\n"
            << "Linf_w = " << detail::fmt17(norm_linf_w(s)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous massless Boltzmann solver on an expanding background"};
  app.require_subcommand(1);

  CommonFlags sim_flags, kin_flags, cut_flags, sym_flags;
  int trials = 10000;
  std::string snapshot;

  auto* sim = app.add_subcommand("simulate", "integrate and write timeseries.csv and final.snapshot");
  add_common(sim, sim_flags);
  auto* kin = app.add_subcommand("verify-kinematics", "randomized kinematics and angular-integral checks");
  add_common(kin, kin_flags);
  kin->add_option("--trials", trials, "random collision pairs")->capture_default_str()->check(CLI::PositiveNumber);
  auto* cut = app.add_subcommand("cutoff-study", "compare runs across a geometric cutoff ladder");
  add_common(cut, cut_flags);
  auto* sym = app.add_subcommand("symmetry-suite", "isotropy and rotation equivariance checks");
  add_common(sym, sym_flags);
  auto* nrm = app.add_subcommand("norms", "print moments and weighted norms of a snapshot");
  nrm->add_option("snapshot", snapshot, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::config);
  }

  try {
    if (*sim) return cmd_simulate(sim_flags);
    if (*kin) return cmd_kinematics(kin_flags, trials);
    if (*cut) return cmd_cutoff_study(cut_flags);
    if (*sym) return cmd_symmetry(sym_flags);
    if (*nrm) return cmd_norms(snapshot);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
