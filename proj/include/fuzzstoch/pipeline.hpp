#ifndef FUZZSTOCH_PIPELINE_HPP
#define FUZZSTOCH_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzstoch/homog.hpp"
#include "fuzzstoch/randfield.hpp"
#include "fuzzstoch/solver.hpp"
#include "fuzzstoch/validate.hpp"

namespace fuzzstoch {

/// Declarative configuration for the whole pipeline. Defaults mirror the
/// reference setup: M = 100 bootstrap samples of length 10⁴ μm,
/// correlation length 100 μm, M_s = 10⁴, M_f = 100, RVE tolerance 5%.
struct RunConfig {
  std::uint64_t seed = 7;

  // [microstructure]
  double width_um = 1700.0;
  double height_um = 500.0;
  double volume_fraction = 0.63;
  double r_min_um = 2.0;
  double r_max_um = 5.0;

  // [moduli]
  PhaseModuli moduli;

  // [extract]
  double strip_um = 10.0;
  double element_um = 10.0;
  double pixel_um = 1.0;

  // [bootstrap]
  int bootstrap_samples = 100;
  double bootstrap_length_um = 1e4;

  // [fuzzify]
  int histogram_bins = 10;
  double plateau_tol = 0.10;

  // [field]
  double corr_length_um = 100.0;
  std::vector<double> corr_sweep_um = {25.0, 50.0, 100.0, 200.0, 400.0};
  bool sweep_corr_length = true;
  double preserved_std = 0.85;

  // [rve]
  std::vector<double> rve_lengths_um = {100.0, 1000.0, 5000.0, 1e4, 2e4, 5e4};
  double rve_tol = 0.05;
  double rve_sample_length_um = 1e5;
  int rve_sample_count = 100;

  // [problem]
  ProblemSpec problem;

  // [validate]
  int mc_samples = 10000;    // M_s
  int fuzzy_grid = 100;      // M_f
  int truth_groups = 20;     // N_b
  int truth_group_size = 50; // M̃
  std::vector<double> alphas = {0.0, 0.5, 1.0};

  // [globallocal]
  double rve_length_um = 0.0;  // 0 = take the rve stage result
  int global_samples = 100;    // bootstrap samples spanning the domain

  /// Canonical key=value dump (sorted sections); basis of the config hash.
  std::string canonical() const;
  std::string hash() const;
};

/// Parse the INI-style config text; unknown sections or keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct StageOptions {
  std::string out_dir;
  int threads = 0;  // 0 = FUZZSTOCH_THREADS or hardware
};

// Each stage reads its upstream artifacts from out_dir, writes its own
// and updates manifest.json. MissingArtifact signals a skipped
// prerequisite stage.
void cmd_synth(const RunConfig& cfg, const StageOptions& opt);
void cmd_extract(const RunConfig& cfg, const StageOptions& opt);
void cmd_bootstrap(const RunConfig& cfg, const StageOptions& opt);
void cmd_stats(const RunConfig& cfg, const StageOptions& opt);
void cmd_fuzzify(const RunConfig& cfg, const StageOptions& opt);
void cmd_fit_field(const RunConfig& cfg, const StageOptions& opt);
void cmd_rve(const RunConfig& cfg, const StageOptions& opt);
void cmd_validate_local(const RunConfig& cfg, const StageOptions& opt);
void cmd_global_local(const RunConfig& cfg, const StageOptions& opt);
void cmd_all(const RunConfig& cfg, const StageOptions& opt);

/// Stage output checksums recorded in manifest.json (path → fnv1a hex).
std::vector<std::pair<std::string, std::string>> manifest_checksums(
    const std::string& out_dir);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_PIPELINE_HPP
