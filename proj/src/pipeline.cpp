#include "fuzzstoch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"

namespace fuzzstoch {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Seed streams per stage, derived from the run seed.
enum : std::uint64_t {
  kBootstrapSeedOffset = 0,
  kRveSeedOffset = 1,
  kTruthLocalSeedOffset = 2,
  kBandsLocalSeedOffset = 3,
  kGlobalBootSeedOffset = 4,
  kTruthGlobalSeedOffset = 5,
  kLocalBootSeedOffset = 6,
  kBandsGlobalSeedOffset = 7,
};

std::vector<double> parse_double_list(const std::string& v) {
  std::vector<double> out;
  std::string cur;
  for (char c : v + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(parse_double(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (out.empty()) throw ConfigError("empty list value");
  return out;
}

std::string join_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

struct StageTimer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::string path_in(const StageOptions& opt, const std::string& name) {
  return (fs::path(opt.out_dir) / name).string();
}

void update_manifest(const RunConfig& cfg, const StageOptions& opt,
                     const std::string& stage,
                     const std::vector<std::string>& outputs,
                     double elapsed_s) {
  const std::string manifest_path = path_in(opt, "manifest.json");
  Json manifest;
  if (fs::exists(manifest_path)) {
    try {
      manifest = Json::parse(read_text_file(manifest_path));
    } catch (...) {
      manifest = Json::object();
    }
  }
  manifest["config_hash"] = cfg.hash();
  manifest["seed"] = cfg.seed;
  manifest["version"] = "0.1.0";
  if (!manifest.contains("stages")) manifest["stages"] = Json::object();
  Json entry;
  Json sums = Json::object();
  for (const auto& name : outputs) {
    sums[name] = file_checksum(path_in(opt, name));
  }
  entry["outputs"] = sums;
  entry["elapsed_s"] = elapsed_s;
  manifest["stages"][stage] = entry;
  write_text_file(manifest_path, manifest.dump(2) + "\n");
}

SampleSet read_samples(const StageOptions& opt, const std::string& name,
                       Provenance provenance) {
  const std::string path = path_in(opt, name);
  if (!fs::exists(path)) {
    throw MissingArtifact(name + " not found; run the producing stage first");
  }
  return parse_sample_set_csv(read_text_file(path), provenance);
}

FieldSettings field_settings(const RunConfig& cfg, double corr_length) {
  FieldSettings s;
  s.corr_length = corr_length;
  s.preserved_std_fraction = cfg.preserved_std;
  s.histogram_bins = cfg.histogram_bins;
  s.plateau_tol = cfg.plateau_tol;
  s.project_to_feasible = true;
  return s;
}

std::vector<double> with_unit_levels(std::vector<double> alphas) {
  for (double needed : {0.0, 1.0}) {
    if (std::none_of(alphas.begin(), alphas.end(), [&](double a) {
          return std::fabs(a - needed) < 1e-12;
        })) {
      alphas.push_back(needed);
    }
  }
  return alphas;
}

double resolved_rve_length(const RunConfig& cfg, const StageOptions& opt) {
  if (cfg.rve_length_um > 0.0) return cfg.rve_length_um;
  const std::string path = path_in(opt, "rve.json");
  if (fs::exists(path)) {
    const Json j = Json::parse(read_text_file(path));
    if (j.contains("L_rve_um") && !j["L_rve_um"].is_null()) {
      return j["L_rve_um"].get<double>();
    }
  }
  return 1e4;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["run.seed"] = std::to_string(seed);
  kv["microstructure.width_um"] = format_double(width_um);
  kv["microstructure.height_um"] = format_double(height_um);
  kv["microstructure.volume_fraction"] = format_double(volume_fraction);
  kv["microstructure.r_min_um"] = format_double(r_min_um);
  kv["microstructure.r_max_um"] = format_double(r_max_um);
  kv["moduli.a_fiber_gpa"] = format_double(moduli.a_fiber);
  kv["moduli.a_matrix_gpa"] = format_double(moduli.a_matrix);
  kv["extract.strip_um"] = format_double(strip_um);
  kv["extract.element_um"] = format_double(element_um);
  kv["extract.pixel_um"] = format_double(pixel_um);
  kv["bootstrap.samples"] = std::to_string(bootstrap_samples);
  kv["bootstrap.length_um"] = format_double(bootstrap_length_um);
  kv["fuzzify.bins"] = std::to_string(histogram_bins);
  kv["fuzzify.plateau_tol"] = format_double(plateau_tol);
  kv["field.corr_length_um"] = format_double(corr_length_um);
  kv["field.corr_sweep_um"] = join_list(corr_sweep_um);
  kv["field.sweep"] = sweep_corr_length ? "true" : "false";
  kv["field.preserved_std"] = format_double(preserved_std);
  kv["rve.lengths_um"] = join_list(rve_lengths_um);
  kv["rve.tol"] = format_double(rve_tol);
  kv["rve.sample_length_um"] = format_double(rve_sample_length_um);
  kv["rve.sample_count"] = std::to_string(rve_sample_count);
  kv["problem.domain_um"] = format_double(problem.domain_um);
  kv["problem.x0_um"] = format_double(problem.x0_um);
  kv["validate.mc_samples"] = std::to_string(mc_samples);
  kv["validate.fuzzy_grid"] = std::to_string(fuzzy_grid);
  kv["validate.truth_groups"] = std::to_string(truth_groups);
  kv["validate.truth_group_size"] = std::to_string(truth_group_size);
  kv["validate.alphas"] = join_list(alphas);
  kv["globallocal.rve_length_um"] = format_double(rve_length_um);
  kv["globallocal.global_samples"] = std::to_string(global_samples);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::hash() const {
  const std::string c = canonical();
  return fnv1a_hex(c.data(), c.size());
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments and whitespace.
    const std::size_t hash_pos = std::min(line.find('#'), line.find(';'));
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    line.erase(line.begin(),
               std::find_if_not(line.begin(), line.end(), is_space));
    while (!line.empty() && is_space(static_cast<unsigned char>(
                              line.back()))) {
      line.pop_back();
    }
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section at line " +
                          std::to_string(line_no));
      }
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key=value at line " +
                        std::to_string(line_no));
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && is_space(static_cast<unsigned char>(key.back())))
      key.pop_back();
    value.erase(value.begin(),
                std::find_if_not(value.begin(), value.end(), is_space));

    const std::string full = section + "." + key;
    try {
      if (full == "run.seed") {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (full == "microstructure.width_um") {
        cfg.width_um = parse_double(value);
      } else if (full == "microstructure.height_um") {
        cfg.height_um = parse_double(value);
      } else if (full == "microstructure.volume_fraction") {
        cfg.volume_fraction = parse_double(value);
      } else if (full == "microstructure.r_min_um") {
        cfg.r_min_um = parse_double(value);
      } else if (full == "microstructure.r_max_um") {
        cfg.r_max_um = parse_double(value);
      } else if (full == "moduli.a_fiber_gpa") {
        cfg.moduli.a_fiber = parse_double(value);
      } else if (full == "moduli.a_matrix_gpa") {
        cfg.moduli.a_matrix = parse_double(value);
      } else if (full == "extract.strip_um") {
        cfg.strip_um = parse_double(value);
      } else if (full == "extract.element_um") {
        cfg.element_um = parse_double(value);
      } else if (full == "extract.pixel_um") {
        cfg.pixel_um = parse_double(value);
      } else if (full == "bootstrap.samples") {
        cfg.bootstrap_samples = std::stoi(value);
      } else if (full == "bootstrap.length_um") {
        cfg.bootstrap_length_um = parse_double(value);
      } else if (full == "fuzzify.bins") {
        cfg.histogram_bins = std::stoi(value);
      } else if (full == "fuzzify.plateau_tol") {
        cfg.plateau_tol = parse_double(value);
      } else if (full == "field.corr_length_um") {
        cfg.corr_length_um = parse_double(value);
      } else if (full == "field.corr_sweep_um") {
        cfg.corr_sweep_um = parse_double_list(value);
      } else if (full == "field.sweep") {
        if (value != "true" && value != "false") {
          throw ConfigError("field.sweep must be true or false");
        }
        cfg.sweep_corr_length = value == "true";
      } else if (full == "field.preserved_std") {
        cfg.preserved_std = parse_double(value);
      } else if (full == "rve.lengths_um") {
        cfg.rve_lengths_um = parse_double_list(value);
      } else if (full == "rve.tol") {
        cfg.rve_tol = parse_double(value);
      } else if (full == "rve.sample_length_um") {
        cfg.rve_sample_length_um = parse_double(value);
      } else if (full == "rve.sample_count") {
        cfg.rve_sample_count = std::stoi(value);
      } else if (full == "problem.domain_um") {
        cfg.problem.domain_um = parse_double(value);
      } else if (full == "problem.x0_um") {
        cfg.problem.x0_um = parse_double(value);
      } else if (full == "validate.mc_samples") {
        cfg.mc_samples = std::stoi(value);
      } else if (full == "validate.fuzzy_grid") {
        cfg.fuzzy_grid = std::stoi(value);
      } else if (full == "validate.truth_groups") {
        cfg.truth_groups = std::stoi(value);
      } else if (full == "validate.truth_group_size") {
        cfg.truth_group_size = std::stoi(value);
      } else if (full == "validate.alphas") {
        cfg.alphas = parse_double_list(value);
      } else if (full == "globallocal.rve_length_um") {
        cfg.rve_length_um = parse_double(value);
      } else if (full == "globallocal.global_samples") {
        cfg.global_samples = std::stoi(value);
      } else {
        throw ConfigError("unknown config key: " + full);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("bad value for " + full + ": " + e.what());
    }
  }
  if (!cfg.problem.valid()) throw ConfigError("x0 must lie inside the domain");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

void cmd_synth(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  fs::create_directories(opt.out_dir);
  FiberMapSpec spec;
  spec.width = cfg.width_um;
  spec.height = cfg.height_um;
  spec.volume_fraction = cfg.volume_fraction;
  spec.r_min = cfg.r_min_um;
  spec.r_max = cfg.r_max_um;
  spec.seed = cfg.seed;
  const FiberMap map = generate_microstructure(spec);
  const BinaryMap raster = rasterize(map, cfg.pixel_um);
  write_binary_map(raster, path_in(opt, "map.bmap"));

  std::string fibers = "cx_um,cy_um,r_um\n";
  for (const auto& d : map.disks) {
    fibers += csv_line({format_double(d.cx), format_double(d.cy),
                        format_double(d.r)});
  }
  write_text_file(path_in(opt, "fibers.csv"), fibers);

  Json summary;
  summary["disks"] = map.disks.size();
  summary["analytic_fraction"] = map.area_fraction();
  summary["raster_fraction"] = raster.fiber_fraction();
  write_text_file(path_in(opt, "synth.json"), summary.dump(2) + "\n");
  update_manifest(cfg, opt, "synth", {"map.bmap", "fibers.csv", "synth.json"},
                  timer.elapsed());
}

void cmd_extract(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const std::string bmap = path_in(opt, "map.bmap");
  if (!fs::exists(bmap)) throw MissingArtifact("map.bmap missing; run synth");
  const BinaryMap map = ingest_binary_map(bmap);
  const SampleSet samples =
      extract_1d_samples(map, cfg.moduli, cfg.strip_um, cfg.element_um);
  write_text_file(path_in(opt, "samples_extracted.csv"),
                  sample_set_csv(samples));
  update_manifest(cfg, opt, "extract", {"samples_extracted.csv"},
                  timer.elapsed());
}

void cmd_bootstrap(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet src =
      read_samples(opt, "samples_extracted.csv", Provenance::Extracted);
  const SampleSet out = bootstrap(src, cfg.bootstrap_samples,
                                  cfg.bootstrap_length_um,
                                  cfg.seed + kBootstrapSeedOffset);
  write_text_file(path_in(opt, "samples_bootstrap.csv"),
                  sample_set_csv(out));
  update_manifest(cfg, opt, "bootstrap", {"samples_bootstrap.csv"},
                  timer.elapsed());
}

void cmd_stats(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet boot =
      read_samples(opt, "samples_bootstrap.csv", Provenance::Bootstrap);
  const SampleSet raw =
      read_samples(opt, "samples_extracted.csv", Provenance::Extracted);

  write_text_file(path_in(opt, "moments.csv"),
                  moments_csv(pointwise_moments(boot)));
  const int raw_lags = std::min(50, raw.points() - 1);
  write_text_file(path_in(opt, "correlation_raw.csv"),
                  correlation_csv(mean_correlation(raw, raw_lags)));
  std::vector<std::string> outputs = {"moments.csv", "correlation_raw.csv"};
  for (double H : {100.0, 500.0}) {
    if (H > boot.L / 4.0) continue;
    const SampleSet eff = homogenize_set(boot, H);
    const int lags = std::min(static_cast<int>(2.0 * H / boot.h),
                              boot.points() - 1);
    const std::string name =
        "correlation_h" + std::to_string(static_cast<int>(H)) + ".csv";
    write_text_file(path_in(opt, name),
                    correlation_csv(mean_correlation(eff, lags)));
    outputs.push_back(name);
  }
  update_manifest(cfg, opt, "stats", outputs, timer.elapsed());
}

void cmd_fuzzify(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet boot =
      read_samples(opt, "samples_bootstrap.csv", Provenance::Bootstrap);
  const MomentCurves curves = pointwise_moments(boot);

  const char* names[4] = {"mu", "sigma", "gamma1", "gamma2"};
  const std::vector<double>* series[4] = {&curves.mu, &curves.sigma,
                                          &curves.gamma1, &curves.gamma2};
  Json memberships = Json::object();
  std::vector<std::string> outputs;
  std::vector<double> table_alphas;
  for (int i = 0; i <= 10; ++i) table_alphas.push_back(i / 10.0);
  for (int c = 0; c < 4; ++c) {
    std::vector<double> usable;
    for (std::size_t j = 0; j < series[c]->size(); ++j) {
      if (c >= 2 && curves.degenerate[j]) continue;
      usable.push_back((*series[c])[j]);
    }
    FuzzifyDiagnostics diag;
    const FuzzyVariable var = fuzzify_from_histogram(
        histogram(usable, cfg.histogram_bins), cfg.plateau_tol, &diag);
    Json entry;
    entry["knots"] = Json::parse(membership_json(var));
    entry["fallback"] = diag.used_fallback;
    entry["trapezoidal"] = diag.trapezoidal;
    memberships[names[c]] = entry;
    const std::string csv_name =
        std::string("alpha_cuts_") + names[c] + ".csv";
    write_text_file(path_in(opt, csv_name),
                    alpha_cut_table_csv(var, table_alphas));
    outputs.push_back(csv_name);
  }
  write_text_file(path_in(opt, "memberships.json"),
                  memberships.dump(2) + "\n");
  outputs.push_back("memberships.json");
  update_manifest(cfg, opt, "fuzzify", outputs, timer.elapsed());
}

void cmd_fit_field(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet boot =
      read_samples(opt, "samples_bootstrap.csv", Provenance::Bootstrap);
  const FuzzyStochasticField field = build_fuzzy_stochastic_field(
      boot, field_settings(cfg, cfg.corr_length_um));
  write_text_file(path_in(opt, "kl_spectrum.csv"),
                  kl_spectrum_csv(field.kl));
  write_kl_eigenfunctions(field.kl, path_in(opt, "kl_eigenfunctions.klb"));

  std::array<double, 4> z_peak;
  for (int i = 0; i < 4; ++i) {
    z_peak[static_cast<std::size_t>(i)] = field.moments.component(i).peak();
  }
  const BetaParams bp = field.beta_for(z_peak);
  Json summary;
  summary["kl_terms"] = field.kl.terms;
  summary["corr_length_um"] = field.kl.corr_length;
  summary["preserved_std"] = field.kl.preserved_fraction;
  summary["eigenvalue_total"] = field.kl.eigenvalue_total;
  summary["peak_beta"] = {{"p", bp.p},
                          {"q", bp.q},
                          {"loc", bp.loc},
                          {"scale", bp.scale}};
  write_text_file(path_in(opt, "field.json"), summary.dump(2) + "\n");
  update_manifest(
      cfg, opt, "fit-field",
      {"kl_spectrum.csv", "kl_eigenfunctions.klb", "field.json"},
      timer.elapsed());
}

void cmd_rve(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet src =
      read_samples(opt, "samples_extracted.csv", Provenance::Extracted);
  const SampleSet samples =
      bootstrap(src, cfg.rve_sample_count, cfg.rve_sample_length_um,
                cfg.seed + kRveSeedOffset);
  const RveReport report = rve_length(samples, cfg.rve_lengths_um,
                                      cfg.rve_tol);
  write_text_file(path_in(opt, "rve.csv"), rve_csv(report));
  write_text_file(path_in(opt, "rve.json"), rve_json(report) + "\n");
  update_manifest(cfg, opt, "rve", {"rve.csv", "rve.json"}, timer.elapsed());
}

void cmd_validate_local(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet boot =
      read_samples(opt, "samples_bootstrap.csv", Provenance::Bootstrap);
  const double upto = boot.L / 2.0;
  const TruthPbox truth = truth_pbox(
      boot, [&](int m) { return data_qoi_integral(boot, m, upto); },
      cfg.truth_groups, cfg.truth_group_size,
      cfg.seed + kTruthLocalSeedOffset);
  write_text_file(path_in(opt, "truth_pbox_local.csv"),
                  pbox_members_csv(truth.box));

  const auto alphas = with_unit_levels(cfg.alphas);
  const std::vector<double> sweep =
      cfg.sweep_corr_length ? cfg.corr_sweep_um
                            : std::vector<double>{cfg.corr_length_um};
  double best_corr = sweep.front();
  double best_fraction = -1.0;
  Json sweep_report = Json::array();
  AlphaCutCdfs best_bands;
  for (double corr : sweep) {
    const FuzzyStochasticField field =
        build_fuzzy_stochastic_field(boot, field_settings(cfg, corr));
    const AlphaCutCdfs bands = local_qoi_alpha_cdfs(
        field, upto, alphas, cfg.mc_samples, cfg.fuzzy_grid,
        cfg.seed + kBandsLocalSeedOffset, opt.threads);
    const double fraction = containment(truth, bands, 1.0);
    Json row;
    row["corr_length_um"] = corr;
    row["containment_1cut"] = fraction;
    sweep_report.push_back(row);
    if (fraction > best_fraction) {
      best_fraction = fraction;
      best_corr = corr;
      best_bands = bands;
    }
  }

  write_text_file(path_in(opt, "bands_local.csv"), bands_csv(best_bands));
  write_text_file(path_in(opt, "qoi_samples_local.csv"),
                  qoi_samples_csv(best_bands));
  Json report;
  report["selected_corr_length_um"] = best_corr;
  report["sweep"] = sweep_report;
  Json fractions = Json::object();
  for (double a : best_bands.alphas) {
    fractions[format_double(a)] = containment(truth, best_bands, a);
  }
  report["containment"] = fractions;
  write_text_file(path_in(opt, "containment_local.json"),
                  report.dump(2) + "\n");
  update_manifest(cfg, opt, "validate-local",
                  {"truth_pbox_local.csv", "bands_local.csv",
                   "qoi_samples_local.csv", "containment_local.json"},
                  timer.elapsed());
}

void cmd_global_local(const RunConfig& cfg, const StageOptions& opt) {
  StageTimer timer;
  const SampleSet src =
      read_samples(opt, "samples_extracted.csv", Provenance::Extracted);
  const double l_rve = resolved_rve_length(cfg, opt);
  const ProblemSpec& ps = cfg.problem;

  const SampleSet domain_samples =
      bootstrap(src, cfg.global_samples, ps.domain_um,
                cfg.seed + kGlobalBootSeedOffset);
  const TruthPbox truth = truth_pbox(
      domain_samples,
      [&](int m) { return data_qoi_weighted(domain_samples, m, ps); },
      cfg.truth_groups, std::min(cfg.truth_group_size, cfg.global_samples - 1),
      cfg.seed + kTruthGlobalSeedOffset);
  write_text_file(path_in(opt, "truth_pbox_gl.csv"),
                  pbox_members_csv(truth.box));

  const SampleSet effective = homogenize_set(domain_samples, l_rve);
  const GlobalField gf = build_global_field(effective, l_rve, ps.domain_um,
                                            cfg.preserved_std);

  const SampleSet local_samples = bootstrap(
      src, cfg.bootstrap_samples, l_rve, cfg.seed + kLocalBootSeedOffset);
  const LocalField lf{
      build_fuzzy_stochastic_field(local_samples,
                                   field_settings(cfg, cfg.corr_length_um)),
      ps.x0_um - l_rve / 2.0};

  const auto alphas = with_unit_levels(cfg.alphas);
  const AlphaCutCdfs bands = global_local_alpha_cdfs(
      gf, lf, ps, alphas, cfg.mc_samples, cfg.fuzzy_grid,
      cfg.seed + kBandsGlobalSeedOffset, opt.threads);

  write_text_file(path_in(opt, "bands_gl.csv"), bands_csv(bands));
  write_text_file(path_in(opt, "qoi_samples_gl.csv"),
                  qoi_samples_csv(bands));

  // Median global solution (y = 0) for plotting.
  const std::vector<double> y0(static_cast<std::size_t>(gf.kl.terms), 0.0);
  const DirectSolution median = solve_direct(gf.sample(y0), gf.dx, ps);
  write_text_file(path_in(opt, "global_solution.csv"),
                  solution_csv(gf.x, median.u));

  Json report;
  report["rve_length_um"] = l_rve;
  report["global_kl_terms"] = gf.kl.terms;
  report["local_kl_terms"] = lf.field.kl.terms;
  Json fractions = Json::object();
  for (double a : bands.alphas) {
    fractions[format_double(a)] = containment(truth, bands, a);
  }
  report["containment"] = fractions;
  write_text_file(path_in(opt, "containment_gl.json"),
                  report.dump(2) + "\n");
  update_manifest(cfg, opt, "global-local",
                  {"truth_pbox_gl.csv", "bands_gl.csv", "qoi_samples_gl.csv",
                   "global_solution.csv", "containment_gl.json"},
                  timer.elapsed());
}

void cmd_all(const RunConfig& cfg, const StageOptions& opt) {
  cmd_synth(cfg, opt);
  cmd_extract(cfg, opt);
  cmd_bootstrap(cfg, opt);
  cmd_stats(cfg, opt);
  cmd_fuzzify(cfg, opt);
  cmd_fit_field(cfg, opt);
  cmd_rve(cfg, opt);
  cmd_validate_local(cfg, opt);
  cmd_global_local(cfg, opt);
}

std::vector<std::pair<std::string, std::string>> manifest_checksums(
    const std::string& out_dir) {
  const std::string path = (fs::path(out_dir) / "manifest.json").string();
  const Json manifest = Json::parse(read_text_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  if (!manifest.contains("stages")) return out;
  for (const auto& [stage, entry] : manifest["stages"].items()) {
    for (const auto& [name, sum] : entry["outputs"].items()) {
      out.emplace_back(stage + "/" + name, sum.get<std::string>());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fuzzstoch
