// Command-line front end for the fuzzy-stochastic multiscale pipeline.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/pipeline.hpp"

namespace {

const char* error_kind(const fuzzstoch::Error& e) {
  using namespace fuzzstoch;
  if (dynamic_cast<const PackingFailure*>(&e)) return "PackingFailure";
  if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
  if (dynamic_cast<const LabelError*>(&e)) return "LabelError";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const DegenerateVariance*>(&e)) return "DegenerateVariance";
  if (dynamic_cast<const DivisionByZeroInterval*>(&e)) {
    return "DivisionByZeroInterval";
  }
  if (dynamic_cast<const FitFailure*>(&e)) return "FitFailure";
  if (dynamic_cast<const EigenFailure*>(&e)) return "EigenFailure";
  if (dynamic_cast<const InfeasibleMoments*>(&e)) return "InfeasibleMoments";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const WindowTooLarge*>(&e)) return "WindowTooLarge";
  if (dynamic_cast<const DegenerateDenominator*>(&e)) {
    return "DegenerateDenominator";
  }
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const MissingArtifact*>(&e)) return "MissingArtifact";
  return "Error";
}

void print_error(const char* kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

struct StageCommand {
  const char* name;
  const char* description;
  void (*run)(const fuzzstoch::RunConfig&, const fuzzstoch::StageOptions&);
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzstoch: fuzzy-stochastic multiscale pipeline for a 1D "
               "fiber-composite bar"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  int threads = 0;

  app.add_option("--config", config_path, "Pipeline configuration file");
  app.add_option("--out", out_dir, "Artifact output directory");
  auto* seed_opt =
      app.add_option("--seed", seed_override, "Override the config seed");
  app.add_option("--threads", threads,
                 "Worker threads (0 = FUZZSTOCH_THREADS or hardware)");

  const std::vector<StageCommand> stages = {
      {"synth", "Generate a synthetic microstructure and its binary map",
       fuzzstoch::cmd_synth},
      {"extract", "Extract 1D coefficient samples from the binary map",
       fuzzstoch::cmd_extract},
      {"bootstrap", "Bootstrap samples to the working length",
       fuzzstoch::cmd_bootstrap},
      {"stats", "Moment curves and correlation functions",
       fuzzstoch::cmd_stats},
      {"fuzzify", "Fuzzify the four moment histograms",
       fuzzstoch::cmd_fuzzify},
      {"fit-field", "Build the fuzzy-stochastic field and export its KL basis",
       fuzzstoch::cmd_fit_field},
      {"rve", "Determine the RVE length", fuzzstoch::cmd_rve},
      {"validate-local", "Local QoI validation against the truth p-box",
       fuzzstoch::cmd_validate_local},
      {"global-local", "Global-local QoI validation",
       fuzzstoch::cmd_global_local},
      {"all", "Run every stage in order", fuzzstoch::cmd_all},
  };
  for (const auto& stage : stages) {
    app.add_subcommand(stage.name, stage.description);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    fuzzstoch::RunConfig cfg;
    if (!config_path.empty()) cfg = fuzzstoch::load_config(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed_override;
    fuzzstoch::StageOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    for (const auto& stage : stages) {
      if (app.got_subcommand(stage.name)) {
        stage.run(cfg, opt);
        return 0;
      }
    }
    print_error("ConfigError", "no subcommand selected");
    return 1;
  } catch (const fuzzstoch::Error& e) {
    print_error(error_kind(e), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Error", e.what());
    return 1;
  }
}
