#ifndef FUZZSTOCH_VALIDATE_HPP
#define FUZZSTOCH_VALIDATE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fuzzstoch/solver.hpp"

namespace fuzzstoch {

/// Left/right α-cut limit samples and their CDFs, per α level. Levels are
/// processed in descending order and evaluation grids accumulate across
/// levels, so the per-realization intervals nest exactly.
struct AlphaCutCdfs {
  std::vector<double> alphas;  // descending
  std::vector<std::vector<double>> q_left;   // per α, per realization
  std::vector<std::vector<double>> q_right;
  std::vector<Ecdf> left;
  std::vector<Ecdf> right;
  int samples = 0;      // M_s
  int fuzzy_grid = 0;   // M_f
  std::uint64_t seed = 0;

  int level_index(double alpha) const;
};

/// Monte-Carlo α-cut CDFs of a generic QoI over a completely interactive
/// fuzzy vector: per realization, min/max of the QoI over the uniformly
/// discretized α-cut segment.
AlphaCutCdfs qoi_alpha_cdfs(
    const std::function<double(const std::vector<double>&,
                               const std::vector<double>&)>& qoi,
    const FuzzyVector& vec, int n_y, const std::vector<double>& alphas,
    int M_s = 10000, int M_f = 100, std::uint64_t seed = 0, int threads = 0);

/// Fast path for the local QoI ∫₀ˣ b̃ dξ (meters): same semantics as the
/// generic routine with beta quantiles evaluated through cached monotone
/// interpolation tables.
AlphaCutCdfs local_qoi_alpha_cdfs(const FuzzyStochasticField& field,
                                  double upto_um,
                                  const std::vector<double>& alphas,
                                  int M_s = 10000, int M_f = 100,
                                  std::uint64_t seed = 0, int threads = 0);

/// Fast path for the global-local QoI u(x₀).
AlphaCutCdfs global_local_alpha_cdfs(const GlobalField& gf,
                                     const LocalField& lf,
                                     const ProblemSpec& ps,
                                     const std::vector<double>& alphas,
                                     int M_s = 10000, int M_f = 100,
                                     std::uint64_t seed = 0, int threads = 0);

struct TruthPbox {
  PBox box;
  int groups = 0;      // N_b
  int group_size = 0;  // M̃
  std::uint64_t seed = 0;
};

/// N_b groups of M̃ without-replacement sample draws; one QoI ECDF per
/// group, enveloped into a p-box.
TruthPbox truth_pbox(const SampleSet& s,
                     const std::function<double(int)>& qoi_of_sample,
                     int n_groups, int group_size, std::uint64_t seed);

/// Fraction of (member × probability-grid) truth points whose value lies
/// within the band's horizontal extent [F_left⁻¹(p), F_right⁻¹(p)] at
/// level α, over a 101-point probability grid.
double containment(const TruthPbox& truth, const AlphaCutCdfs& band,
                   double alpha);

/// True local QoI of sample m: ∫₀ˣ b_m dξ in meters (midpoint-exact on
/// the element grid).
double data_qoi_integral(const SampleSet& s, int m, double upto_um);

/// True weighted QoI of sample m: ∫₀^{x₀} b_m F dξ in meters.
double data_qoi_weighted(const SampleSet& s, int m, const ProblemSpec& ps);

/// Monotone cubic interpolant of a beta quantile function on a uniform
/// probability grid; exact at the endpoints.
class BetaQuantileTable {
 public:
  BetaQuantileTable() = default;
  BetaQuantileTable(const BetaParams& bp, int nodes = 4097);
  double operator()(double prob) const;

 private:
  std::vector<double> value_;
  std::vector<double> deriv_;
  double step_ = 0.0;
};

std::string bands_csv(const AlphaCutCdfs& bands);
std::string qoi_samples_csv(const AlphaCutCdfs& bands);
std::string pbox_members_csv(const PBox& box);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_VALIDATE_HPP
