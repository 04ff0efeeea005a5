#ifndef FUZZSTOCH_STATS_HPP
#define FUZZSTOCH_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzstoch/microdata.hpp"

namespace fuzzstoch {

/// Pointwise sample moments across the M samples. Population (1/M)
/// normalization throughout; excess kurtosis is the fourth standardized
/// moment minus 3. Points with zero variance are flagged degenerate and
/// carry NaN skewness/kurtosis.
struct MomentCurves {
  std::vector<double> x;
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> gamma1;
  std::vector<double> gamma2;
  std::vector<std::uint8_t> degenerate;
};

struct CorrelationCurve {
  std::vector<double> lags;  // r_n = n·h, n = 0..max_lag
  std::vector<double> c;     // in [-1, 1]
};

struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1, strictly increasing
  std::vector<std::size_t> counts;

  double mid(std::size_t bin) const {
    return 0.5 * (bin_edges[bin] + bin_edges[bin + 1]);
  }
};

/// Right-continuous empirical CDF; also usable as a generic step CDF.
class Ecdf {
 public:
  Ecdf() = default;
  explicit Ecdf(std::vector<double> data);
  Ecdf(std::vector<double> support, std::vector<double> probs);

  /// P(X <= v).
  double operator()(double v) const;
  /// P(X < v).
  double below(double v) const;
  /// inf{ x : F(x) >= p }; p <= 0 yields the smallest support value.
  double quantile(double p) const;

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  bool empty() const { return support_.empty(); }

 private:
  std::vector<double> support_;  // sorted unique values
  std::vector<double> probs_;    // cumulative probability at each value
};

/// Family of CDFs with pointwise min/max envelopes.
struct PBox {
  std::vector<Ecdf> members;
  Ecdf lower;  // pointwise min of member CDFs
  Ecdf upper;  // pointwise max of member CDFs
};

MomentCurves pointwise_moments(const SampleSet& s);

/// Normalized empirical correlation of one sample over exact grid lags.
/// The sample mean over the whole bar centers both factors; the ratio is
/// bounded by 1 in magnitude. Throws DegenerateVariance for constant input.
CorrelationCurve correlation_function(const std::vector<double>& sample,
                                      double h, int max_lag);

/// Mean correlation curve over all samples of a set.
CorrelationCurve mean_correlation(const SampleSet& s, int max_lag);

/// Equal-width bins over [min, max], right-inclusive last bin. Constant
/// data yields a single bin widened by ±1/2 around the value.
Histogram histogram(const std::vector<double>& values, int n_bins = 10);

Ecdf ecdf(const std::vector<double>& values);
PBox pbox(const std::vector<Ecdf>& members);

std::string moments_csv(const MomentCurves& m);
std::string correlation_csv(const CorrelationCurve& c);
std::string ecdf_csv(const Ecdf& e);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_STATS_HPP
