#ifndef FUZZSTOCH_HOMOG_HPP
#define FUZZSTOCH_HOMOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "fuzzstoch/microdata.hpp"

namespace fuzzstoch {

/// Effective-parameter scatter ε(L) = mean-over-x of the pointwise sample
/// std over mean, for each candidate homogenization length.
struct RveReport {
  std::vector<double> lengths;  // μm, ascending
  std::vector<double> epsilon;
  double tol = 0.05;
  std::optional<double> rve_length;  // smallest passing candidate
};

/// Centered moving average of b over an H/h-element window (the window
/// statistic of the harmonic modulus average), truncated at sample ends.
/// H = h returns the input unchanged.
std::vector<double> homogenize(const std::vector<double>& b, double h,
                               double H);

/// Homogenize a whole sample set; provenance becomes Homogenized.
SampleSet homogenize_set(const SampleSet& s, double H);

RveReport rve_length(const SampleSet& s, const std::vector<double>& lengths,
                     double tol = 0.05);

std::string rve_csv(const RveReport& r);
std::string rve_json(const RveReport& r);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_HOMOG_HPP
