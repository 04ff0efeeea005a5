#include "fuzzstoch/homog.hpp"

#include <cmath>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"
#include "fuzzstoch/stats.hpp"

namespace fuzzstoch {

std::vector<double> homogenize(const std::vector<double>& b, double h,
                               double H) {
  const int n = static_cast<int>(b.size());
  const int k = static_cast<int>(std::llround(H / h));
  if (k < 1 || std::fabs(k * h - H) > 1e-9 * H) {
    throw DomainError("H must be a positive multiple of h");
  }
  if (k > n) throw WindowTooLarge("window exceeds the sample length");
  if (k == 1) return b;

  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    prefix[static_cast<std::size_t>(j) + 1] =
        prefix[static_cast<std::size_t>(j)] + b[static_cast<std::size_t>(j)];
  }
  const int half_lo = (k - 1) / 2;
  const int half_hi = k / 2;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int lo = std::max(0, j - half_lo);
    const int hi = std::min(n - 1, j + half_hi);
    out[static_cast<std::size_t>(j)] =
        (prefix[static_cast<std::size_t>(hi) + 1] -
         prefix[static_cast<std::size_t>(lo)]) /
        static_cast<double>(hi - lo + 1);
  }
  return out;
}

SampleSet homogenize_set(const SampleSet& s, double H) {
  SampleSet out = s;
  out.provenance = Provenance::Homogenized;
  out.homogenization_length = H;
  const int n = s.points();
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int m = 0; m < s.M; ++m) {
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] =
        s.sample(m, j);
    const auto h_row = homogenize(row, s.h, H);
    for (int j = 0; j < n; ++j) out.sample(m, j) =
        h_row[static_cast<std::size_t>(j)];
  }
  return out;
}

RveReport rve_length(const SampleSet& s, const std::vector<double>& lengths,
                     double tol) {
  RveReport report;
  report.tol = tol;
  report.lengths = lengths;
  double prev = 0.0;
  for (double len : lengths) {
    if (len <= prev) throw DomainError("candidate lengths must ascend");
    prev = len;
    if (len > s.L + 1e-9) {
      throw WindowTooLarge("candidate length exceeds sample length");
    }
    const SampleSet eff = homogenize_set(s, len);
    const MomentCurves m = pointwise_moments(eff);
    double mean_mu = 0.0, mean_sigma = 0.0;
    for (std::size_t j = 0; j < m.mu.size(); ++j) {
      mean_mu += m.mu[j];
      mean_sigma += m.sigma[j];
    }
    mean_mu /= static_cast<double>(m.mu.size());
    mean_sigma /= static_cast<double>(m.mu.size());
    const double eps = mean_sigma / mean_mu;
    report.epsilon.push_back(eps);
    if (!report.rve_length && eps <= tol) report.rve_length = len;
  }
  return report;
}

std::string rve_csv(const RveReport& r) {
  std::string text = "L_um,epsilon\n";
  for (std::size_t i = 0; i < r.lengths.size(); ++i) {
    text += csv_line({format_double(r.lengths[i]),
                      format_double(r.epsilon[i])});
  }
  return text;
}

std::string rve_json(const RveReport& r) {
  std::string out = "{\"tol\":" + format_double(r.tol);
  if (r.rve_length) {
    out += ",\"L_rve_um\":" + format_double(*r.rve_length);
  } else {
    out += ",\"L_rve_um\":null";
  }
  out += "}";
  return out;
}

}  // namespace fuzzstoch
