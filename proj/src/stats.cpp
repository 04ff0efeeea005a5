#include "fuzzstoch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"

namespace fuzzstoch {

MomentCurves pointwise_moments(const SampleSet& s) {
  if (s.M < 2) throw DomainError("pointwise moments need at least 2 samples");
  const int n = s.points();
  MomentCurves out;
  out.x = s.x;
  out.mu.resize(static_cast<std::size_t>(n));
  out.sigma.resize(static_cast<std::size_t>(n));
  out.gamma1.resize(static_cast<std::size_t>(n));
  out.gamma2.resize(static_cast<std::size_t>(n));
  out.degenerate.assign(static_cast<std::size_t>(n), 0);
  const double inv_m = 1.0 / static_cast<double>(s.M);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < n; ++j) {
    double mu = 0.0;
    for (int m = 0; m < s.M; ++m) mu += s.sample(m, j);
    mu *= inv_m;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int m = 0; m < s.M; ++m) {
      const double d = s.sample(m, j) - mu;
      const double d2 = d * d;
      s2 += d2;
      s3 += d2 * d;
      s4 += d2 * d2;
    }
    s2 *= inv_m;
    s3 *= inv_m;
    s4 *= inv_m;
    const double sigma = std::sqrt(s2);
    const std::size_t jj = static_cast<std::size_t>(j);
    out.mu[jj] = mu;
    out.sigma[jj] = sigma;
    if (sigma == 0.0) {
      out.degenerate[jj] = 1;
      out.gamma1[jj] = nan;
      out.gamma2[jj] = nan;
    } else {
      out.gamma1[jj] = s3 / (s2 * sigma);
      out.gamma2[jj] = s4 / (s2 * s2) - 3.0;
    }
  }
  return out;
}

CorrelationCurve correlation_function(const std::vector<double>& sample,
                                      double h, int max_lag) {
  const int n = static_cast<int>(sample.size());
  if (n < 2) throw DomainError("correlation needs at least 2 grid points");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : sample) var += (v - mean) * (v - mean);
  if (var == 0.0) throw DegenerateVariance("constant sample");

  max_lag = std::min(max_lag, n - 1);
  CorrelationCurve out;
  out.lags.resize(static_cast<std::size_t>(max_lag) + 1);
  out.c.resize(static_cast<std::size_t>(max_lag) + 1);
  for (int lag = 0; lag <= max_lag; ++lag) {
    // Pairs at distance r_n = n·h on the uniform grid are exactly the
    // index pairs (i, i+n).
    double num = 0.0, den_i = 0.0, den_j = 0.0;
    for (int i = 0; i + lag < n; ++i) {
      const double a = sample[static_cast<std::size_t>(i)] - mean;
      const double b = sample[static_cast<std::size_t>(i + lag)] - mean;
      num += a * b;
      den_i += a * a;
      den_j += b * b;
    }
    const double den = std::sqrt(den_i) * std::sqrt(den_j);
    out.lags[static_cast<std::size_t>(lag)] = lag * h;
    out.c[static_cast<std::size_t>(lag)] = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

CorrelationCurve mean_correlation(const SampleSet& s, int max_lag) {
  CorrelationCurve acc;
  int used = 0;
  for (int m = 0; m < s.M; ++m) {
    std::vector<double> row(static_cast<std::size_t>(s.points()));
    for (int j = 0; j < s.points(); ++j) row[static_cast<std::size_t>(j)] =
        s.sample(m, j);
    CorrelationCurve c;
    try {
      c = correlation_function(row, s.h, max_lag);
    } catch (const DegenerateVariance&) {
      continue;
    }
    if (acc.c.empty()) {
      acc = c;
    } else {
      for (std::size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += c.c[i];
    }
    ++used;
  }
  if (used == 0) throw DegenerateVariance("all samples constant");
  for (auto& v : acc.c) v /= static_cast<double>(used);
  return acc;
}

Histogram histogram(const std::vector<double>& values, int n_bins) {
  if (values.empty()) throw DomainError("histogram of empty data");
  if (n_bins < 1) throw DomainError("histogram needs at least one bin");
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(),
                                                  values.end());
  const double mn = *mn_it, mx = *mx_it;
  Histogram h;
  if (mn == mx) {
    h.bin_edges = {mn - 0.5, mx + 0.5};
    h.counts = {values.size()};
    return h;
  }
  h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  const double width = (mx - mn) / n_bins;
  for (int i = 0; i <= n_bins; ++i) {
    h.bin_edges[static_cast<std::size_t>(i)] = mn + width * i;
  }
  h.bin_edges.back() = mx;
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (double v : values) {
    int bin = static_cast<int>((v - mn) / width);
    bin = std::clamp(bin, 0, n_bins - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

Ecdf::Ecdf(std::vector<double> data) {
  if (data.empty()) throw DomainError("ECDF of empty data");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i + 1 < data.size() && data[i + 1] == data[i]) continue;
    support_.push_back(data[i]);
    probs_.push_back(static_cast<double>(i + 1) / n);
  }
}

Ecdf::Ecdf(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.size() != probs_.size() || support_.empty()) {
    throw DomainError("step CDF arrays must match and be nonempty");
  }
}

double Ecdf::operator()(double v) const {
  const auto it = std::upper_bound(support_.begin(), support_.end(), v);
  if (it == support_.begin()) return 0.0;
  return probs_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double Ecdf::below(double v) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), v);
  if (it == support_.begin()) return 0.0;
  return probs_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double Ecdf::quantile(double p) const {
  if (p <= 0.0) return support_.front();
  const auto it = std::lower_bound(probs_.begin(), probs_.end(), p);
  if (it == probs_.end()) return support_.back();
  return support_[static_cast<std::size_t>(it - probs_.begin())];
}

Ecdf ecdf(const std::vector<double>& values) { return Ecdf(values); }

PBox pbox(const std::vector<Ecdf>& members) {
  if (members.empty()) throw DomainError("p-box of empty family");
  PBox box;
  box.members = members;
  std::vector<double> grid;
  for (const auto& m : members) {
    grid.insert(grid.end(), m.support().begin(), m.support().end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> lo(grid.size()), hi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double mn = 1.0, mx = 0.0;
    for (const auto& m : members) {
      const double p = m(grid[i]);
      mn = std::min(mn, p);
      mx = std::max(mx, p);
    }
    lo[i] = mn;
    hi[i] = mx;
  }
  box.lower = Ecdf(grid, lo);
  box.upper = Ecdf(std::move(grid), std::move(hi));
  return box;
}

std::string moments_csv(const MomentCurves& m) {
  std::string text = "x_um,mu,sigma,gamma1,gamma2\n";
  for (std::size_t j = 0; j < m.x.size(); ++j) {
    text += csv_line({format_double(m.x[j]), format_double(m.mu[j]),
                      format_double(m.sigma[j]), format_double(m.gamma1[j]),
                      format_double(m.gamma2[j])});
  }
  return text;
}

std::string correlation_csv(const CorrelationCurve& c) {
  std::string text = "r_um,C\n";
  for (std::size_t i = 0; i < c.lags.size(); ++i) {
    text += csv_line({format_double(c.lags[i]), format_double(c.c[i])});
  }
  return text;
}

std::string ecdf_csv(const Ecdf& e) {
  std::string text = "value,prob\n";
  for (std::size_t i = 0; i < e.support().size(); ++i) {
    text += csv_line({format_double(e.support()[i]),
                      format_double(e.probs()[i])});
  }
  return text;
}

}  // namespace fuzzstoch
