#include "fuzzstoch/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"

namespace fuzzstoch {

FuzzyVariable FuzzyVariable::crisp(double c) {
  FuzzyVariable v;
  v.z_ = {c};
  v.mu_ = {1.0};
  return v;
}

FuzzyVariable FuzzyVariable::triangle(double lo, double peak, double hi) {
  if (lo == hi) return crisp(lo);
  return from_knots({lo, peak, hi}, {0.0, 1.0, 0.0});
}

FuzzyVariable FuzzyVariable::trapezoid(double lo, double peak_lo,
                                       double peak_hi, double hi) {
  if (lo == hi) return crisp(lo);
  if (peak_lo == peak_hi) return triangle(lo, peak_lo, hi);
  return from_knots({lo, peak_lo, peak_hi, hi}, {0.0, 1.0, 1.0, 0.0});
}

FuzzyVariable FuzzyVariable::from_knots(std::vector<double> z,
                                        std::vector<double> mu) {
  if (z.size() != mu.size() || z.empty()) {
    throw DomainError("membership knots malformed");
  }
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i] < z[i - 1]) throw DomainError("membership knots not sorted");
  }
  double peak = 0.0;
  for (double m : mu) {
    if (m < 0.0 || m > 1.0) throw DomainError("membership outside [0,1]");
    peak = std::max(peak, m);
  }
  if (std::fabs(peak - 1.0) > 1e-12) {
    throw DomainError("membership not normalized (sup μ must be 1)");
  }
  // Convexity: nondecreasing up to the peak region, nonincreasing after.
  std::size_t first_peak = 0;
  while (mu[first_peak] < 1.0 - 1e-12) ++first_peak;
  std::size_t last_peak = mu.size() - 1;
  while (mu[last_peak] < 1.0 - 1e-12) --last_peak;
  for (std::size_t i = 1; i <= first_peak; ++i) {
    if (mu[i] < mu[i - 1] - 1e-12) throw DomainError("non-convex membership");
  }
  for (std::size_t i = last_peak + 1; i < mu.size(); ++i) {
    if (mu[i] > mu[i - 1] + 1e-12) throw DomainError("non-convex membership");
  }
  FuzzyVariable v;
  v.z_ = std::move(z);
  v.mu_ = std::move(mu);
  return v;
}

double FuzzyVariable::membership(double z) const {
  if (z < z_.front() || z > z_.back()) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < z_.size(); ++i) {
    if (z < z_[i] || z > z_[i + 1]) continue;
    if (z_[i + 1] == z_[i]) {
      best = std::max({best, mu_[i], mu_[i + 1]});
    } else {
      const double t = (z - z_[i]) / (z_[i + 1] - z_[i]);
      best = std::max(best, mu_[i] + t * (mu_[i + 1] - mu_[i]));
    }
  }
  if (z_.size() == 1) best = mu_[0];
  return best;
}

Interval FuzzyVariable::alpha_cut(double alpha) const {
  alpha = std::clamp(alpha, 0.0, 1.0);
  if (alpha == 0.0) return {z_.front(), z_.back()};
  if (z_.size() == 1) return {z_.front(), z_.front()};
  double lo = z_.back();
  double hi = z_.front();
  for (std::size_t i = 0; i + 1 < z_.size(); ++i) {
    const double m0 = mu_[i], m1 = mu_[i + 1];
    const double z0 = z_[i], z1 = z_[i + 1];
    const double seg_max = std::max(m0, m1);
    if (seg_max < alpha) continue;
    double a = z0, b = z1;
    if (m0 < alpha) {
      // Rising segment crosses α.
      a = z0 + (z1 - z0) * (alpha - m0) / (m1 - m0);
    }
    if (m1 < alpha) {
      b = z0 + (z1 - z0) * (alpha - m0) / (m1 - m0);
    }
    lo = std::min(lo, std::min(a, b));
    hi = std::max(hi, std::max(a, b));
  }
  if (mu_.front() >= alpha) lo = std::min(lo, z_.front());
  if (mu_.back() >= alpha) hi = std::max(hi, z_.back());
  return {lo, hi};
}

FuzzyVector::FuzzyVector(std::vector<FuzzyVariable> components,
                         Interaction interaction, std::vector<double> betas)
    : components_(std::move(components)),
      interaction_(interaction),
      betas_(std::move(betas)) {
  if (components_.empty()) throw DomainError("fuzzy vector must be nonempty");
  if (interaction_ == Interaction::PartiallyInteractive) {
    const std::size_t n = components_.size();
    const std::size_t pairs = n * (n - 1) / 2;
    if (betas_.size() == 1 && pairs > 1) {
      betas_.assign(pairs, betas_[0]);
    }
    if (betas_.size() != pairs) {
      throw DomainError("partial interaction needs one β per pair");
    }
    for (double b : betas_) {
      if (!(b > 0.0)) throw DomainError("interaction β must be positive");
    }
  }
}

JointAlphaCut FuzzyVector::joint_alpha_cut(double alpha) const {
  JointAlphaCut cut;
  cut.alpha = std::clamp(alpha, 0.0, 1.0);
  cut.box.reserve(components_.size());
  for (const auto& c : components_) cut.box.push_back(c.alpha_cut(cut.alpha));
  switch (interaction_) {
    case Interaction::NonInteractive:
      cut.kind = JointAlphaCut::Kind::Box;
      break;
    case Interaction::CompletelyInteractive:
      cut.kind = JointAlphaCut::Kind::Segment;
      break;
    case Interaction::PartiallyInteractive:
      cut.kind = JointAlphaCut::Kind::Hexagon;
      cut.betas = betas_;
      break;
  }
  return cut;
}

namespace {

bool hexagon_feasible(const JointAlphaCut& cut, const std::vector<double>& z,
                      double tol) {
  const std::size_t n = z.size();
  std::size_t pair = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++pair) {
      const double band = cut.betas[pair] * (1.0 - cut.alpha);
      if (std::fabs(z[i] - z[j]) > band + tol) return false;
    }
  }
  return true;
}

}  // namespace

bool JointAlphaCut::contains(const std::vector<double>& z, double tol) const {
  if (z.size() != box.size()) return false;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < box[i].lo - tol || z[i] > box[i].hi + tol) return false;
  }
  if (kind == Kind::Segment) {
    // On the main diagonal all components share the same parameter t.
    double t_lo = 0.0, t_hi = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double w = box[i].width();
      if (w <= tol) {
        if (std::fabs(z[i] - box[i].lo) > tol) return false;
        continue;
      }
      const double t = (z[i] - box[i].lo) / w;
      t_lo = std::max(t_lo, t - tol / w);
      t_hi = std::min(t_hi, t + tol / w);
    }
    return t_lo <= t_hi;
  }
  if (kind == Kind::Hexagon) return hexagon_feasible(*this, z, tol);
  return true;
}

std::vector<std::vector<double>> JointAlphaCut::discretize(
    int target_points) const {
  const std::size_t n = box.size();
  std::vector<std::vector<double>> points;
  if (kind == Kind::Segment) {
    const int k = std::max(2, target_points);
    points.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const double t = static_cast<double>(i) / (k - 1);
      std::vector<double> z(n);
      for (std::size_t d = 0; d < n; ++d) {
        z[d] = box[d].lo + t * box[d].width();
      }
      points.push_back(std::move(z));
    }
    return points;
  }
  // Tensor grid with roughly target_points total nodes.
  const int per_dim = std::max(
      2, static_cast<int>(std::llround(
             std::pow(static_cast<double>(std::max(2, target_points)),
                      1.0 / static_cast<double>(n)))));
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> z(n);
    for (std::size_t d = 0; d < n; ++d) {
      const double t = static_cast<double>(idx[d]) / (per_dim - 1);
      z[d] = box[d].lo + t * box[d].width();
    }
    if (kind != Kind::Hexagon || hexagon_feasible(*this, z, 1e-12)) {
      points.push_back(std::move(z));
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == n) break;
  }
  if (kind == Kind::Hexagon && points.empty()) {
    // The diagonal of the box always satisfies the box constraints; keep
    // whichever diagonal nodes satisfy the band constraints as well.
    for (int i = 0; i < per_dim; ++i) {
      const double t = static_cast<double>(i) / (per_dim - 1);
      std::vector<double> z(n);
      for (std::size_t d = 0; d < n; ++d) z[d] = box[d].lo + t * box[d].width();
      if (hexagon_feasible(*this, z, 1e-12)) points.push_back(std::move(z));
    }
  }
  if (points.empty()) {
    throw DomainError("joint α-cut has no feasible points");
  }
  return points;
}

double hexagon_membership(double z1, double z2, double beta) {
  if (!(beta > 0.0)) throw DomainError("β must be positive");
  if (std::fabs(z1) > 1.0 || std::fabs(z2) > 1.0) return 0.0;
  const double diag = 1.0 - std::fabs(z1 - z2) / beta;
  const double sq = 1.0 - std::max(std::fabs(z1), std::fabs(z2));
  return std::max(0.0, std::min(diag, sq));
}

Interval image_alpha_cut(
    const std::function<double(const std::vector<double>&)>& g,
    const JointAlphaCut& cut, int grid_size) {
  if (grid_size < 2) throw DomainError("image grid needs at least 2 points");
  const auto points = cut.discretize(grid_size);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& z : points) {
    const double w = g(z);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {lo, hi};
}

Interval fuzzy_add(const Interval& r1, const Interval& r2) {
  return {r1.lo + r2.lo, r1.hi + r2.hi};
}

Interval fuzzy_sub(const Interval& r1, const Interval& r2) {
  return {r1.lo - r2.hi, r1.hi - r2.lo};
}

Interval fuzzy_mul(const Interval& r1, const Interval& r2) {
  const double p[4] = {r1.lo * r2.lo, r1.lo * r2.hi, r1.hi * r2.lo,
                       r1.hi * r2.hi};
  return {std::min({p[0], p[1], p[2], p[3]}),
          std::max({p[0], p[1], p[2], p[3]})};
}

Interval fuzzy_div(const Interval& r1, const Interval& r2) {
  if (r2.lo <= 0.0 && r2.hi >= 0.0) {
    throw DivisionByZeroInterval("divisor α-cut contains zero");
  }
  const double p[4] = {r1.lo / r2.lo, r1.lo / r2.hi, r1.hi / r2.lo,
                       r1.hi / r2.hi};
  return {std::min({p[0], p[1], p[2], p[3]}),
          std::max({p[0], p[1], p[2], p[3]})};
}

std::vector<Interval> fuzzy_integrate(
    const std::vector<std::function<double(const std::vector<double>&)>>&
        integrand,
    double dx, const FuzzyVector& vec, const std::vector<double>& alphas,
    int grid_size) {
  if (integrand.size() < 2) {
    throw DomainError("quadrature needs at least 2 grid points");
  }
  std::vector<Interval> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    const auto cut = vec.joint_alpha_cut(alpha);
    const auto points = cut.discretize(grid_size);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& z : points) {
      double sum = 0.0;
      for (std::size_t j = 0; j < integrand.size(); ++j) {
        const double w =
            (j == 0 || j + 1 == integrand.size()) ? 0.5 * dx : dx;
        sum += w * integrand[j](z);
      }
      lo = std::min(lo, sum);
      hi = std::max(hi, sum);
    }
    out.push_back({lo, hi});
  }
  return out;
}

namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double at(double x) const { return intercept + slope * x; }
  double zero() const { return -intercept / slope; }
};

// Least squares fit y = a + b x; false when degenerate (fewer than two
// distinct abscissae).
bool fit_line(const std::vector<double>& xs, const std::vector<double>& ys,
              Line* line) {
  const std::size_t n = xs.size();
  if (n < 2) return false;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return false;
  line->slope = sxy / sxx;
  line->intercept = my - line->slope * mx;
  return true;
}

}  // namespace

FuzzyVariable fuzzify_from_histogram(const Histogram& h, double plateau_tol,
                                     FuzzifyDiagnostics* diag) {
  FuzzifyDiagnostics local;
  const std::size_t n_bins = h.counts.size();
  std::size_t nonempty = 0;
  std::size_t max_count = 0;
  std::size_t mode_bin = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    if (h.counts[i] > 0) ++nonempty;
    if (h.counts[i] > max_count) {
      max_count = h.counts[i];
      mode_bin = i;  // ties resolve to the leftmost bin
    }
  }
  if (nonempty == 0) throw DomainError("empty histogram");
  const double data_min = h.bin_edges.front();
  const double data_max = h.bin_edges.back();
  if (nonempty == 1) {
    // Degenerate input: a single occupied bin carries no shape, collapse
    // to a crisp value at its midpoint.
    if (diag) *diag = local;
    return FuzzyVariable::crisp(h.mid(mode_bin));
  }

  // Plateau: a run of near-full bins around the mode turns the triangle
  // into a trapezoid spanning the run.
  std::size_t run_lo = mode_bin;
  std::size_t run_hi = mode_bin;
  const double floor_count = (1.0 - plateau_tol) * static_cast<double>(
                                                       max_count);
  while (run_lo > 0 &&
         static_cast<double>(h.counts[run_lo - 1]) >= floor_count) {
    --run_lo;
  }
  while (run_hi + 1 < n_bins &&
         static_cast<double>(h.counts[run_hi + 1]) >= floor_count) {
    ++run_hi;
  }
  const bool plateau = run_hi > run_lo;

  const std::size_t left_anchor = plateau ? run_lo : mode_bin;
  const std::size_t right_anchor = plateau ? run_hi : mode_bin;

  std::vector<double> lx, ly, rx, ry;
  for (std::size_t i = 0; i <= left_anchor; ++i) {
    lx.push_back(h.mid(i));
    ly.push_back(static_cast<double>(h.counts[i]));
  }
  for (std::size_t i = right_anchor; i < n_bins; ++i) {
    rx.push_back(h.mid(i));
    ry.push_back(static_cast<double>(h.counts[i]));
  }

  const auto fallback = [&]() {
    local.used_fallback = true;
    local.trapezoidal = false;
    if (diag) *diag = local;
    return FuzzyVariable::triangle(data_min, h.mid(mode_bin), data_max);
  };

  Line left, right;
  if (!fit_line(lx, ly, &left) || !fit_line(rx, ry, &right)) {
    return fallback();
  }
  if (!(left.slope > 0.0) || !(right.slope < 0.0)) return fallback();
  const double lo = left.zero();
  const double hi = right.zero();

  if (plateau) {
    const double p_lo = h.mid(run_lo);
    const double p_hi = h.mid(run_hi);
    if (!(lo < p_lo && p_hi < hi)) return fallback();
    local.trapezoidal = true;
    if (diag) *diag = local;
    return FuzzyVariable::trapezoid(lo, p_lo, p_hi, hi);
  }

  const double z_peak = (right.intercept - left.intercept) /
                        (left.slope - right.slope);
  const double peak_height = left.at(z_peak);
  if (!(lo < z_peak && z_peak < hi) || !(peak_height > 0.0)) {
    return fallback();
  }
  if (diag) *diag = local;
  // Normalizing the fitted tent to height one at the intersection leaves
  // exactly the triangle through the two line zeros.
  return FuzzyVariable::triangle(lo, z_peak, hi);
}

std::string membership_json(const FuzzyVariable& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.knots_z().size(); ++i) {
    if (i) out += ",";
    out += "{\"z\":" + format_double(v.knots_z()[i]) +
           ",\"mu\":" + format_double(v.knots_mu()[i]) + "}";
  }
  out += "]";
  return out;
}

std::string alpha_cut_table_csv(const FuzzyVariable& v,
                                const std::vector<double>& alphas) {
  std::string text = "alpha,lo,hi\n";
  for (double a : alphas) {
    const Interval cut = v.alpha_cut(a);
    text += csv_line({format_double(a), format_double(cut.lo),
                      format_double(cut.hi)});
  }
  return text;
}

}  // namespace fuzzstoch
