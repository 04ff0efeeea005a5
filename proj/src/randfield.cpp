#include "fuzzstoch/randfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"
#include "fuzzstoch/rng.hpp"

namespace fuzzstoch {

double se_covariance(double x1, double x2, double corr_len) {
  if (!(corr_len > 0.0)) throw DomainError("correlation length must be > 0");
  const double d = x1 - x2;
  return std::exp(-d * d / (2.0 * corr_len * corr_len));
}

namespace {

// Cubic 4-point Lagrange interpolation on a uniform grid.
double interp_cubic(const std::vector<double>& grid_x,
                    const std::vector<double>& grid_y, double dx, double x) {
  const int n = static_cast<int>(grid_x.size());
  if (n == 1) return grid_y[0];
  double t = (x - grid_x[0]) / dx;
  int i = static_cast<int>(std::floor(t));
  i = std::clamp(i, 0, n - 2);
  if (n < 4) {
    const double f = t - i;
    return grid_y[static_cast<std::size_t>(i)] * (1.0 - f) +
           grid_y[static_cast<std::size_t>(i + 1)] * f;
  }
  int i0 = std::clamp(i - 1, 0, n - 4);
  const double s = t - i0;
  const double y0 = grid_y[static_cast<std::size_t>(i0)];
  const double y1 = grid_y[static_cast<std::size_t>(i0 + 1)];
  const double y2 = grid_y[static_cast<std::size_t>(i0 + 2)];
  const double y3 = grid_y[static_cast<std::size_t>(i0 + 3)];
  const double c0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double c1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double c2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double c3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return c0 * y0 + c1 * y1 + c2 * y2 + c3 * y3;
}

}  // namespace

KlBasis kl_decompose(double L, double h_grid, double corr_len,
                     double preserved_std_fraction) {
  if (!(L > 0.0 && h_grid > 0.0 && corr_len > 0.0)) {
    throw DomainError("KL decomposition requires positive L, h, ℓ");
  }
  if (!(preserved_std_fraction > 0.0 && preserved_std_fraction <= 1.0)) {
    throw DomainError("preserved fraction must be in (0, 1]");
  }
  const int fine_intervals = static_cast<int>(std::llround(L / h_grid));
  if (fine_intervals < 1 ||
      std::fabs(fine_intervals * h_grid - L) > 1e-6 * L) {
    throw DomainError("grid spacing must divide the domain length");
  }

  // Eigen-solve grid: spacing at most ℓ/10, never finer than the target
  // grid, and an exact divisor of it.
  int stride = std::max(1, static_cast<int>(corr_len / (10.0 * h_grid)));
  while (fine_intervals % stride != 0) --stride;
  const double cs = stride * h_grid;
  const int n_c = fine_intervals / stride + 1;

  Eigen::MatrixXd k(n_c, n_c);
  for (int i = 0; i < n_c; ++i) {
    for (int j = 0; j < n_c; ++j) {
      k(i, j) = cs * se_covariance(i * cs, j * cs, corr_len);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  if (solver.info() != Eigen::Success) {
    throw EigenFailure("covariance eigendecomposition failed");
  }
  // Ascending from Eigen; flip to descending and clamp tiny negatives.
  std::vector<double> lambda(static_cast<std::size_t>(n_c));
  for (int i = 0; i < n_c; ++i) {
    lambda[static_cast<std::size_t>(i)] =
        std::max(0.0, solver.eigenvalues()(n_c - 1 - i));
  }
  double total = 0.0;
  for (double l : lambda) total += l;

  const double target = preserved_std_fraction * preserved_std_fraction *
                        total;
  int n_terms = 0;
  double cum = 0.0;
  while (n_terms < n_c && cum < target) {
    cum += lambda[static_cast<std::size_t>(n_terms)];
    ++n_terms;
  }
  n_terms = std::max(1, n_terms);

  // Residual check of the retained eigenpairs.
  const double norm_k = std::max(lambda[0], 1e-300);
  for (int n = 0; n < n_terms; ++n) {
    const Eigen::VectorXd v = solver.eigenvectors().col(n_c - 1 - n);
    const double resid =
        (k * v - lambda[static_cast<std::size_t>(n)] * v).norm();
    if (resid > 1e-8 * norm_k) {
      throw EigenFailure("eigenpair residual above tolerance");
    }
  }

  KlBasis kl;
  kl.dx = h_grid;
  kl.corr_length = corr_len;
  kl.preserved_fraction = preserved_std_fraction;
  kl.terms = n_terms;
  kl.eigenvalue_total = total;
  kl.eigenvalues.assign(lambda.begin(), lambda.begin() + n_terms);
  const int n_f = fine_intervals + 1;
  kl.x.resize(static_cast<std::size_t>(n_f));
  for (int j = 0; j < n_f; ++j) kl.x[static_cast<std::size_t>(j)] =
      j * h_grid;
  kl.phi.assign(static_cast<std::size_t>(n_terms) * n_f, 0.0);

  if (stride == 1) {
    const double inv_sqrt = 1.0 / std::sqrt(cs);
    for (int n = 0; n < n_terms; ++n) {
      const Eigen::VectorXd v = solver.eigenvectors().col(n_c - 1 - n);
      for (int j = 0; j < n_f; ++j) {
        kl.phi[static_cast<std::size_t>(n) * n_f +
               static_cast<std::size_t>(j)] = v(j) * inv_sqrt;
      }
    }
  } else {
    // Interpolate the coarse eigenvectors to the fine grid, then restore
    // Δx-weighted orthonormality with modified Gram-Schmidt.
    std::vector<double> coarse_x(static_cast<std::size_t>(n_c));
    for (int i = 0; i < n_c; ++i) coarse_x[static_cast<std::size_t>(i)] =
        i * cs;
    const double inv_sqrt = 1.0 / std::sqrt(cs);
    for (int n = 0; n < n_terms; ++n) {
      const Eigen::VectorXd v = solver.eigenvectors().col(n_c - 1 - n);
      std::vector<double> coarse_y(static_cast<std::size_t>(n_c));
      for (int i = 0; i < n_c; ++i) coarse_y[static_cast<std::size_t>(i)] =
          v(i) * inv_sqrt;
      for (int j = 0; j < n_f; ++j) {
        kl.phi[static_cast<std::size_t>(n) * n_f + static_cast<std::size_t>(
                   j)] =
            interp_cubic(coarse_x, coarse_y, cs, j * h_grid);
      }
    }
    for (int n = 0; n < n_terms; ++n) {
      double* fn = &kl.phi[static_cast<std::size_t>(n) * n_f];
      for (int m = 0; m < n; ++m) {
        const double* fm = &kl.phi[static_cast<std::size_t>(m) * n_f];
        double dot = 0.0;
        for (int j = 0; j < n_f; ++j) dot += fn[j] * fm[j];
        dot *= h_grid;
        for (int j = 0; j < n_f; ++j) fn[j] -= dot * fm[j];
      }
      double norm2 = 0.0;
      for (int j = 0; j < n_f; ++j) norm2 += fn[j] * fn[j];
      norm2 *= h_grid;
      if (norm2 <= 0.0) throw EigenFailure("eigenfunction collapsed");
      const double inv = 1.0 / std::sqrt(norm2);
      for (int j = 0; j < n_f; ++j) fn[j] *= inv;
    }
  }

  kl.point_std.assign(static_cast<std::size_t>(n_f), 0.0);
  for (int j = 0; j < n_f; ++j) {
    double var = 0.0;
    for (int n = 0; n < n_terms; ++n) {
      const double f = kl.phi_at(n, j);
      var += kl.eigenvalues[static_cast<std::size_t>(n)] * f * f;
    }
    kl.point_std[static_cast<std::size_t>(j)] = std::sqrt(var);
  }
  return kl;
}

std::vector<double> sample_gaussian_field(const KlBasis& kl,
                                          const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != kl.terms) {
    throw DimensionMismatch("normal vector length must equal KL terms");
  }
  const int n = kl.points();
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < kl.terms; ++k) {
    const double w = std::sqrt(kl.eigenvalues[static_cast<std::size_t>(k)]) *
                     y[static_cast<std::size_t>(k)];
    const double* row = &kl.phi[static_cast<std::size_t>(k) * n];
    for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] += w * row[j];
  }
  return g;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta shapes must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(a * std::log(x) + b * std::log1p(-x) -
                             log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * betacf(a, b, x) / a;
  }
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double beta_cdf(double v, const BetaParams& bp) {
  if (!(bp.p > 0.0 && bp.q > 0.0 && bp.scale > 0.0)) {
    throw DomainError("invalid beta parameters");
  }
  const double x = (v - bp.loc) / bp.scale;
  return regularized_incomplete_beta(bp.p, bp.q, x);
}

double beta_pdf(double v, const BetaParams& bp) {
  const double x = (v - bp.loc) / bp.scale;
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((bp.p - 1.0) * std::log(x) +
                  (bp.q - 1.0) * std::log1p(-x) - log_beta(bp.p, bp.q)) /
         bp.scale;
}

double beta_quantile(double prob, const BetaParams& bp) {
  if (!(bp.p > 0.0 && bp.q > 0.0 && bp.scale > 0.0)) {
    throw DomainError("invalid beta parameters");
  }
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("quantile probability must be in (0,1)");
  }
  const double a = bp.p, b = bp.q;
  double x;
  // Initial guess: Abramowitz-Stegun 26.5.22 for moderate shapes,
  // tail expansion otherwise.
  if (a >= 1.0 && b >= 1.0) {
    const double y = norm_quantile(prob);
    const double lam = (y * y - 3.0) / 6.0;
    const double hp = 1.0 / (2.0 * a - 1.0);
    const double hq = 1.0 / (2.0 * b - 1.0);
    const double hh = 2.0 / (hp + hq);
    const double w = y * std::sqrt(hh + lam) / hh -
                     (hq - hp) * (lam + 5.0 / 6.0 - 2.0 / (3.0 * hh));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (prob < t / w) {
      x = std::pow(a * w * prob, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - prob), 1.0 / b);
    }
  }
  x = std::clamp(x, 1e-300, 1.0 - 1e-16);

  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double f = regularized_incomplete_beta(a, b, x) - prob;
    if (std::fabs(f) < 1e-12) break;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double pdf = std::exp((a - 1.0) * std::log(x) +
                                (b - 1.0) * std::log1p(-x) - log_beta(a, b));
    double next = pdf > 0.0 ? x - f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-16) break;
    x = next;
  }
  return bp.loc + bp.scale * x;
}

BetaMoments beta_moments(const BetaParams& bp) {
  const double p = bp.p, q = bp.q, s = p + q;
  const double mean = p / s;
  const double var = p * q / (s * s * (s + 1.0));
  BetaMoments m;
  m.mu = bp.loc + bp.scale * mean;
  m.sigma = bp.scale * std::sqrt(var);
  m.gamma1 = 2.0 * (q - p) * std::sqrt(s + 1.0) /
             ((s + 2.0) * std::sqrt(p * q));
  m.gamma2 = 6.0 * ((p - q) * (p - q) * (s + 1.0) - p * q * (s + 2.0)) /
             (p * q * (s + 2.0) * (s + 3.0));
  return m;
}

bool beta_moments_feasible(double gamma1, double gamma2) {
  const double b1 = gamma1 * gamma1;
  return gamma2 > b1 - 2.0 && gamma2 < 1.5 * b1;
}

BetaParams beta_from_moments(double mu, double sigma, double gamma1,
                             double gamma2, bool project_to_feasible) {
  if (!(sigma > 0.0)) throw InfeasibleMoments("sigma must be positive");
  if (!std::isfinite(mu) || !std::isfinite(gamma1) || !std::isfinite(gamma2)) {
    throw InfeasibleMoments("non-finite moments");
  }
  const double b1 = gamma1 * gamma1;
  if (!beta_moments_feasible(gamma1, gamma2)) {
    if (!project_to_feasible) {
      throw InfeasibleMoments("(gamma1, gamma2) outside the beta region");
    }
    const double lo = b1 - 2.0;
    const double hi = 1.5 * b1;
    const double margin = 0.05 * (hi - lo);
    gamma2 = std::clamp(gamma2, lo + margin, hi - margin);
  }

  // Method-of-moments solution for Pearson Type I, exact up to rounding.
  const double b2 = gamma2 + 3.0;
  const double r = 6.0 * (b2 - b1 - 1.0) / (6.0 + 3.0 * b1 - 2.0 * b2);
  double p, q;
  if (gamma1 == 0.0) {
    p = q = 0.5 * r;
  } else {
    const double root = std::sqrt(b1 * (r + 2.0) * (r + 2.0) /
                                  (b1 * (r + 2.0) * (r + 2.0) +
                                   16.0 * (r + 1.0)));
    // Positive skew puts the smaller shape first.
    p = 0.5 * r * (gamma1 > 0.0 ? 1.0 - root : 1.0 + root);
    q = r - p;
  }
  if (!(p > 0.0 && q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw InfeasibleMoments("moment matching produced invalid shapes");
  }

  // Newton polish on (gamma1, gamma2) with a numeric Jacobian.
  for (int it = 0; it < 8; ++it) {
    BetaParams trial{p, q, 0.0, 1.0};
    const BetaMoments m = beta_moments(trial);
    const double f1 = m.gamma1 - gamma1;
    const double f2 = m.gamma2 - gamma2;
    if (std::fabs(f1) < 1e-12 && std::fabs(f2) < 1e-12) break;
    const double dp = std::max(1e-7, 1e-7 * p);
    const double dq = std::max(1e-7, 1e-7 * q);
    const BetaMoments mp = beta_moments({p + dp, q, 0.0, 1.0});
    const BetaMoments mq = beta_moments({p, q + dq, 0.0, 1.0});
    const double j11 = (mp.gamma1 - m.gamma1) / dp;
    const double j12 = (mq.gamma1 - m.gamma1) / dq;
    const double j21 = (mp.gamma2 - m.gamma2) / dp;
    const double j22 = (mq.gamma2 - m.gamma2) / dq;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    double step_p = (f1 * j22 - f2 * j12) / det;
    double step_q = (f2 * j11 - f1 * j21) / det;
    double damp = 1.0;
    while ((p - damp * step_p <= 0.0 || q - damp * step_q <= 0.0) &&
           damp > 1e-6) {
      damp *= 0.5;
    }
    p -= damp * step_p;
    q -= damp * step_q;
  }

  const BetaMoments std_m = beta_moments({p, q, 0.0, 1.0});
  BetaParams out;
  out.p = p;
  out.q = q;
  out.scale = sigma / std_m.sigma;
  out.loc = mu - (p / (p + q)) * out.scale;
  return out;
}

BetaParams FuzzyStochasticField::beta_for(
    const std::array<double, 4>& z) const {
  return beta_from_moments(z[0], z[1], z[2], z[3], project_to_feasible);
}

std::vector<double> FuzzyStochasticField::sample(
    const std::vector<double>& y, const std::array<double, 4>& z) const {
  return sample_translation_field(*this, y, z);
}

std::vector<double> sample_translation_field(const FuzzyStochasticField& f,
                                             const std::vector<double>& y,
                                             const std::array<double, 4>& z) {
  const BetaParams bp = f.beta_for(z);
  const auto g = sample_gaussian_field(f.kl, y);
  std::vector<double> values(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = f.kl.point_std[j];
    // The truncated expansion has pointwise variance below one; the
    // marginal transform needs a standard Gaussian argument.
    const double gs = s > 0.0 ? g[j] / s : 0.0;
    const double u = std::clamp(std_normal_cdf(gs), 1e-16, 1.0 - 1e-16);
    values[j] = beta_quantile(u, bp);
  }
  return values;
}

FuzzyStochasticField build_fuzzy_stochastic_field(
    const SampleSet& s, const FieldSettings& settings) {
  const MomentCurves curves = pointwise_moments(s);
  auto fuzzify = [&](const std::vector<double>& vals,
                     const std::vector<std::uint8_t>& skip) {
    std::vector<double> usable;
    usable.reserve(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (!skip.empty() && skip[j]) continue;
      usable.push_back(vals[j]);
    }
    if (usable.empty()) throw DegenerateVariance("all grid points degenerate");
    return fuzzify_from_histogram(histogram(usable, settings.histogram_bins),
                                  settings.plateau_tol);
  };
  std::vector<FuzzyVariable> comps;
  comps.push_back(fuzzify(curves.mu, {}));
  comps.push_back(fuzzify(curves.sigma, {}));
  comps.push_back(fuzzify(curves.gamma1, curves.degenerate));
  comps.push_back(fuzzify(curves.gamma2, curves.degenerate));

  FuzzyStochasticField field{
      kl_decompose(s.L, s.h, settings.corr_length,
                   settings.preserved_std_fraction),
      FuzzyVector(std::move(comps), Interaction::CompletelyInteractive),
      settings.project_to_feasible};

  // Positivity of the field support over the zero-cut segment.
  const auto cut = field.moments.joint_alpha_cut(0.0);
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::array<double, 4> z;
    for (int i = 0; i < 4; ++i) {
      z[static_cast<std::size_t>(i)] =
          cut.box[static_cast<std::size_t>(i)].lo +
          t * cut.box[static_cast<std::size_t>(i)].width();
    }
    const BetaParams bp = field.beta_for(z);
    if (bp.loc < 0.0) {
      throw InfeasibleMoments(
          "fuzzified moments imply a nonpositive field support");
    }
  }
  return field;
}

std::string kl_spectrum_csv(const KlBasis& kl) {
  std::string text = "n,lambda\n";
  for (int n = 0; n < kl.terms; ++n) {
    text += csv_line({std::to_string(n + 1),
                      format_double(kl.eigenvalues[static_cast<std::size_t>(
                          n)])});
  }
  return text;
}

void write_kl_eigenfunctions(const KlBasis& kl, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  const std::uint32_t n = static_cast<std::uint32_t>(kl.terms);
  const std::uint32_t n_x = static_cast<std::uint32_t>(kl.points());
  bytes.reserve(16 + static_cast<std::size_t>(n) * n_x * 8);
  const char magic[4] = {'K', 'L', 'B', '1'};
  bytes.insert(bytes.end(), magic, magic + 4);
  auto put_u32 = [&bytes](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      bytes.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
  };
  put_u32(n);
  put_u32(n_x);
  put_u32(0);  // pad to a 16-byte header
  for (double v : kl.phi) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) {
      bytes.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
    }
  }
  write_binary_file(path, bytes);
}

}  // namespace fuzzstoch
