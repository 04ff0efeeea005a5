#include "fuzzstoch/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"
#include "fuzzstoch/parallel.hpp"
#include "fuzzstoch/rng.hpp"

namespace fuzzstoch {

namespace {

constexpr std::uint64_t kNormalStreamBase = 0x79737472ULL;
constexpr std::uint64_t kGroupStreamBase = 0x67727075ULL;
constexpr double kMetersPerMicron = 1e-6;

std::vector<double> descending(std::vector<double> alphas) {
  std::sort(alphas.begin(), alphas.end(), std::greater<double>());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  return alphas;
}

// Uniform grid on the completely interactive segment, endpoints included.
std::vector<std::array<double, 4>> segment_grid4(const JointAlphaCut& cut,
                                                 int m_f) {
  std::vector<std::array<double, 4>> grid;
  grid.reserve(static_cast<std::size_t>(m_f));
  for (int k = 0; k < m_f; ++k) {
    const double t = m_f == 1 ? 0.5
                              : static_cast<double>(k) / (m_f - 1);
    std::array<double, 4> z;
    for (std::size_t d = 0; d < 4; ++d) {
      z[d] = cut.box[d].lo + t * cut.box[d].width();
    }
    grid.push_back(z);
  }
  return grid;
}

std::vector<double> normals_for(std::uint64_t seed, int m, int n) {
  CounterRng rng(seed, kNormalStreamBase + static_cast<std::uint64_t>(m));
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = rng.normal();
  return y;
}

void finalize_cdfs(AlphaCutCdfs* out) {
  for (std::size_t a = 0; a < out->alphas.size(); ++a) {
    out->left.emplace_back(out->q_left[a]);
    out->right.emplace_back(out->q_right[a]);
  }
}

}  // namespace

int AlphaCutCdfs::level_index(double alpha) const {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (std::fabs(alphas[i] - alpha) < 1e-12) return static_cast<int>(i);
  }
  throw DomainError("band has no such α level");
}

BetaQuantileTable::BetaQuantileTable(const BetaParams& bp, int nodes) {
  if (nodes < 3) throw DomainError("quantile table needs >= 3 nodes");
  value_.resize(static_cast<std::size_t>(nodes));
  step_ = 1.0 / (nodes - 1);
  value_.front() = bp.loc;
  value_.back() = bp.loc + bp.scale;
  for (int i = 1; i + 1 < nodes; ++i) {
    value_[static_cast<std::size_t>(i)] = beta_quantile(i * step_, bp);
  }
  // Fritsch-Carlson derivatives on the uniform grid keep monotonicity.
  deriv_.resize(value_.size());
  const int n = nodes;
  auto secant = [&](int i) {
    return (value_[static_cast<std::size_t>(i) + 1] -
            value_[static_cast<std::size_t>(i)]) /
           step_;
  };
  deriv_.front() = secant(0);
  deriv_.back() = secant(n - 2);
  for (int i = 1; i + 1 < n; ++i) {
    const double d0 = secant(i - 1);
    const double d1 = secant(i);
    deriv_[static_cast<std::size_t>(i)] =
        (d0 * d1 <= 0.0) ? 0.0 : 2.0 * d0 * d1 / (d0 + d1);
  }
}

double BetaQuantileTable::operator()(double prob) const {
  prob = std::clamp(prob, 0.0, 1.0);
  const int n = static_cast<int>(value_.size());
  int i = std::min(static_cast<int>(prob / step_), n - 2);
  const double t = (prob - i * step_) / step_;
  const double y0 = value_[static_cast<std::size_t>(i)];
  const double y1 = value_[static_cast<std::size_t>(i) + 1];
  const double m0 = deriv_[static_cast<std::size_t>(i)] * step_;
  const double m1 = deriv_[static_cast<std::size_t>(i) + 1] * step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
         (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
}

AlphaCutCdfs qoi_alpha_cdfs(
    const std::function<double(const std::vector<double>&,
                               const std::vector<double>&)>& qoi,
    const FuzzyVector& vec, int n_y, const std::vector<double>& alphas,
    int M_s, int M_f, std::uint64_t seed, int threads) {
  if (vec.interaction() != Interaction::CompletelyInteractive) {
    throw DomainError("α-cut CDFs need a completely interactive vector");
  }
  if (M_s < 1 || M_f < 1) throw DomainError("M_s and M_f must be >= 1");
  AlphaCutCdfs out;
  out.alphas = descending(alphas);
  out.samples = M_s;
  out.fuzzy_grid = M_f;
  out.seed = seed;
  const std::size_t n_levels = out.alphas.size();
  out.q_left.assign(n_levels, std::vector<double>(
                                  static_cast<std::size_t>(M_s)));
  out.q_right = out.q_left;

  std::vector<std::vector<std::vector<double>>> grids(n_levels);
  for (std::size_t a = 0; a < n_levels; ++a) {
    const auto cut = vec.joint_alpha_cut(out.alphas[a]);
    const int n = vec.size();
    for (int k = 0; k < M_f; ++k) {
      const double t = M_f == 1 ? 0.5 : static_cast<double>(k) / (M_f - 1);
      std::vector<double> z(static_cast<std::size_t>(n));
      for (int d = 0; d < n; ++d) {
        z[static_cast<std::size_t>(d)] =
            cut.box[static_cast<std::size_t>(d)].lo +
            t * cut.box[static_cast<std::size_t>(d)].width();
      }
      grids[a].push_back(std::move(z));
    }
  }

  parallel_for(static_cast<std::size_t>(M_s), threads, [&](std::size_t m) {
    const auto y = normals_for(seed, static_cast<int>(m), n_y);
    double running_lo = std::numeric_limits<double>::infinity();
    double running_hi = -running_lo;
    for (std::size_t a = 0; a < n_levels; ++a) {
      for (const auto& z : grids[a]) {
        const double q = qoi(y, z);
        running_lo = std::min(running_lo, q);
        running_hi = std::max(running_hi, q);
      }
      out.q_left[a][m] = running_lo;
      out.q_right[a][m] = running_hi;
    }
  });
  finalize_cdfs(&out);
  return out;
}

AlphaCutCdfs local_qoi_alpha_cdfs(const FuzzyStochasticField& field,
                                  double upto_um,
                                  const std::vector<double>& alphas,
                                  int M_s, int M_f, std::uint64_t seed,
                                  int threads) {
  if (M_s < 1 || M_f < 1) throw DomainError("M_s and M_f must be >= 1");
  const KlBasis& kl = field.kl;
  const int j_max = static_cast<int>(std::llround(upto_um / kl.dx));
  if (j_max < 1 || j_max >= kl.points()) {
    throw DomainError("integration bound must be an interior grid node");
  }
  AlphaCutCdfs out;
  out.alphas = descending(alphas);
  out.samples = M_s;
  out.fuzzy_grid = M_f;
  out.seed = seed;
  const std::size_t n_levels = out.alphas.size();
  out.q_left.assign(n_levels, std::vector<double>(
                                  static_cast<std::size_t>(M_s)));
  out.q_right = out.q_left;

  // Standardized KL weights: u_j = Φ(Σ_n c[n][j] y_n).
  const int n_pts = j_max + 1;
  std::vector<double> coeff(static_cast<std::size_t>(kl.terms) * n_pts);
  for (int n = 0; n < kl.terms; ++n) {
    const double w = std::sqrt(kl.eigenvalues[static_cast<std::size_t>(n)]);
    for (int j = 0; j < n_pts; ++j) {
      const double s = kl.point_std[static_cast<std::size_t>(j)];
      coeff[static_cast<std::size_t>(n) * n_pts + static_cast<std::size_t>(
                j)] = s > 0.0 ? w * kl.phi_at(n, j) / s : 0.0;
    }
  }
  std::vector<double> weight(static_cast<std::size_t>(n_pts), kl.dx);
  weight.front() = weight.back() = 0.5 * kl.dx;

  // Per (α, k): beta parameters once, quantiles through a table.
  std::vector<std::vector<BetaQuantileTable>> tables(n_levels);
  for (std::size_t a = 0; a < n_levels; ++a) {
    const auto grid = segment_grid4(field.moments.joint_alpha_cut(
                                        out.alphas[a]),
                                    M_f);
    tables[a].resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t k) {
      tables[a][k] = BetaQuantileTable(field.beta_for(grid[k]));
    });
  }

  parallel_for(static_cast<std::size_t>(M_s), threads, [&](std::size_t m) {
    const auto y = normals_for(seed, static_cast<int>(m), kl.terms);
    std::vector<double> u(static_cast<std::size_t>(n_pts), 0.0);
    for (int n = 0; n < kl.terms; ++n) {
      const double yn = y[static_cast<std::size_t>(n)];
      const double* row = &coeff[static_cast<std::size_t>(n) * n_pts];
      for (int j = 0; j < n_pts; ++j) u[static_cast<std::size_t>(j)] +=
          row[j] * yn;
    }
    for (int j = 0; j < n_pts; ++j) {
      u[static_cast<std::size_t>(j)] = std_normal_cdf(u[static_cast<std::size_t>(
          j)]);
    }
    double running_lo = std::numeric_limits<double>::infinity();
    double running_hi = -running_lo;
    for (std::size_t a = 0; a < n_levels; ++a) {
      for (const auto& table : tables[a]) {
        double sum = 0.0;
        for (int j = 0; j < n_pts; ++j) {
          sum += weight[static_cast<std::size_t>(j)] *
                 table(u[static_cast<std::size_t>(j)]);
        }
        sum *= kMetersPerMicron;
        running_lo = std::min(running_lo, sum);
        running_hi = std::max(running_hi, sum);
      }
      out.q_left[a][m] = running_lo;
      out.q_right[a][m] = running_hi;
    }
  });
  finalize_cdfs(&out);
  return out;
}

AlphaCutCdfs global_local_alpha_cdfs(const GlobalField& gf,
                                     const LocalField& lf,
                                     const ProblemSpec& ps,
                                     const std::vector<double>& alphas,
                                     int M_s, int M_f, std::uint64_t seed,
                                     int threads) {
  if (M_s < 1 || M_f < 1) throw DomainError("M_s and M_f must be >= 1");
  const KlBasis& kl_l = lf.field.kl;
  const int n_local = kl_l.points();
  const int mid = (n_local - 1) / 2;
  const double x_l = lf.x_left_um;
  const double x_r = x_l + kl_l.x.back();
  if (x_l < 0.0 || x_r > ps.domain_um) {
    throw DomainError("local domain must lie inside the global domain");
  }

  AlphaCutCdfs out;
  out.alphas = descending(alphas);
  out.samples = M_s;
  out.fuzzy_grid = M_f;
  out.seed = seed;
  const std::size_t n_levels = out.alphas.size();
  out.q_left.assign(n_levels, std::vector<double>(
                                  static_cast<std::size_t>(M_s)));
  out.q_right = out.q_left;

  // Global per-node quantile tables (crisp betas).
  const int n_global = gf.kl.points();
  std::vector<BetaQuantileTable> global_tables(
      static_cast<std::size_t>(n_global));
  parallel_for(static_cast<std::size_t>(n_global), threads,
               [&](std::size_t j) {
                 global_tables[j] = BetaQuantileTable(gf.point_beta[j], 1025);
               });
  std::vector<double> coeff_g(static_cast<std::size_t>(gf.kl.terms) *
                              n_global);
  for (int n = 0; n < gf.kl.terms; ++n) {
    const double w = std::sqrt(gf.kl.eigenvalues[static_cast<std::size_t>(
        n)]);
    for (int j = 0; j < n_global; ++j) {
      const double s = gf.kl.point_std[static_cast<std::size_t>(j)];
      coeff_g[static_cast<std::size_t>(n) * n_global +
              static_cast<std::size_t>(j)] =
          s > 0.0 ? w * gf.kl.phi_at(n, j) / s : 0.0;
    }
  }
  std::vector<double> f_at(static_cast<std::size_t>(n_global));
  for (int j = 0; j < n_global; ++j) {
    f_at[static_cast<std::size_t>(j)] =
        F_antiderivative(gf.x[static_cast<std::size_t>(j)], ps);
  }

  std::vector<double> coeff_l(static_cast<std::size_t>(kl_l.terms) * n_local);
  for (int n = 0; n < kl_l.terms; ++n) {
    const double w = std::sqrt(kl_l.eigenvalues[static_cast<std::size_t>(n)]);
    for (int j = 0; j < n_local; ++j) {
      const double s = kl_l.point_std[static_cast<std::size_t>(j)];
      coeff_l[static_cast<std::size_t>(n) * n_local +
              static_cast<std::size_t>(j)] =
          s > 0.0 ? w * kl_l.phi_at(n, j) / s : 0.0;
    }
  }

  std::vector<std::vector<BetaQuantileTable>> tables(n_levels);
  for (std::size_t a = 0; a < n_levels; ++a) {
    const auto grid = segment_grid4(
        lf.field.moments.joint_alpha_cut(out.alphas[a]), M_f);
    tables[a].resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t k) {
      tables[a][k] = BetaQuantileTable(lf.field.beta_for(grid[k]));
    });
  }

  const int n_y = gf.kl.terms + kl_l.terms;
  parallel_for(static_cast<std::size_t>(M_s), threads, [&](std::size_t m) {
    const auto y = normals_for(seed, static_cast<int>(m), n_y);
    // Global solve under the first block of normals.
    std::vector<double> g(static_cast<std::size_t>(n_global), 0.0);
    for (int n = 0; n < gf.kl.terms; ++n) {
      const double yn = y[static_cast<std::size_t>(n)];
      const double* row = &coeff_g[static_cast<std::size_t>(n) * n_global];
      for (int j = 0; j < n_global; ++j) g[static_cast<std::size_t>(j)] +=
          row[j] * yn;
    }
    std::vector<double> u_g(static_cast<std::size_t>(n_global), 0.0);
    double prev = global_tables[0](std_normal_cdf(g[0])) * f_at[0];
    for (int j = 1; j < n_global; ++j) {
      const double cur =
          global_tables[static_cast<std::size_t>(j)](
              std_normal_cdf(g[static_cast<std::size_t>(j)])) *
          f_at[static_cast<std::size_t>(j)];
      u_g[static_cast<std::size_t>(j)] =
          u_g[static_cast<std::size_t>(j) - 1] +
          0.5 * gf.dx * kMetersPerMicron * (prev + cur);
      prev = cur;
    }
    const double u_left = pchip_eval(gf.x, u_g, x_l);
    const double u_right = pchip_eval(gf.x, u_g, x_r);

    // Local translation argument under the second block.
    std::vector<double> u(static_cast<std::size_t>(n_local), 0.0);
    for (int n = 0; n < kl_l.terms; ++n) {
      const double yn = y[static_cast<std::size_t>(gf.kl.terms + n)];
      const double* row = &coeff_l[static_cast<std::size_t>(n) * n_local];
      for (int j = 0; j < n_local; ++j) u[static_cast<std::size_t>(j)] +=
          row[j] * yn;
    }
    for (int j = 0; j < n_local; ++j) {
      u[static_cast<std::size_t>(j)] =
          std_normal_cdf(u[static_cast<std::size_t>(j)]);
    }

    double running_lo = std::numeric_limits<double>::infinity();
    double running_hi = -running_lo;
    for (std::size_t a = 0; a < n_levels; ++a) {
      for (const auto& table : tables[a]) {
        double sum_mid = 0.0;
        double sum_total = 0.0;
        double b_prev = table(u[0]);
        for (int j = 1; j < n_local; ++j) {
          const double b_cur = table(u[static_cast<std::size_t>(j)]);
          const double seg = 0.5 * kl_l.dx * (b_prev + b_cur);
          sum_total += seg;
          if (j <= mid) sum_mid += seg;
          b_prev = b_cur;
        }
        if (!(sum_total > 0.0)) {
          throw DegenerateDenominator("local coefficient integrates to zero");
        }
        const double q =
            u_left + (u_right - u_left) * sum_mid / sum_total;
        running_lo = std::min(running_lo, q);
        running_hi = std::max(running_hi, q);
      }
      out.q_left[a][m] = running_lo;
      out.q_right[a][m] = running_hi;
    }
  });
  finalize_cdfs(&out);
  return out;
}

TruthPbox truth_pbox(const SampleSet& s,
                     const std::function<double(int)>& qoi_of_sample,
                     int n_groups, int group_size, std::uint64_t seed) {
  if (group_size >= s.M) {
    throw DomainError("group size must be below the number of samples");
  }
  if (n_groups < 1 || group_size < 1) {
    throw DomainError("need at least one group and one draw");
  }
  std::vector<double> qoi(static_cast<std::size_t>(s.M));
  for (int m = 0; m < s.M; ++m) qoi[static_cast<std::size_t>(m)] =
      qoi_of_sample(m);

  TruthPbox truth;
  truth.groups = n_groups;
  truth.group_size = group_size;
  truth.seed = seed;
  std::vector<Ecdf> members;
  members.reserve(static_cast<std::size_t>(n_groups));
  for (int g = 0; g < n_groups; ++g) {
    // Partial Fisher-Yates: first group_size entries are a
    // without-replacement draw.
    CounterRng rng(seed, kGroupStreamBase + static_cast<std::uint64_t>(g));
    std::vector<int> idx(static_cast<std::size_t>(s.M));
    for (int m = 0; m < s.M; ++m) idx[static_cast<std::size_t>(m)] = m;
    for (int i = 0; i < group_size; ++i) {
      const int j = i + static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(s.M - i)));
      std::swap(idx[static_cast<std::size_t>(i)],
                idx[static_cast<std::size_t>(j)]);
    }
    std::vector<double> values(static_cast<std::size_t>(group_size));
    for (int i = 0; i < group_size; ++i) {
      values[static_cast<std::size_t>(i)] =
          qoi[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    members.emplace_back(std::move(values));
  }
  truth.box = pbox(members);
  return truth;
}

double containment(const TruthPbox& truth, const AlphaCutCdfs& band,
                   double alpha) {
  const int level = band.level_index(alpha);
  const Ecdf& left = band.left[static_cast<std::size_t>(level)];
  const Ecdf& right = band.right[static_cast<std::size_t>(level)];
  const double span = std::max(
      std::fabs(right.support().back() - left.support().front()), 1e-300);
  const double tol = 1e-9 * span;
  std::size_t inside = 0;
  std::size_t total = 0;
  for (const auto& member : truth.box.members) {
    for (int i = 0; i <= 100; ++i) {
      const double p = static_cast<double>(i) / 100.0;
      const double v = member.quantile(p);
      const double lo = left.quantile(p);
      const double hi = right.quantile(p);
      ++total;
      if (v >= lo - tol && v <= hi + tol) ++inside;
    }
  }
  return static_cast<double>(inside) / static_cast<double>(total);
}

double data_qoi_integral(const SampleSet& s, int m, double upto_um) {
  double sum = 0.0;
  for (int j = 0; j < s.points(); ++j) {
    if (s.x[static_cast<std::size_t>(j)] > upto_um) break;
    sum += s.sample(m, j);
  }
  return sum * s.h * kMetersPerMicron;
}

double data_qoi_weighted(const SampleSet& s, int m, const ProblemSpec& ps) {
  double sum = 0.0;
  for (int j = 0; j < s.points(); ++j) {
    const double x = s.x[static_cast<std::size_t>(j)];
    if (x > ps.x0_um) break;
    sum += s.sample(m, j) * F_antiderivative(x, ps);
  }
  return sum * s.h * kMetersPerMicron;
}

std::string bands_csv(const AlphaCutCdfs& bands) {
  std::string text = "alpha,side,value,prob\n";
  for (std::size_t a = 0; a < bands.alphas.size(); ++a) {
    const std::string alpha = format_double(bands.alphas[a]);
    for (const char* side : {"left", "right"}) {
      const Ecdf& e = side == std::string("left") ? bands.left[a]
                                                  : bands.right[a];
      for (std::size_t i = 0; i < e.support().size(); ++i) {
        text += csv_line({alpha, side, format_double(e.support()[i]),
                          format_double(e.probs()[i])});
      }
    }
  }
  return text;
}

std::string qoi_samples_csv(const AlphaCutCdfs& bands) {
  std::string text = "y_index,alpha,Q_left,Q_right\n";
  for (std::size_t a = 0; a < bands.alphas.size(); ++a) {
    const std::string alpha = format_double(bands.alphas[a]);
    for (std::size_t m = 0; m < bands.q_left[a].size(); ++m) {
      text += csv_line({std::to_string(m), alpha,
                        format_double(bands.q_left[a][m]),
                        format_double(bands.q_right[a][m])});
    }
  }
  return text;
}

std::string pbox_members_csv(const PBox& box) {
  std::string text = "member,value,prob\n";
  auto dump = [&text](const std::string& name, const Ecdf& e) {
    for (std::size_t i = 0; i < e.support().size(); ++i) {
      text += csv_line({name, format_double(e.support()[i]),
                        format_double(e.probs()[i])});
    }
  };
  dump("lower", box.lower);
  dump("upper", box.upper);
  for (std::size_t k = 0; k < box.members.size(); ++k) {
    dump(std::to_string(k), box.members[k]);
  }
  return text;
}

}  // namespace fuzzstoch
