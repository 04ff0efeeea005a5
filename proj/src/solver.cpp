#include "fuzzstoch/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzstoch/errors.hpp"
#include "fuzzstoch/io.hpp"
#include "fuzzstoch/stats.hpp"

namespace fuzzstoch {

namespace {
constexpr double kMetersPerMicron = 1e-6;
}

double F_antiderivative(double x_um, const ProblemSpec& ps) {
  const double x_m = x_um * kMetersPerMicron;
  const double cutoff_m = ps.load_cutoff_um * kMetersPerMicron;
  if (x_m < cutoff_m) return ps.load_gpa * x_m;
  return ps.load_gpa * cutoff_m;
}

DirectSolution solve_direct(const std::vector<double>& b, double dx_um,
                            const ProblemSpec& ps) {
  if (b.size() < 2) throw DomainError("direct solve needs at least 2 nodes");
  const int n = static_cast<int>(b.size());
  DirectSolution sol;
  sol.u.resize(static_cast<std::size_t>(n));
  sol.u[0] = 0.0;
  double prev = b[0] * F_antiderivative(0.0, ps);
  for (int k = 1; k < n; ++k) {
    const double cur = b[static_cast<std::size_t>(k)] *
                       F_antiderivative(k * dx_um, ps);
    sol.u[static_cast<std::size_t>(k)] =
        sol.u[static_cast<std::size_t>(k) - 1] +
        0.5 * dx_um * kMetersPerMicron * (prev + cur);
    prev = cur;
  }
  const double idx = ps.x0_um / dx_um;
  const int k0 = static_cast<int>(std::llround(idx));
  if (k0 < 0 || k0 >= n || std::fabs(idx - k0) > 1e-6) {
    throw DomainError("x0 must coincide with a grid node");
  }
  sol.q = sol.u[static_cast<std::size_t>(k0)];
  return sol;
}

LocalSolution solve_local_dirichlet(const std::vector<double>& b_local,
                                    double dx_um, double u_left,
                                    double u_right) {
  const int n = static_cast<int>(b_local.size());
  if (n < 2) throw DomainError("local solve needs at least 2 nodes");
  if (!std::isfinite(u_left) || !std::isfinite(u_right)) {
    throw DomainError("boundary data must be finite");
  }
  std::vector<double> cum(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) {
    cum[static_cast<std::size_t>(k)] =
        cum[static_cast<std::size_t>(k) - 1] +
        0.5 * dx_um * (b_local[static_cast<std::size_t>(k) - 1] +
                       b_local[static_cast<std::size_t>(k)]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) {
    throw DegenerateDenominator("local coefficient integrates to zero");
  }
  LocalSolution sol;
  sol.u.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    sol.u[static_cast<std::size_t>(k)] =
        u_left + (u_right - u_left) * cum[static_cast<std::size_t>(k)] /
                     total;
  }
  sol.u[0] = u_left;
  sol.u[static_cast<std::size_t>(n) - 1] = u_right;
  sol.q = sol.u[static_cast<std::size_t>((n - 1) / 2)];
  return sol;
}

std::vector<double> GlobalField::sample(
    const std::vector<double>& y_global) const {
  const auto g = sample_gaussian_field(kl, y_global);
  std::vector<double> b(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = kl.point_std[j];
    const double gs = s > 0.0 ? g[j] / s : 0.0;
    const double u = std::clamp(std_normal_cdf(gs), 1e-16, 1.0 - 1e-16);
    b[j] = beta_quantile(u, point_beta[j]);
  }
  return b;
}

GlobalField build_global_field(const SampleSet& effective, double L_rve_um,
                               double domain_um,
                               double preserved_std_fraction,
                               bool project_to_feasible) {
  if (effective.provenance != Provenance::Homogenized) {
    throw DomainError("global field needs homogenized effective samples");
  }
  if (effective.L + 1e-9 < domain_um) {
    throw DomainError("effective samples must span the global domain");
  }
  GlobalField gf;
  gf.dx = L_rve_um / 10.0;
  const int n = static_cast<int>(std::llround(domain_um / gf.dx));
  if (std::fabs(n * gf.dx - domain_um) > 1e-6 * domain_um) {
    throw DomainError("coarse spacing must divide the domain");
  }
  gf.x.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) gf.x[static_cast<std::size_t>(i)] = i * gf.dx;

  const MomentCurves m = pointwise_moments(effective);
  gf.point_beta.resize(gf.x.size());
  for (std::size_t i = 0; i < gf.x.size(); ++i) {
    // Nearest effective grid point supplies the crisp local moments.
    const double pos = (gf.x[i] - effective.x[0]) / effective.h;
    const int j = std::clamp(static_cast<int>(std::llround(pos)), 0,
                             effective.points() - 1);
    const std::size_t jj = static_cast<std::size_t>(j);
    double g1 = m.gamma1[jj];
    double g2 = m.gamma2[jj];
    if (m.degenerate[jj]) {
      g1 = 0.0;
      g2 = -1.2;
    }
    const double sigma = std::max(m.sigma[jj], 1e-12 * std::fabs(m.mu[jj]));
    gf.point_beta[i] =
        beta_from_moments(m.mu[jj], sigma, g1, g2, project_to_feasible);
  }
  gf.kl = kl_decompose(domain_um, gf.dx, 5.0 * L_rve_um,
                       preserved_std_fraction);
  return gf;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  double at) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) throw DomainError("pchip needs >= 2 nodes");
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const double dx = x[1] - x[0];
  int i = std::clamp(static_cast<int>((at - x[0]) / dx), 0, n - 2);
  // Fritsch-Carlson slopes at the two segment endpoints.
  auto slope = [&](int k) {
    return (y[static_cast<std::size_t>(k) + 1] -
            y[static_cast<std::size_t>(k)]) /
           dx;
  };
  auto node_derivative = [&](int k) {
    if (k == 0) return slope(0);
    if (k == n - 1) return slope(n - 2);
    const double d0 = slope(k - 1);
    const double d1 = slope(k);
    if (d0 * d1 <= 0.0) return 0.0;
    return 2.0 * d0 * d1 / (d0 + d1);  // harmonic mean keeps monotonicity
  };
  const double t = (at - x[static_cast<std::size_t>(i)]) / dx;
  const double y0 = y[static_cast<std::size_t>(i)];
  const double y1 = y[static_cast<std::size_t>(i) + 1];
  const double m0 = node_derivative(i) * dx;
  const double m1 = node_derivative(i + 1) * dx;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
         (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
}

double global_local_qoi(const GlobalField& gf, const LocalField& lf,
                        const ProblemSpec& ps,
                        const std::vector<double>& y_global,
                        const std::vector<double>& y_local,
                        const std::array<double, 4>& z) {
  const double half = 0.5 * lf.field.kl.x.back();
  const double x_l = lf.x_left_um;
  const double x_r = x_l + lf.field.kl.x.back();
  if (x_l < 0.0 || x_r > ps.domain_um) {
    throw DomainError("local domain must lie inside the global domain");
  }
  (void)half;
  const auto b_g = gf.sample(y_global);
  const DirectSolution global = solve_direct(b_g, gf.dx, ps);
  const double u_left = pchip_eval(gf.x, global.u, x_l);
  const double u_right = pchip_eval(gf.x, global.u, x_r);

  const auto b_l = lf.field.sample(y_local, z);
  // Local integrals are in μm; the boundary ratio is dimensionless, so
  // the meter outputs carry through the Dirichlet data.
  const LocalSolution local =
      solve_local_dirichlet(b_l, lf.field.kl.dx, u_left, u_right);
  return local.q;
}

std::string solution_csv(const std::vector<double>& x,
                         const std::vector<double>& u) {
  std::string text = "x_um,u_m\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    text += csv_line({format_double(x[i]), format_double(u[i])});
  }
  return text;
}

}  // namespace fuzzstoch
