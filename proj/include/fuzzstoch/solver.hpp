#ifndef FUZZSTOCH_SOLVER_HPP
#define FUZZSTOCH_SOLVER_HPP

#include <array>
#include <string>
#include <vector>

#include "fuzzstoch/randfield.hpp"

namespace fuzzstoch {

/// The fixed bar problem: unit-length domain (in meters, 10⁶ μm
/// internally), body load 2 GPa on the left half, end traction 1 GPa,
/// clamped at x = 0, displacement sought at x₀.
struct ProblemSpec {
  double domain_um = 1e6;
  double x0_um = 7.5e5;
  double load_gpa = 2.0;        // on [0, load_cutoff)
  double load_cutoff_um = 5e5;
  double neumann_gpa = 1.0;     // a(1) u'(1)

  bool valid() const { return x0_um > 0.0 && x0_um < domain_um; }
};

/// F(x) = ∫₀ˣ f, exact piecewise form in GPa (x in μm).
double F_antiderivative(double x_um, const ProblemSpec& ps = {});

struct DirectSolution {
  std::vector<double> u;  // meters, per grid node
  double q = 0.0;         // u(x₀), meters
};

/// u(x) = ∫₀ˣ b F dξ by composite trapezoid on nodes x_k = k·dx.
/// x₀ must be a node.
DirectSolution solve_direct(const std::vector<double>& b, double dx_um,
                            const ProblemSpec& ps = {});

struct LocalSolution {
  std::vector<double> u;  // meters, per local node
  double q = 0.0;         // u at the local midpoint
};

/// Source-free Dirichlet solve on the local domain:
/// u(x) = u_left + (u_right - u_left) ∫ₗˣ b / ∫ₗʳ b.
LocalSolution solve_local_dirichlet(const std::vector<double>& b_local,
                                    double dx_um, double u_left,
                                    double u_right);

/// Coarse-grid crisp translation field over the whole domain, built from
/// homogenized effective samples: per-node beta parameters plus a KL basis
/// with correlation length 5·L_RVE.
struct GlobalField {
  std::vector<double> x;  // coarse nodes over [0, domain]
  double dx = 0.0;
  std::vector<BetaParams> point_beta;
  KlBasis kl;

  std::vector<double> sample(const std::vector<double>& y_global) const;
};

GlobalField build_global_field(const SampleSet& effective, double L_rve_um,
                               double domain_um,
                               double preserved_std_fraction = 0.85,
                               bool project_to_feasible = true);

/// Local fuzzy-stochastic field on D₀ = [x₀ - L_RVE/2, x₀ + L_RVE/2].
struct LocalField {
  FuzzyStochasticField field;  // grid starts at 0, spans L_RVE
  double x_left_um = 0.0;
};

/// One global-local evaluation: global solve under y_global, Dirichlet
/// data on the local boundary via monotone cubic interpolation of the
/// global solution, then the local solve under (y_local, z).
double global_local_qoi(const GlobalField& gf, const LocalField& lf,
                        const ProblemSpec& ps,
                        const std::vector<double>& y_global,
                        const std::vector<double>& y_local,
                        const std::array<double, 4>& z);

/// Monotone cubic (Fritsch-Carlson) interpolation on a uniform grid.
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  double at);

std::string solution_csv(const std::vector<double>& x,
                         const std::vector<double>& u);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_SOLVER_HPP
