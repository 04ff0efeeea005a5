#ifndef FUZZSTOCH_RANDFIELD_HPP
#define FUZZSTOCH_RANDFIELD_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fuzzstoch/fuzzy.hpp"
#include "fuzzstoch/microdata.hpp"

namespace fuzzstoch {

/// Truncated Karhunen-Loève basis of the unit-variance squared-exponential
/// covariance on [0, L]. Eigenvalues carry the length measure (their sum
/// approximates L); eigenfunctions are orthonormal on the grid under the
/// Δx-weighted inner product.
struct KlBasis {
  std::vector<double> x;   // fine grid nodes
  double dx = 0.0;
  double corr_length = 0.0;
  double preserved_fraction = 0.0;
  int terms = 0;                      // N retained
  std::vector<double> eigenvalues;    // retained, descending
  std::vector<double> phi;            // row-major terms × x.size()
  double eigenvalue_total = 0.0;      // Σ of all eigenvalues on the solve grid
  std::vector<double> point_std;      // sqrt(Σ_n λ_n φ_n(x)²)

  int points() const { return static_cast<int>(x.size()); }
  double phi_at(int n, int j) const {
    return phi[static_cast<std::size_t>(n) * x.size() +
               static_cast<std::size_t>(j)];
  }
};

/// Four-parameter beta: shapes (p, q) on support [loc, loc + scale].
struct BetaParams {
  double p = 1.0;
  double q = 1.0;
  double loc = 0.0;
  double scale = 1.0;
};

/// Closed-form first four moments of a BetaParams distribution.
struct BetaMoments {
  double mu;
  double sigma;
  double gamma1;
  double gamma2;
};
BetaMoments beta_moments(const BetaParams& bp);

double se_covariance(double x1, double x2, double corr_len);

KlBasis kl_decompose(double L, double h_grid, double corr_len,
                     double preserved_std_fraction = 0.85);

/// G(x_j) = Σ_n sqrt(λ_n) φ_n(x_j) y_n.
std::vector<double> sample_gaussian_field(const KlBasis& kl,
                                          const std::vector<double>& y);

double std_normal_cdf(double x);
/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);
double beta_cdf(double v, const BetaParams& bp);
double beta_pdf(double v, const BetaParams& bp);
/// Safeguarded Newton inverse of beta_cdf; requires p in (0,1).
double beta_quantile(double prob, const BetaParams& bp);

/// Whether (gamma1, gamma2) lies strictly inside the beta family region
/// gamma1² - 2 < gamma2 < 1.5 gamma1².
bool beta_moments_feasible(double gamma1, double gamma2);

/// Match (gamma1, gamma2) to shapes and (mu, sigma) to loc/scale. With
/// project_to_feasible the kurtosis is clamped into the feasible region
/// (margin 5% of its width) instead of raising InfeasibleMoments.
BetaParams beta_from_moments(double mu, double sigma, double gamma1,
                             double gamma2, bool project_to_feasible = false);

/// The calibrated model: fuzzy moment vector plus KL basis. Realizations
/// map a Gaussian field through the standard normal CDF (after pointwise
/// standardization of the truncated field) and the beta quantile.
struct FuzzyStochasticField {
  KlBasis kl;
  FuzzyVector moments;  // (z1..z4) = (mu, sigma, gamma1, gamma2)
  bool project_to_feasible = true;

  BetaParams beta_for(const std::array<double, 4>& z) const;
  std::vector<double> sample(const std::vector<double>& y,
                             const std::array<double, 4>& z) const;
};

std::vector<double> sample_translation_field(const FuzzyStochasticField& f,
                                             const std::vector<double>& y,
                                             const std::array<double, 4>& z);

struct FieldSettings {
  double corr_length = 100.0;  // μm
  double preserved_std_fraction = 0.85;
  int histogram_bins = 10;
  double plateau_tol = 0.10;
  bool project_to_feasible = true;
};

FuzzyStochasticField build_fuzzy_stochastic_field(
    const SampleSet& s, const FieldSettings& settings = {});

std::string kl_spectrum_csv(const KlBasis& kl);
// KLB1 container: magic "KLB1", little-endian u32 N, u32 N_x, 4 zero pad
// bytes, then N×N_x little-endian f64 eigenfunction rows.
void write_kl_eigenfunctions(const KlBasis& kl, const std::string& path);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_RANDFIELD_HPP
