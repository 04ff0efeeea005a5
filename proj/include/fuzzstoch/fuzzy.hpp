#ifndef FUZZSTOCH_FUZZY_HPP
#define FUZZSTOCH_FUZZY_HPP

#include <functional>
#include <string>
#include <vector>

#include "fuzzstoch/stats.hpp"

namespace fuzzstoch {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
  bool contains(const Interval& other, double tol = 0.0) const {
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }
};

/// Convex normalized fuzzy variable with a piecewise-linear membership
/// function given by knots. Membership is zero outside the knot range;
/// the zero-cut is the closed knot range. Equal consecutive knot
/// abscissae encode a vertical edge.
class FuzzyVariable {
 public:
  static FuzzyVariable crisp(double c);
  static FuzzyVariable triangle(double lo, double peak, double hi);
  static FuzzyVariable trapezoid(double lo, double peak_lo, double peak_hi,
                                 double hi);
  /// Validates normalization (sup μ = 1), range and convexity.
  static FuzzyVariable from_knots(std::vector<double> z,
                                  std::vector<double> mu);

  double membership(double z) const;
  /// {z : μ(z) >= α} for α > 0; the support closure at α = 0. Exact by
  /// inverse interpolation of the linear pieces.
  Interval alpha_cut(double alpha) const;
  Interval support() const { return alpha_cut(0.0); }
  /// Midpoint of the 1-cut.
  double peak() const { return alpha_cut(1.0).mid(); }

  const std::vector<double>& knots_z() const { return z_; }
  const std::vector<double>& knots_mu() const { return mu_; }

 private:
  FuzzyVariable() = default;
  std::vector<double> z_;
  std::vector<double> mu_;
};

enum class Interaction { NonInteractive, CompletelyInteractive,
                         PartiallyInteractive };

/// Joint α-cut geometry of a fuzzy vector: a hyperrectangle, its main
/// space diagonal, or the box intersected with pairwise diagonal-band
/// constraints |z_i - z_j| <= β_ij (1 - α).
struct JointAlphaCut {
  enum class Kind { Box, Segment, Hexagon };
  double alpha = 0.0;
  Kind kind = Kind::Box;
  std::vector<Interval> box;   // per-component α-cuts
  std::vector<double> betas;   // pairwise, row-major upper triangle

  bool contains(const std::vector<double>& z, double tol = 1e-12) const;
  /// Deterministic discretization: uniform along segments (endpoints
  /// included), tensor grids over boxes, feasibility-filtered tensor
  /// grids over hexagonal regions.
  std::vector<std::vector<double>> discretize(int target_points) const;
};

class FuzzyVector {
 public:
  FuzzyVector(std::vector<FuzzyVariable> components, Interaction interaction,
              std::vector<double> betas = {});

  int size() const { return static_cast<int>(components_.size()); }
  const FuzzyVariable& component(int i) const {
    return components_[static_cast<std::size_t>(i)];
  }
  Interaction interaction() const { return interaction_; }

  JointAlphaCut joint_alpha_cut(double alpha) const;

 private:
  std::vector<FuzzyVariable> components_;
  Interaction interaction_;
  std::vector<double> betas_;
};

/// Joint membership of the two-triangle partially interactive pair:
/// max(0, min(1 - |z1-z2|/β, 1 - max(|z1|,|z2|))) inside the unit box.
double hexagon_membership(double z1, double z2, double beta);

/// [min, max] of g over a discretization of the joint cut (the worst-case
/// image of the extension principle at this α).
Interval image_alpha_cut(
    const std::function<double(const std::vector<double>&)>& g,
    const JointAlphaCut& cut, int grid_size);

// Worst-case interval arithmetic on α-cut ranges.
Interval fuzzy_add(const Interval& r1, const Interval& r2);
Interval fuzzy_sub(const Interval& r1, const Interval& r2);
Interval fuzzy_mul(const Interval& r1, const Interval& r2);
Interval fuzzy_div(const Interval& r1, const Interval& r2);

/// Per-α range of the trapezoidal quadrature of x-dependent integrand
/// values sharing one fuzzy argument vector: the min/max over the joint
/// cut is taken of the whole quadrature sum.
std::vector<Interval> fuzzy_integrate(
    const std::vector<std::function<double(const std::vector<double>&)>>&
        integrand,
    double dx, const FuzzyVector& vec, const std::vector<double>& alphas,
    int grid_size = 100);

struct FuzzifyDiagnostics {
  bool used_fallback = false;
  bool trapezoidal = false;
};

/// Triangular (or plateau-corrected trapezoidal) membership fitted to a
/// histogram: least-squares lines through bin midpoints left and right of
/// the fullest bin, peak at their intersection, support at their zeros.
/// Falls back to the min/mode/max triangle when a fit degenerates.
FuzzyVariable fuzzify_from_histogram(const Histogram& h,
                                     double plateau_tol = 0.10,
                                     FuzzifyDiagnostics* diag = nullptr);

std::string membership_json(const FuzzyVariable& v);
std::string alpha_cut_table_csv(const FuzzyVariable& v,
                                const std::vector<double>& alphas);

}  // namespace fuzzstoch

#endif  // FUZZSTOCH_FUZZY_HPP
