#pragma once

#include <string>
#include <variant>
#include <vector>

namespace homflow {

/// Structure constants c[k][i][j] of a real Lie algebra in a fixed frame:
/// [X_i, X_j] = sum_k c[k][i][j] X_k. Indices are zero-based.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(int dim);

  int dim() const { return dim_; }

  double operator()(int k, int i, int j) const { return c_[index(k, i, j)]; }

  /// Raw access; does not keep antisymmetry. Use bracket() for normal construction.
  double& at(int k, int i, int j) { return c_[index(k, i, j)]; }

  /// Adds coef * X_k to [X_i, X_j] (and the negative to [X_j, X_i]).
  StructureConstants& bracket(int i, int j, int k, double coef);

  bool is_antisymmetric(double tol = 0.0) const;

  /// Relabels the frame: new X_a = old X_{perm[a]}.
  StructureConstants permuted(const std::vector<int>& perm) const;

  /// Block sum of two algebras (direct product of the groups).
  static StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b);

  const std::vector<double>& data() const { return c_; }

 private:
  std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * dim_ + i) * dim_ + j;
  }
  int dim_ = 0;
  std::vector<double> c_;
};

/// Max-norm of the Jacobi expression over all (i, j, k, l). Throws ValidationError
/// when the input is not antisymmetric.
double jacobi_residual(const StructureConstants& sc);

/// j-th entry is sum_k c[k][k][j], the trace of ad(X_j) up to sign.
std::vector<double> unimodularity_defect(const StructureConstants& sc);

/// Complete space with Ric(g0) = -einstein_constant * g0, treated analytically.
struct EinsteinSpace {
  int dim = 2;
  double einstein_constant = 1.0;
  bool kahler = false;  // complex hyperbolic (CH^n) rather than real hyperbolic
};

/// One factor of a (possibly product) homogeneous geometry.
struct Factor {
  std::string label;
  std::variant<StructureConstants, EinsteinSpace> model;

  bool is_lie() const { return std::holds_alternative<StructureConstants>(model); }
  int dim() const;
  /// Lie factors carry one diagonal coefficient per frame vector, Einstein
  /// factors a single scale.
  int coefficient_count() const;
};

/// Product of factors. Frame indices and coefficient indices are the
/// concatenations over factors.
class Geometry {
 public:
  Geometry() = default;
  explicit Geometry(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  int dim() const { return dim_; }
  int coefficient_count() const { return ncoef_; }

  /// Expands a coefficient vector to the diagonal of the frame metric.
  std::vector<double> frame_diagonal(const std::vector<double>& coeffs) const;

  /// Frame index that represents coefficient j (first frame vector of its block).
  int representative_frame_index(int coefficient) const;

  int frame_offset(std::size_t factor) const { return frame_offsets_[factor]; }
  int coefficient_offset(std::size_t factor) const { return coef_offsets_[factor]; }

  bool single_lie_factor() const { return factors_.size() == 1 && factors_[0].is_lie(); }

  static Geometry product(const Geometry& a, const Geometry& b);

 private:
  std::vector<Factor> factors_;
  std::vector<int> frame_offsets_;
  std::vector<int> coef_offsets_;
  int dim_ = 0;
  int ncoef_ = 0;
};

}  // namespace homflow
