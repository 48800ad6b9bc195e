#include "homflow/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "homflow/errors.hpp"

namespace homflow {

StructureConstants::StructureConstants(int dim) : dim_(dim) {
  if (dim < 1) throw ValidationError("structure constants need dim >= 1");
  c_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
}

StructureConstants& StructureConstants::bracket(int i, int j, int k, double coef) {
  if (i == j) throw ValidationError("bracket of a frame vector with itself is zero");
  at(k, i, j) += coef;
  at(k, j, i) -= coef;
  return *this;
}

bool StructureConstants::is_antisymmetric(double tol) const {
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j)
        if (std::abs((*this)(k, i, j) + (*this)(k, j, i)) > tol) return false;
  return true;
}

StructureConstants StructureConstants::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != dim_) throw ValidationError("permutation size mismatch");
  std::vector<int> inverse(dim_, -1);
  for (int a = 0; a < dim_; ++a) inverse.at(perm[a]) = a;
  StructureConstants out(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out.at(inverse[k], inverse[i], inverse[j]) = (*this)(k, i, j);
  return out;
}

StructureConstants StructureConstants::direct_sum(const StructureConstants& a,
                                                  const StructureConstants& b) {
  StructureConstants out(a.dim() + b.dim());
  const int o = a.dim();
  for (int k = 0; k < a.dim(); ++k)
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) out.at(k, i, j) = a(k, i, j);
  for (int k = 0; k < b.dim(); ++k)
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j) out.at(o + k, o + i, o + j) = b(k, i, j);
  return out;
}

double jacobi_residual(const StructureConstants& sc) {
  if (!sc.is_antisymmetric()) throw ValidationError("structure constants are not antisymmetric");
  const int n = sc.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += sc(m, i, j) * sc(l, m, k) + sc(m, j, k) * sc(l, m, i) + sc(m, k, i) * sc(l, m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

std::vector<double> unimodularity_defect(const StructureConstants& sc) {
  const int n = sc.dim();
  std::vector<double> d(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) d[j] += sc(k, k, j);
  return d;
}

int Factor::dim() const {
  if (const auto* sc = std::get_if<StructureConstants>(&model)) return sc->dim();
  return std::get<EinsteinSpace>(model).dim;
}

int Factor::coefficient_count() const { return is_lie() ? dim() : 1; }

Geometry::Geometry(std::vector<Factor> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    frame_offsets_.push_back(dim_);
    coef_offsets_.push_back(ncoef_);
    dim_ += f.dim();
    ncoef_ += f.coefficient_count();
  }
}

std::vector<double> Geometry::frame_diagonal(const std::vector<double>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != ncoef_)
    throw ValidationError("expected " + std::to_string(ncoef_) + " coefficients, got " +
                          std::to_string(coeffs.size()));
  std::vector<double> diag;
  diag.reserve(dim_);
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const int c0 = coef_offsets_[f];
    if (factors_[f].is_lie()) {
      for (int a = 0; a < factors_[f].dim(); ++a) diag.push_back(coeffs[c0 + a]);
    } else {
      diag.insert(diag.end(), factors_[f].dim(), coeffs[c0]);
    }
  }
  return diag;
}

int Geometry::representative_frame_index(int coefficient) const {
  for (std::size_t f = factors_.size(); f-- > 0;) {
    if (coefficient >= coef_offsets_[f])
      return frame_offsets_[f] + (factors_[f].is_lie() ? coefficient - coef_offsets_[f] : 0);
  }
  throw ValidationError("coefficient index out of range");
}

Geometry Geometry::product(const Geometry& a, const Geometry& b) {
  std::vector<Factor> fs = a.factors_;
  fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
  return Geometry(std::move(fs));
}

}  // namespace homflow
