#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homflow/algebra.hpp"

namespace homflow {

enum class ClassId {
  R1, R2, R3, H2, H3, SOL3, NIL3, ISOM_R2, SL2R, H4, CH2,
  A1, A2, A3, A4, A5, A6, A7, A8, A9, A10,
  Product,
};

using CoeffVector = std::vector<double>;

/// Expanding soliton in coefficient form. The diffeomorphism eta_t scales the
/// i-th coframe by t^{-w_i}, so self-similar coefficients obey
/// g_i(t) = t^{1 - 2 w_i} g_i(1).
struct SolitonSpec {
  std::string limit_id;  // geometry the soliton lives on
  Geometry geometry;
  std::vector<double> weights;  // one per coefficient of `geometry`
  std::function<CoeffVector(double t)> coeffs;
};

/// c_hat_i(s, t) = kappa_i * s^{p_i} * s^{-1} * c_i(s t).
struct NormalizerSpec {
  std::vector<double> exponents;
  std::vector<double> constants;
};

/// Expected long-time law c_i(t) ~ value * t^exponent * (ln t)^log_power.
struct ExpectedAsymptotic {
  int coefficient = 0;
  double exponent = 0.0;
  double log_power = 0.0;
  /// Empty when the constant depends on the data in a way not given in closed form.
  std::function<double(const CoeffVector& init)> value;
  std::string note;
};

struct CatalogParams {
  double k = 1.0;  // A2 / A3 parameter
  double c = 1.0;  // Einstein constant of constant-curvature classes
};

struct GeometryClass {
  std::string id;
  ClassId kind = ClassId::Product;
  Geometry geometry;
  CoeffVector default_init;
  CatalogParams params;
  std::optional<SolitonSpec> soliton;
  std::function<NormalizerSpec(const CoeffVector& init)> normalizer;
  std::vector<ExpectedAsymptotic> asymptotics;

  int coefficient_count() const { return geometry.coefficient_count(); }
};

/// Looks up a class by tag (case-insensitive). Products are written "a*b".
/// Throws CatalogError listing the valid tags for an unknown tag.
GeometryClass load_catalog(std::string_view id, const CatalogParams& params = {});

/// Base tags in catalog order.
const std::vector<std::string>& catalog_tags();

/// Classes whose Ricci flow exists for all t > 0 from every diagonal initial metric.
bool is_immortal(ClassId kind);

/// Builds a product class: concatenated geometry, block solitons and normalizers.
GeometryClass product_class(const GeometryClass& a, const GeometryClass& b);

/// Product of two solitons with concatenated weights.
SolitonSpec product_soliton(const SolitonSpec& a, const SolitonSpec& b);

std::string to_string(ClassId kind);

}  // namespace homflow
