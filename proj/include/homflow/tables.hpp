#pragma once

#include <optional>

#include "homflow/catalog.hpp"

namespace homflow {

/// Closed-form sectional curvatures of the diagonal Milnor-frame metric
/// A th1^2 + B th2^2 + C th3^2 for the 3D unimodular classes.
struct MilnorSectional {
  double k12 = 0.0;
  double k23 = 0.0;
  double k31 = 0.0;
};

std::optional<MilnorSectional> transcribed_sectional(ClassId kind, const CoeffVector& abc);

/// Hand-written Ricci-flow right-hand side for the classes that have one
/// (SOL3, NIL3, ISOM_R2, SL2R, A2, A6, flat and Einstein classes). Empty otherwise.
std::optional<CoeffVector> transcribed_rhs(const GeometryClass& cls, const CoeffVector& x);

}  // namespace homflow
