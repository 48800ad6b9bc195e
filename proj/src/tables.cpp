#include "homflow/tables.hpp"

namespace homflow {

std::optional<MilnorSectional> transcribed_sectional(ClassId kind, const CoeffVector& x) {
  if (x.size() != 3) return std::nullopt;
  const double A = x[0], B = x[1], C = x[2];
  const double den = 4.0 * A * B * C;
  switch (kind) {
    case ClassId::SOL3:
      return MilnorSectional{((A - C) * (A - C) - 4.0 * C * C) / den, ((A - C) * (A - C) - 4.0 * A * A) / den,
                             (A + C) * (A + C) / den};
    case ClassId::NIL3:
      return MilnorSectional{A / (4.0 * B * C), -3.0 * A / (4.0 * B * C), A / (4.0 * B * C)};
    case ClassId::ISOM_R2:
      return MilnorSectional{(A - B) * (A - B) / den, ((A + B) * (A + B) - 4.0 * A * A) / den,
                             ((A + B) * (A + B) - 4.0 * B * B) / den};
    case ClassId::SL2R: {
      const double bc = B - C;
      return MilnorSectional{((A + bc) * (A + bc) + 4.0 * C * bc) / den,
                             (bc * bc - A * (3.0 * A + 2.0 * B + 2.0 * C)) / den,
                             ((A - bc) * (A - bc) - 4.0 * B * bc) / den};
    }
    default:
      return std::nullopt;
  }
}

std::optional<CoeffVector> transcribed_rhs(const GeometryClass& cls, const CoeffVector& x) {
  switch (cls.kind) {
    case ClassId::R1:
    case ClassId::R2:
    case ClassId::R3:
    case ClassId::A1:
      return CoeffVector(x.size(), 0.0);
    case ClassId::H2:
    case ClassId::H3:
    case ClassId::H4:
    case ClassId::CH2:
      return CoeffVector{2.0 * cls.params.c};
    case ClassId::SOL3: {
      const double A = x[0], B = x[1], C = x[2];
      return CoeffVector{(C * C - A * A) / (B * C), (A + C) * (A + C) / (A * C), (A * A - C * C) / (A * B)};
    }
    case ClassId::NIL3: {
      const double A = x[0], B = x[1], C = x[2];
      return CoeffVector{-A * A / (B * C), A / C, A / B};
    }
    case ClassId::ISOM_R2: {
      const double A = x[0], B = x[1], C = x[2];
      return CoeffVector{-(A * A - B * B) / (B * C), -(B * B - A * A) / (A * C), (A - B) * (A - B) / (A * B)};
    }
    case ClassId::SL2R: {
      const double A = x[0], B = x[1], C = x[2];
      return CoeffVector{((B - C) * (B - C) - A * A) / (B * C), ((C + A) * (C + A) - B * B) / (A * C),
                         ((A + B) * (A + B) - C * C) / (A * B)};
    }
    case ClassId::A2: {
      const double k = cls.params.k;
      return CoeffVector{0.0, 0.0, 0.0, 4.0 * (k * k + k + 1.0)};
    }
    case ClassId::A6: {
      // Time derivative of the closed-form A6 solution written in terms of the
      // current state: E = B/(AD) and F = C/(BD) evolve as E0/(1+3E0 t), F0/(1+3F0 t).
      const double A = x[0], B = x[1], C = x[2], D = x[3];
      const double E = B / (A * D), F = C / (B * D);
      return CoeffVector{A * E, B * (F - E), -C * F, D * (E + F)};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace homflow
