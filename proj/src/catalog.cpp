#include "homflow/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "homflow/errors.hpp"

namespace homflow {
namespace {

// Brackets below are transcribed with one-based indices, in the order the
// relations are usually written: rel(i, j, k, a) means [X_i, X_j] += a X_k.
struct Rel {
  int i, j, k;
  double coef;
};

StructureConstants algebra(int dim, std::initializer_list<Rel> rels) {
  StructureConstants sc(dim);
  for (const auto& r : rels) sc.bracket(r.i - 1, r.j - 1, r.k - 1, r.coef);
  return sc;
}

Geometry lie(const std::string& label, StructureConstants sc) {
  return Geometry({Factor{label, std::move(sc)}});
}

Geometry einstein(const std::string& label, int dim, double c, bool kahler = false) {
  return Geometry({Factor{label, EinsteinSpace{dim, c, kahler}}});
}

StructureConstants sol3() { return algebra(3, {{2, 3, 1, 1.0}, {1, 2, 3, -1.0}}); }
StructureConstants nil3() { return algebra(3, {{2, 3, 1, -1.0}}); }
StructureConstants isom_r2() { return algebra(3, {{2, 3, 1, 1.0}, {3, 1, 2, 1.0}}); }
StructureConstants sl2r() { return algebra(3, {{2, 3, 1, -1.0}, {3, 1, 2, 1.0}, {1, 2, 3, 1.0}}); }
StructureConstants su2() { return algebra(3, {{2, 3, 1, 1.0}, {3, 1, 2, 1.0}, {1, 2, 3, 1.0}}); }
StructureConstants abelian(int dim) { return StructureConstants(dim); }

StructureConstants a2(double k) {
  return algebra(4, {{1, 4, 1, 1.0}, {2, 4, 2, k}, {3, 4, 3, -(k + 1.0)}});
}
StructureConstants a3(double k) {
  return algebra(4, {{1, 4, 1, k}, {1, 4, 2, 1.0}, {2, 4, 1, -1.0}, {2, 4, 2, k}, {3, 4, 3, -2.0 * k}});
}
StructureConstants a5() {
  return algebra(4, {{1, 4, 1, -0.5}, {1, 4, 2, 1.0}, {2, 4, 2, -0.5}, {3, 4, 3, 1.0}});
}
StructureConstants a6() { return algebra(4, {{1, 4, 2, 1.0}, {2, 4, 3, 1.0}}); }
StructureConstants a7() { return algebra(4, {{2, 3, 4, 1.0}, {3, 1, 2, 1.0}, {1, 2, 3, -1.0}}); }
StructureConstants a8() { return algebra(4, {{2, 3, 4, -1.0}, {3, 1, 2, 1.0}, {1, 2, 3, 1.0}}); }

// Limit geometries that are not catalog classes themselves.
StructureConstants sol4_0_half() {
  return algebra(4, {{1, 4, 1, -0.5}, {2, 4, 2, -0.5}, {3, 4, 3, 1.0}});
}
StructureConstants r1_times_nil3_last() { return algebra(4, {{2, 3, 4, -1.0}}); }

const double kCbrt3 = std::cbrt(3.0);

SolitonSpec flat_soliton(const std::string& id, int dim) {
  return {id, lie(id, abelian(dim)), std::vector<double>(dim, 0.5),
          [dim](double) { return CoeffVector(dim, 1.0); }};
}

SolitonSpec einstein_soliton(const std::string& id, int dim, double c, bool kahler = false) {
  return {id, einstein(id, dim, c, kahler), {0.0}, [c](double t) { return CoeffVector{2.0 * c * t}; }};
}

SolitonSpec nil3_soliton() {
  return {"NIL3", lie("NIL3", nil3()), {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, [](double t) {
            const double q = std::cbrt(t);
            return CoeffVector{1.0 / (3.0 * q), q, q};
          }};
}

SolitonSpec a2_soliton(double k, const std::string& label) {
  const double rate = 4.0 * (k * k + k + 1.0);
  return {label, lie(label, a2(k)), {0.5, 0.5, 0.5, 0.0},
          [rate](double t) { return CoeffVector{1.0, 1.0, 1.0, rate * t}; }};
}

SolitonSpec r1_h2_soliton() {
  // dx^2 + 2t h with Ric(h) = -h.
  return product_soliton(flat_soliton("R1", 1), einstein_soliton("H2", 2, 1.0));
}

NormalizerSpec flat_normalizer(const CoeffVector& init) {
  NormalizerSpec n;
  for (double c : init) {
    n.exponents.push_back(1.0);
    n.constants.push_back(1.0 / c);
  }
  return n;
}

NormalizerSpec nil3_normalizer(const CoeffVector& x) {
  const double a = x[0], b = x[1], c = x[2];
  return {{4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
          {std::cbrt(1.0 / (9.0 * a * a * b * c)), std::cbrt(c / (3.0 * a * b * b)),
           std::cbrt(b / (3.0 * a * c * c))}};
}

NormalizerSpec concat(const NormalizerSpec& a, const NormalizerSpec& b) {
  NormalizerSpec out = a;
  out.exponents.insert(out.exponents.end(), b.exponents.begin(), b.exponents.end());
  out.constants.insert(out.constants.end(), b.constants.begin(), b.constants.end());
  return out;
}

ExpectedAsymptotic law(int i, double p, std::function<double(const CoeffVector&)> v,
                       std::string note, double q = 0.0) {
  return {i, p, q, std::move(v), std::move(note)};
}

ExpectedAsymptotic data_dependent(int i, double p, std::string note, double q = 0.0) {
  return {i, p, q, {}, std::move(note)};
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

const std::map<std::string, ClassId>& tag_map() {
  static const std::map<std::string, ClassId> m = {
      {"R1", ClassId::R1},     {"R2", ClassId::R2},           {"R3", ClassId::R3},
      {"H2", ClassId::H2},     {"H3", ClassId::H3},           {"SOL3", ClassId::SOL3},
      {"NIL3", ClassId::NIL3}, {"ISOM_R2", ClassId::ISOM_R2}, {"SL2R", ClassId::SL2R},
      {"H4", ClassId::H4},     {"CH2", ClassId::CH2},         {"A1", ClassId::A1},
      {"A2", ClassId::A2},     {"A3", ClassId::A3},           {"A4", ClassId::A4},
      {"A5", ClassId::A5},     {"A6", ClassId::A6},           {"A7", ClassId::A7},
      {"A8", ClassId::A8},     {"A9", ClassId::A9},           {"A10", ClassId::A10},
  };
  return m;
}

GeometryClass flat_class(const std::string& id, ClassId kind, int dim) {
  GeometryClass g;
  g.id = id;
  g.kind = kind;
  g.geometry = lie(id, abelian(dim));
  g.default_init = CoeffVector(dim, 1.0);
  g.soliton = flat_soliton(id, dim);
  g.normalizer = flat_normalizer;
  for (int i = 0; i < dim; ++i)
    g.asymptotics.push_back(law(i, 0.0, [i](const CoeffVector& x) { return x[i]; }, "constant"));
  return g;
}

GeometryClass einstein_class(const std::string& id, ClassId kind, int dim, double c, bool kahler) {
  GeometryClass g;
  g.id = id;
  g.kind = kind;
  g.geometry = einstein(id, dim, c, kahler);
  g.default_init = {1.0};
  g.params.c = c;
  g.soliton = einstein_soliton(id, dim, c, kahler);
  g.normalizer = [](const CoeffVector& x) { return NormalizerSpec{{0.0}, {1.0 / x[0]}}; };
  g.asymptotics.push_back(
      law(0, 1.0, [c](const CoeffVector& x) { return 2.0 * c * x[0]; }, "(1+2ct) g0"));
  return g;
}

GeometryClass build(ClassId kind, const CatalogParams& p) {
  const double k = p.k;
  GeometryClass g;
  switch (kind) {
    case ClassId::R1: return flat_class("R1", kind, 1);
    case ClassId::R2: return flat_class("R2", kind, 2);
    case ClassId::R3: return flat_class("R3", kind, 3);
    case ClassId::A1: return flat_class("A1", kind, 4);
    case ClassId::H2: return einstein_class("H2", kind, 2, p.c, false);
    case ClassId::H3: return einstein_class("H3", kind, 3, p.c, false);
    case ClassId::H4: return einstein_class("H4", kind, 4, p.c, false);
    case ClassId::CH2: return einstein_class("CH2", kind, 4, p.c, true);

    case ClassId::SOL3:
      g.id = "SOL3";
      g.geometry = lie("SOL3", sol3());
      g.default_init = {2.0, 1.0, 3.0};
      g.soliton = SolitonSpec{"SOL3", lie("SOL3", sol3()), {0.5, 0.0, 0.5},
                              [](double t) { return CoeffVector{1.0, 4.0 * t, 1.0}; }};
      g.normalizer = [](const CoeffVector& x) {
        const double m = 1.0 / std::sqrt(x[0] * x[2]);
        return NormalizerSpec{{1.0, 0.0, 1.0}, {m, 1.0, m}};
      };
      {
        auto geo = [](const CoeffVector& x) { return std::sqrt(x[0] * x[2]); };
        g.asymptotics = {law(0, 0.0, geo, "A -> sqrt(A0 C0)"),
                         law(1, 1.0, [](const CoeffVector&) { return 4.0; }, "B ~ 4t"),
                         law(2, 0.0, geo, "C -> sqrt(A0 C0)")};
      }
      break;

    case ClassId::NIL3:
      g.id = "NIL3";
      g.geometry = lie("NIL3", nil3());
      g.default_init = {1.0, 1.0, 1.0};
      g.soliton = nil3_soliton();
      g.normalizer = nil3_normalizer;
      g.asymptotics = {
          law(0, -1.0 / 3.0,
              [](const CoeffVector& x) { return std::cbrt(x[0] * x[0] * x[1] * x[2] / 3.0); },
              "A ~ (A0^2 B0 C0/3)^{1/3} t^{-1/3}"),
          law(1, 1.0 / 3.0,
              [](const CoeffVector& x) { return std::cbrt(3.0 * x[0] * x[1] * x[1] / x[2]); },
              "B ~ (3 A0 B0^2/C0)^{1/3} t^{1/3}"),
          law(2, 1.0 / 3.0,
              [](const CoeffVector& x) { return std::cbrt(3.0 * x[0] * x[2] * x[2] / x[1]); },
              "C ~ (3 A0 C0^2/B0)^{1/3} t^{1/3}")};
      break;

    case ClassId::ISOM_R2:
      g.id = "ISOM_R2";
      g.geometry = lie("ISOM_R2", isom_r2());
      g.default_init = {4.0, 1.0, 2.0};
      g.soliton = flat_soliton("R3", 3);
      g.normalizer = [](const CoeffVector& x) {
        const double a_star = std::sqrt(x[0] * x[1]);
        const double c_star = 0.5 * x[2] * (std::sqrt(x[0] / x[1]) + std::sqrt(x[1] / x[0]));
        return NormalizerSpec{{1.0, 1.0, 1.0}, {1.0 / a_star, 1.0 / a_star, 1.0 / c_star}};
      };
      {
        auto a_star = [](const CoeffVector& x) { return std::sqrt(x[0] * x[1]); };
        g.asymptotics = {
            law(0, 0.0, a_star, "A -> sqrt(A0 B0)"), law(1, 0.0, a_star, "B -> sqrt(A0 B0)"),
            law(2, 0.0,
                [](const CoeffVector& x) {
                  return 0.5 * x[2] * (std::sqrt(x[0] / x[1]) + std::sqrt(x[1] / x[0]));
                },
                "C -> C0/2 (sqrt(A0/B0) + sqrt(B0/A0))")};
      }
      break;

    case ClassId::SL2R:
      g.id = "SL2R";
      g.geometry = lie("SL2R", sl2r());
      g.default_init = {1.0, 1.0, 1.0};
      g.soliton = r1_h2_soliton();
      g.asymptotics = {data_dependent(0, 0.0, "A -> A* > 0"),
                       law(1, 1.0, [](const CoeffVector&) { return 2.0; }, "B ~ 2t"),
                       law(2, 1.0, [](const CoeffVector&) { return 2.0; }, "C ~ 2t")};
      break;

    case ClassId::A2:
      g.id = "A2";
      g.geometry = lie("A2", a2(k));
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      g.params.k = k;
      g.soliton = a2_soliton(k, "A2");
      g.normalizer = [](const CoeffVector& x) {
        return NormalizerSpec{{1.0, 1.0, 1.0, 0.0}, {1.0 / x[0], 1.0 / x[1], 1.0 / x[2], 1.0}};
      };
      for (int i = 0; i < 3; ++i)
        g.asymptotics.push_back(law(i, 0.0, [i](const CoeffVector& x) { return x[i]; }, "constant"));
      g.asymptotics.push_back(
          law(3, 1.0, [k](const CoeffVector&) { return 4.0 * (k * k + k + 1.0); }, "D ~ 4(k^2+k+1)t"));
      break;

    case ClassId::A3:
      if (k == 0.0) throw CatalogError("A3 needs a nonzero parameter k");
      g.id = "A3";
      g.geometry = lie("A3", a3(k));
      g.default_init = {2.0, 1.0, 1.0, 1.0};
      g.params.k = k;
      g.soliton = a2_soliton(1.0, "SOL4_0");
      g.normalizer = [k](const CoeffVector& x) {
        const double m = 1.0 / std::sqrt(x[0] * x[1]);
        return NormalizerSpec{{1.0, 1.0, 1.0, 0.0}, {m, m, 1.0 / x[2], 1.0 / (k * k)}};
      };
      {
        auto geo = [](const CoeffVector& x) { return std::sqrt(x[0] * x[1]); };
        g.asymptotics = {law(0, 0.0, geo, "A -> sqrt(A0 B0)"), law(1, 0.0, geo, "B -> sqrt(A0 B0)"),
                         law(2, 0.0, [](const CoeffVector& x) { return x[2]; }, "C = C0"),
                         law(3, 1.0, [k](const CoeffVector&) { return 12.0 * k * k; }, "D ~ 12k^2 t")};
      }
      break;

    case ClassId::A4:
      g = product_class(build(ClassId::NIL3, p), build(ClassId::R1, p));
      g.id = "A4";
      break;

    case ClassId::A5:
      g.id = "A5";
      g.geometry = lie("A5", a5());
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      g.soliton = SolitonSpec{"SOL4_0", lie("SOL4_0", sol4_0_half()), {0.5, 0.5, 0.5, 0.0},
                              [](double t) { return CoeffVector{1.0, 1.0, 1.0, 3.0 * t}; }};
      g.asymptotics = {data_dependent(0, 0.0, "A ~ 2 lambda (ln t)^{1/2}", 0.5),
                       data_dependent(1, 0.0, "B ~ 3 lambda (ln t)^{-1/2}", -0.5),
                       law(2, 0.0, [](const CoeffVector& x) { return x[2]; }, "C = C0"),
                       law(3, 1.0, [](const CoeffVector&) { return 3.0; }, "D ~ 3t")};
      break;

    case ClassId::A6:
      g.id = "A6";
      g.geometry = lie("A6", a6());
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      g.soliton = SolitonSpec{"A6", lie("A6", a6()), {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0 / 6.0}, [](double t) {
                                const double q = std::cbrt(t);
                                return CoeffVector{kCbrt3 * q, 1.0, 1.0 / (kCbrt3 * q), kCbrt3 * kCbrt3 * q * q};
                              }};
      g.normalizer = [](const CoeffVector& x) {
        const double a = x[0], b = x[1], c = x[2], d = x[3];
        return NormalizerSpec{{2.0 / 3.0, 1.0, 4.0 / 3.0, 1.0 / 3.0},
                              {std::cbrt(d / (a * a * b)), std::cbrt(1.0 / (a * b * c)),
                               std::cbrt(1.0 / (b * c * c * d)), std::cbrt(a / (c * d))}};
      };
      g.asymptotics = {
          law(0, 1.0 / 3.0, [](const CoeffVector& x) { return std::cbrt(3.0 * x[0] * x[0] * x[1] / x[3]); },
              "A ~ (3A0^2 B0/D0)^{1/3} t^{1/3}"),
          law(1, 0.0, [](const CoeffVector& x) { return std::cbrt(x[0] * x[1] * x[2]); },
              "B -> (A0 B0 C0)^{1/3}"),
          law(2, -1.0 / 3.0, [](const CoeffVector& x) { return std::cbrt(x[1] * x[2] * x[2] * x[3] / 3.0); },
              "C ~ (B0 C0^2 D0/3)^{1/3} t^{-1/3}"),
          law(3, 2.0 / 3.0, [](const CoeffVector& x) { return std::cbrt(9.0 * x[2] * x[3] / x[0]); },
              "D ~ (9 C0 D0/A0)^{1/3} t^{2/3}")};
      break;

    case ClassId::A7:
    case ClassId::A8: {
      const bool seven = kind == ClassId::A7;
      g.id = seven ? "A7" : "A8";
      g.geometry = lie(g.id, seven ? a7() : a8());
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      if (seven) {
        g.soliton = SolitonSpec{"A7", lie("A7", a7()), {0.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0}, [](double t) {
                                  const double q = std::cbrt(t);
                                  return CoeffVector{4.0 * t, kCbrt3 * q, kCbrt3 * q, 1.0 / (kCbrt3 * q)};
                                }};
      } else {
        g.soliton = SolitonSpec{"R1xNIL3", lie("R1xNIL3", r1_times_nil3_last()),
                                {0.5, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0}, [](double t) {
                                  const double q = std::cbrt(t);
                                  return CoeffVector{0.5, kCbrt3 * q, kCbrt3 * q, 1.0 / (kCbrt3 * q)};
                                }};
      }
      g.normalizer = [seven](const CoeffVector& x) {
        const double w = x[1] * x[2] * x[3] * x[3];
        const double m = std::pow(w, -1.0 / 6.0);
        // X1 rotates span(X2, X3), so A' = (B - C)^2 / (BC) and A tends to
        // A0 (B0 + C0) / (2 sqrt(B0 C0)); the flat factor is scaled to 1/2.
        const double a_inf = x[0] * (x[1] + x[2]) / (2.0 * std::sqrt(x[1] * x[2]));
        return NormalizerSpec{{seven ? 0.0 : 1.0, 2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0},
                              {seven ? 1.0 : 0.5 / a_inf, m, m, m * m}};
      };
      auto bc = [](const CoeffVector& x) { return std::pow(9.0 * x[1] * x[2] * x[3] * x[3], 1.0 / 6.0); };
      g.asymptotics = {
          seven ? law(0, 1.0, [](const CoeffVector&) { return 4.0; }, "A ~ 4t")
                : law(0, 0.0, [](const CoeffVector& x) { return x[3] / 2.0; }, "A -> D0/2"),
          law(1, 1.0 / 3.0, bc, "B ~ (9 B0 C0 D0^2)^{1/6} t^{1/3}"),
          law(2, 1.0 / 3.0, bc, "C ~ (9 B0 C0 D0^2)^{1/6} t^{1/3}"),
          law(3, -1.0 / 3.0, [](const CoeffVector& x) { return std::cbrt(x[1] * x[2] * x[3] * x[3] / 3.0); },
              "D = D0 (1 + 3 D0 t/(B0 C0))^{-1/3}")};
      break;
    }

    case ClassId::A9: {
      GeometryClass s = build(ClassId::SL2R, p);
      GeometryClass r = build(ClassId::R1, p);
      g.id = "A9";
      g.geometry = lie("A9", StructureConstants::direct_sum(sl2r(), abelian(1)));
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      g.soliton = product_soliton(*s.soliton, *r.soliton);
      g.asymptotics = s.asymptotics;
      g.asymptotics.push_back(law(3, 0.0, [](const CoeffVector& x) { return x[3]; }, "constant"));
      break;
    }

    case ClassId::A10:
      g.id = "A10";
      g.geometry = lie("A10", StructureConstants::direct_sum(su2(), abelian(1)));
      g.default_init = {1.0, 1.0, 1.0, 1.0};
      break;

    case ClassId::Product:
      throw CatalogError("product classes are built with product_class");
  }
  g.kind = kind;
  return g;
}

}  // namespace

const std::vector<std::string>& catalog_tags() {
  static const std::vector<std::string> tags = {"R1",  "R2",   "R3",      "H2",   "H3", "SOL3",
                                                "NIL3", "ISOM_R2", "SL2R", "H4", "CH2",
                                                "A1",  "A2",   "A3",      "A4",   "A5", "A6",
                                                "A7",  "A8",   "A9",      "A10"};
  return tags;
}

bool is_immortal(ClassId kind) { return kind != ClassId::A10; }

SolitonSpec product_soliton(const SolitonSpec& a, const SolitonSpec& b) {
  SolitonSpec out;
  out.limit_id = a.limit_id + "*" + b.limit_id;
  out.geometry = Geometry::product(a.geometry, b.geometry);
  out.weights = a.weights;
  out.weights.insert(out.weights.end(), b.weights.begin(), b.weights.end());
  out.coeffs = [fa = a.coeffs, fb = b.coeffs](double t) {
    CoeffVector x = fa(t);
    const CoeffVector y = fb(t);
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return out;
}

GeometryClass product_class(const GeometryClass& a, const GeometryClass& b) {
  GeometryClass g;
  g.id = a.id + "*" + b.id;
  g.kind = ClassId::Product;
  g.geometry = Geometry::product(a.geometry, b.geometry);
  g.default_init = a.default_init;
  g.default_init.insert(g.default_init.end(), b.default_init.begin(), b.default_init.end());
  g.params = a.params;
  if (a.soliton && b.soliton) g.soliton = product_soliton(*a.soliton, *b.soliton);
  if (a.normalizer && b.normalizer) {
    const auto na = static_cast<std::size_t>(a.coefficient_count());
    g.normalizer = [fa = a.normalizer, fb = b.normalizer, na](const CoeffVector& x) {
      const CoeffVector xa(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(na));
      const CoeffVector xb(x.begin() + static_cast<std::ptrdiff_t>(na), x.end());
      return concat(fa(xa), fb(xb));
    };
  }
  const int na = a.coefficient_count();
  g.asymptotics = a.asymptotics;
  for (auto law_b : b.asymptotics) {
    auto inner = law_b.value;
    law_b.coefficient += na;
    if (inner)
      law_b.value = [inner, na](const CoeffVector& x) {
        return inner(CoeffVector(x.begin() + na, x.end()));
      };
    g.asymptotics.push_back(std::move(law_b));
  }
  return g;
}

GeometryClass load_catalog(std::string_view id, const CatalogParams& params) {
  const std::string tag = upper(id);
  if (const auto star = tag.find('*'); star != std::string::npos) {
    return product_class(load_catalog(tag.substr(0, star), params),
                         load_catalog(tag.substr(star + 1), params));
  }
  const auto& m = tag_map();
  const auto it = m.find(tag);
  if (it == m.end()) {
    std::string msg = "unknown geometry class '" + std::string(id) + "'; valid tags:";
    for (const auto& t : catalog_tags()) msg += " " + t;
    msg += " (products as a*b)";
    throw CatalogError(msg);
  }
  return build(it->second, params);
}

std::string to_string(ClassId kind) {
  for (const auto& [tag, k] : tag_map())
    if (k == kind) return tag;
  return "PRODUCT";
}

}  // namespace homflow
