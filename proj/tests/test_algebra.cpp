#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homflow/algebra.hpp"
#include "homflow/catalog.hpp"
#include "homflow/errors.hpp"

using namespace homflow;

TEST_CASE("bracket fills both orders") {
  StructureConstants sc(3);
  sc.bracket(1, 2, 0, 2.5);
  CHECK(sc(0, 1, 2) == 2.5);
  CHECK(sc(0, 2, 1) == -2.5);
  CHECK(sc.is_antisymmetric());
}

TEST_CASE("jacobi detects a non-algebra") {
  // [X1,X2] = X2, [X2,X3] = X1 violates Jacobi: the triple sum contains X2 != 0.
  StructureConstants bad(3);
  bad.bracket(0, 1, 1, 1.0);
  bad.bracket(1, 2, 0, 1.0);
  CHECK(jacobi_residual(bad) > 0.5);
}

TEST_CASE("jacobi rejects non-antisymmetric input") {
  StructureConstants sc(2);
  sc.at(0, 0, 1) = 1.0;
  CHECK_THROWS_AS(jacobi_residual(sc), ValidationError);
}

TEST_CASE("catalog algebras satisfy Jacobi and are unimodular") {
  for (const auto& tag : catalog_tags()) {
    const GeometryClass c = load_catalog(tag);
    for (const Factor& f : c.geometry.factors()) {
      if (!f.is_lie()) continue;
      const auto& sc = std::get<StructureConstants>(f.model);
      CAPTURE(tag);
      CHECK(jacobi_residual(sc) == 0.0);
      for (double d : unimodularity_defect(sc)) CHECK(d == 0.0);
    }
  }
}

TEST_CASE("non-unimodular algebra has nonzero trace") {
  StructureConstants sc(2);
  sc.bracket(0, 1, 1, 1.0);  // [X1, X2] = X2
  const auto d = unimodularity_defect(sc);
  CHECK(std::abs(d[0]) == doctest::Approx(1.0));
  CHECK(d[1] == 0.0);
}

TEST_CASE("permutation relabels the frame") {
  const auto& sol = std::get<StructureConstants>(load_catalog("SOL3").geometry.factors()[0].model);
  const StructureConstants p = sol.permuted({2, 0, 1});
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(p(k, i, j) == sol(std::vector<int>{2, 0, 1}[k], std::vector<int>{2, 0, 1}[i],
                                                          std::vector<int>{2, 0, 1}[j]));
}

TEST_CASE("direct sum is block diagonal") {
  const auto& nil = std::get<StructureConstants>(load_catalog("NIL3").geometry.factors()[0].model);
  const StructureConstants s = StructureConstants::direct_sum(nil, StructureConstants(1));
  CHECK(s.dim() == 4);
  CHECK(s(0, 1, 2) == -1.0);
  for (int i = 0; i < 4; ++i) CHECK(s(i, 3, 1) == 0.0);
}

TEST_CASE("geometry coefficient layout") {
  const GeometryClass p = load_catalog("H2*NIL3");
  CHECK(p.geometry.dim() == 5);
  CHECK(p.coefficient_count() == 4);
  const auto d = p.geometry.frame_diagonal({2.0, 1.0, 3.0, 4.0});
  CHECK(d == std::vector<double>{2.0, 2.0, 1.0, 3.0, 4.0});
  CHECK(p.geometry.representative_frame_index(1) == 2);
}

TEST_CASE("unknown and extinct tags are not in the catalog") {
  CHECK_THROWS_AS(load_catalog("S3"), CatalogError);
  CHECK_THROWS_AS(load_catalog("nope"), CatalogError);
  CHECK_NOTHROW(load_catalog("sol3"));
}
