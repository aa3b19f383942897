#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "biot/analysis.hpp"

using namespace biot;

namespace {
const MaterialParams kParams = MaterialParams::footing(3e4, 0.2, 1.0);
}

TEST_CASE("displacement-pressure pairing stays bounded away from zero under refinement") {
  // hand-checked value on the coarsest mesh
  const InfSupEstimate coarse = estimate_infsup(InfSupPair::UP, build_structured_mesh(2), kParams);
  CHECK(coarse.h == doctest::Approx(4.0));
  CHECK(coarse.gamma_h == doctest::Approx(0.5815).epsilon(1e-3));

  const InfSupEstimate fine = estimate_infsup(InfSupPair::UP, build_structured_mesh(8), kParams);
  CHECK(fine.gamma_h == doctest::Approx(0.507652).epsilon(1e-4));

  for (int n : {2, 4, 6, 8}) {
    const InfSupEstimate e = estimate_infsup(InfSupPair::UP, build_structured_mesh(n), kParams);
    CHECK(e.gamma_h >= 0.9 * fine.gamma_h);
  }
}

TEST_CASE("flux-pressure pairing is uniformly stable") {
  double lo = 1e300, hi = 0.0;
  for (int n : {2, 4, 6, 8}) {
    const InfSupEstimate e = estimate_infsup(InfSupPair::VP, build_structured_mesh(n), kParams);
    CHECK(e.gamma_h > 0.0);
    lo = std::min(lo, e.gamma_h);
    hi = std::max(hi, e.gamma_h);
  }
  CHECK(hi / lo <= 2.0);
}

TEST_CASE("the equal-order negative control decays under refinement") {
  const double g2 = estimate_infsup(InfSupPair::P1P0_CONTROL, build_structured_mesh(2), kParams).gamma_h;
  const double g8 = estimate_infsup(InfSupPair::P1P0_CONTROL, build_structured_mesh(8), kParams).gamma_h;
  CHECK(g2 > 0.0);
  CHECK(g8 < 0.7 * g2);
}

TEST_CASE("inf-sup estimation rejects meshes beyond the dense-solve budget") {
  CHECK_THROWS_AS(estimate_infsup(InfSupPair::UP, build_structured_mesh(10), kParams),
                  std::invalid_argument);
}

TEST_CASE("condition numbers: unpreconditioned blow-up vs near-identity coupling") {
  const Mesh m = build_structured_mesh(16);
  const AssembledSystem raw = assemble_three_field(m, kParams);
  CHECK(condition_number(raw.op, nullptr, EigMode::LANCZOS) >= 1e5);

  const MaterialParams stiff = MaterialParams::footing(3e6, 0.2, 1.0);
  const AssembledSystem sys = assemble_three_field(m, stiff);
  const Preconditioner P = build_P1_III(sys.op, stiff, select_beta(BetaRule::MAX_MU_LAMBDA, stiff));
  const double cond = condition_number(sys.op, &P, EigMode::LANCZOS);
  CHECK(cond >= 1.0);
  CHECK(cond <= 1.5);
}

TEST_CASE("bundled material table") {
  const std::vector<MaterialEntry> table = materials_table();
  REQUIRE(table.size() == 9);
  auto value_of = [&table](const std::string& name) {
    for (const MaterialEntry& e : table)
      if (e.name == name) return e.xi_beta;
    FAIL("missing material: " << name);
    return 0.0;
  };
  CHECK(value_of("Ruhr sandstone") == doctest::Approx(2.3836).epsilon(1e-12));
  CHECK(value_of("Tennessee marble") == doctest::Approx(12.1667).epsilon(1e-12));
  CHECK(value_of("Charcoal granite") == doctest::Approx(6.7635).epsilon(1e-12));
  for (const MaterialEntry& e : table) {
    CHECK(e.xi_beta > 0.0);
    CHECK(e.xi_beta <= 12.2);
  }
}

TEST_CASE("the shipped CSV matches the embedded table") {
  const std::string path = std::string(BIOT_DATA_DIR) + "/materials_xibeta.csv";
  const std::vector<MaterialEntry> loaded = load_materials_csv(path);
  const std::vector<MaterialEntry> table = materials_table();
  REQUIRE(loaded.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(loaded[i].name == table[i].name);
    CHECK(loaded[i].xi_beta == doctest::Approx(table[i].xi_beta).epsilon(1e-12));
  }

  CHECK_THROWS(load_materials_csv("/nonexistent/materials.csv"));
}

TEST_CASE("csv loader validates its rows") {
  const std::string path = "bad_materials_tmp.csv";
  {
    std::ofstream out(path);
    out << "name,xi_beta\nSome rock,-1.0\n";
  }
  CHECK_THROWS(load_materials_csv(path));
  std::remove(path.c_str());
}

TEST_CASE("pair names round trip") {
  for (InfSupPair pair : {InfSupPair::UP, InfSupPair::VP, InfSupPair::P1P0_CONTROL})
    CHECK(infsup_pair_from_string(to_string(pair)) == pair);
  CHECK_THROWS_AS(infsup_pair_from_string("uv"), std::invalid_argument);
}
