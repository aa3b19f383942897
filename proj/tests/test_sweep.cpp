#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "biot/matrix_market.hpp"
#include "biot/sweep.hpp"

using namespace biot;

namespace {

SweepConfig single_point(PrecKind prec) {
  SweepConfig c;
  c.E_list = {3e4};
  c.nu_list = {0.4};
  c.kappa_list = {1e7};
  c.mesh_list = {16};
  c.preconditioners = {prec};
  return c;
}

// strip the wall_time_s column (index 8) so timing jitter cannot fail equality
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    int idx = 0;
    while (std::getline(fields, field, ',')) {
      if (idx > 0) out << ',';
      out << (idx == 8 ? "" : field);
      ++idx;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("a single benchmark point converges in the expected band") {
  const SweepResult result = run_sweep(single_point(PrecKind::P1_III));
  REQUIRE(result.rows.size() == 1);
  const SweepRow& row = result.rows.front();
  CHECK(row.converged);
  CHECK(row.error.empty());
  CHECK(row.iterations >= 5);
  CHECK(row.iterations <= 56);
  CHECK(row.wall_time_s >= 0.0);
  CHECK(row.rtol == 1e-8);
  CHECK(std::isnan(row.cond_number));  // not requested
  CHECK(result.all_converged());
  CHECK(result.version == kVersion);
  CHECK(!result.timestamp.empty());
}

TEST_CASE("removing the preconditioner costs at least a factor five in iterations") {
  const SweepResult with = run_sweep(single_point(PrecKind::P1_III));
  const SweepResult without = run_sweep(single_point(PrecKind::NONE));
  REQUIRE(without.rows.size() == 1);
  const SweepRow& row = without.rows.front();
  CHECK((!row.converged || row.iterations >= 5 * with.rows.front().iterations));
}

TEST_CASE("sweeps are deterministic") {
  const SweepConfig c = single_point(PrecKind::P1_III);
  const SweepResult a = run_sweep(c);
  const SweepResult b = run_sweep(c);
  CHECK(a.rows.front().iterations == b.rows.front().iterations);
  CHECK(without_timing(emit_table(a, TableFormat::CSV)) ==
        without_timing(emit_table(b, TableFormat::CSV)));
}

TEST_CASE("the row set covers the full parameter product in sorted order") {
  SweepConfig c;
  c.E_list = {3e4};
  c.nu_list = {0.4, 0.2};
  c.kappa_list = {1e3, 1.0};
  c.mesh_list = {4, 2};
  c.preconditioners = {PrecKind::P3_III, PrecKind::P1_III};
  c.with_condition_numbers = true;
  const SweepResult result = run_sweep(c);
  REQUIRE(result.rows.size() == 16);
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const SweepRow& a = result.rows[i - 1];
    const SweepRow& b = result.rows[i];
    const auto ka = std::make_tuple(static_cast<int>(a.prec), a.E, a.nu, a.kappa, a.n);
    const auto kb = std::make_tuple(static_cast<int>(b.prec), b.E, b.nu, b.kappa, b.n);
    CHECK(ka < kb);
  }
  for (const SweepRow& row : result.rows) {
    CHECK(row.converged);
    // condition numbers only on the coarsest mesh
    CHECK(std::isnan(row.cond_number) == (row.n != 2));
    if (row.n == 2) CHECK(row.cond_number >= 1.0);
  }

  // round trips preserve every field
  const std::string csv = emit_table(result, TableFormat::CSV);
  std::istringstream lines(csv);
  std::string first;
  std::getline(lines, first);
  CHECK(first == "prec,E,nu,kappa,n,iterations,converged,cond_number,wall_time_s,rtol");

  for (const SweepResult& back :
       {parse_result_csv(csv), parse_result_json(emit_table(result, TableFormat::JSON))}) {
    REQUIRE(back.rows.size() == result.rows.size());
    CHECK(back.rtol == result.rtol);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const SweepRow& x = result.rows[i];
      const SweepRow& y = back.rows[i];
      CHECK(y.prec == x.prec);
      CHECK(y.E == doctest::Approx(x.E).epsilon(1e-12));
      CHECK(y.nu == doctest::Approx(x.nu).epsilon(1e-12));
      CHECK(y.kappa == doctest::Approx(x.kappa).epsilon(1e-12));
      CHECK(y.n == x.n);
      CHECK(y.iterations == x.iterations);
      CHECK(y.converged == x.converged);
      if (std::isnan(x.cond_number))
        CHECK(std::isnan(y.cond_number));
      else
        CHECK(y.cond_number == doctest::Approx(x.cond_number).epsilon(1e-9));
      CHECK(y.rtol == doctest::Approx(x.rtol).epsilon(1e-12));
    }
  }
}

TEST_CASE("markdown rendering groups by kappa and flags unconverged cells") {
  SweepConfig c = single_point(PrecKind::P1_III);
  c.preconditioners = {PrecKind::P1_III, PrecKind::P2_III, PrecKind::P3_III};
  const std::string md = emit_table(run_sweep(c), TableFormat::MARKDOWN);
  CHECK(md.find("# MINRES iteration counts") != std::string::npos);
  CHECK(md.find("## kappa = 1e+07") != std::string::npos);
  CHECK(md.find("E=30000 p1") != std::string::npos);
  CHECK(md.find("E=30000 p2") != std::string::npos);
  CHECK(md.find("E=30000 p3") != std::string::npos);
  CHECK(md.find("| 0.4 | 1/16 |") != std::string::npos);

  // n = 16 has a nonzero load (the n = 2 traction strip misses every midpoint)
  SweepConfig tiny = single_point(PrecKind::NONE);
  tiny.maxiter = 5;
  const SweepResult starved = run_sweep(tiny);
  CHECK(!starved.all_converged());
  const std::string flagged = emit_table(starved, TableFormat::MARKDOWN);
  CHECK(flagged.find("5*") != std::string::npos);

  CHECK_THROWS(emit_table(SweepResult{}, TableFormat::MARKDOWN));
}

TEST_CASE("config validation rejects malformed sweeps") {
  SweepConfig ok;
  CHECK_NOTHROW(ok.validate());

  SweepConfig c = ok;
  c.kappa_list.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.mesh_list = {3};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.rtol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.maxiter = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.preconditioners = {PrecKind::P_II};  // two-field preconditioner, three-field sweep
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.formulation = Formulation::TWO_FIELD;  // three-field preconditioners
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.formulation = Formulation::TWO_FIELD;
  c.preconditioners = {PrecKind::P_II};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("csv parser enforces the exact header") {
  CHECK_THROWS(parse_result_csv("prec,E,nu\np1,3e4,0.4\n"));
}

TEST_CASE("config json applies partial overrides") {
  const nlohmann::json j = {{"E_list", {1e5}}, {"rtol", 1e-6}};
  SweepConfig c = j.get<SweepConfig>();
  CHECK(c.E_list == std::vector<double>{1e5});
  CHECK(c.rtol == 1e-6);
  // untouched fields keep their defaults
  CHECK(c.nu_list.size() == 4);
  CHECK(c.mesh_list == std::vector<int>({16, 32, 64}));
  CHECK(c.beta_rule == BetaRule::MAX_MU_LAMBDA);

  nlohmann::json out;
  to_json(out, c);
  CHECK(out.at("rtol").get<double>() == 1e-6);
  CHECK(out.at("E_list").get<std::vector<double>>() == c.E_list);
}

TEST_CASE("format and formulation names round trip") {
  CHECK(table_format_from_string("csv") == TableFormat::CSV);
  CHECK(table_format_from_string("json") == TableFormat::JSON);
  CHECK(table_format_from_string("md") == TableFormat::MARKDOWN);
  CHECK(table_format_from_string("markdown") == TableFormat::MARKDOWN);
  CHECK_THROWS_AS(table_format_from_string("tsv"), std::invalid_argument);
  for (Formulation f : {Formulation::TWO_FIELD, Formulation::THREE_FIELD})
    CHECK(formulation_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(formulation_from_string("one_field"), std::invalid_argument);
}

TEST_CASE("matrix market files round trip the assembled operator") {
  const Mesh m = build_structured_mesh(2);
  const MaterialParams p = MaterialParams::footing(3e4, 0.4, 1e3);
  const CsrMatrix S = assemble_three_field(m, p).op.monolithic();
  const std::string path = "roundtrip_tmp.mtx";
  write_matrix_market(S, path);

  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real symmetric");
  }

  const CsrMatrix back = read_matrix_market(path);
  const SpMat diff = SpMat(S.to_eigen() - back.to_eigen());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  CHECK(worst <= 1e-14 * 3e4);
  std::remove(path.c_str());

  CHECK_THROWS(read_matrix_market("/nonexistent/file.mtx"));
}
