#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "biot/analysis.hpp"
#include "biot/assembly.hpp"
#include "biot/preconditioners.hpp"

namespace biot {

inline constexpr const char* kVersion = "1.0.0";

struct SweepConfig {
  std::vector<double> E_list{3e4, 3e5, 3e6};
  std::vector<double> nu_list{0.4, 0.49, 0.495, 0.499};
  std::vector<double> kappa_list{1.0, 10.0, 1e3, 1e5, 1e7};
  std::vector<int> mesh_list{16, 32, 64};  // the paper-scale 128 column is opt-in
  std::vector<PrecKind> preconditioners{PrecKind::P1_III, PrecKind::P2_III, PrecKind::P3_III};
  Formulation formulation = Formulation::THREE_FIELD;
  double rtol = 1e-8;
  std::size_t maxiter = 500;
  bool with_condition_numbers = false;  // coarsest mesh only
  // The augmentation weight rule used for every preconditioner in the sweep.
  // max{mu,lambda} keeps the preconditioned spectra parameter-robust across
  // the whole kappa range (the min rule degrades at small kappa).
  BetaRule beta_rule = BetaRule::MAX_MU_LAMBDA;

  void validate() const;  // throws std::invalid_argument
};

struct SweepRow {
  PrecKind prec = PrecKind::P1_III;
  double E = 0.0, nu = 0.0, kappa = 0.0;
  int n = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double cond_number = std::numeric_limits<double>::quiet_NaN();  // NaN = not computed
  double wall_time_s = 0.0;
  double rtol = 0.0;
  std::string error;  // nonempty when the point failed outright
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double rtol = 0.0;
  std::string version;
  std::string timestamp;

  bool all_converged() const;
};

SweepResult run_sweep(const SweepConfig& config);

enum class TableFormat { CSV, JSON, MARKDOWN };

// CSV columns: prec,E,nu,kappa,n,iterations,converged,cond_number,wall_time_s,rtol.
// JSON round-trips through parse_result_json. MARKDOWN mirrors the benchmark
// tables: one table per kappa, rows (nu, h), iteration columns grouped by E.
std::string emit_table(const SweepResult& result, TableFormat format);

SweepResult parse_result_csv(const std::string& text);
SweepResult parse_result_json(const std::string& text);

TableFormat table_format_from_string(const std::string& s);
Formulation formulation_from_string(const std::string& s);
std::string to_string(Formulation form);

void to_json(nlohmann::json& j, const SweepConfig& c);
void from_json(const nlohmann::json& j, SweepConfig& c);
void to_json(nlohmann::json& j, const SweepRow& r);
void from_json(const nlohmann::json& j, SweepRow& r);
void to_json(nlohmann::json& j, const SweepResult& r);
void from_json(const nlohmann::json& j, SweepResult& r);

}  // namespace biot
