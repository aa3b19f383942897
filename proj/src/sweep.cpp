#include "biot/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace biot {

namespace {

std::string iso_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool prec_allowed(Formulation form, PrecKind kind) {
  if (kind == PrecKind::NONE) return true;
  if (form == Formulation::TWO_FIELD) return kind == PrecKind::P_II;
  return kind != PrecKind::P_II;
}

}  // namespace

std::string to_string(Formulation form) {
  return form == Formulation::TWO_FIELD ? "two_field" : "three_field";
}

Formulation formulation_from_string(const std::string& s) {
  if (s == "two_field") return Formulation::TWO_FIELD;
  if (s == "three_field") return Formulation::THREE_FIELD;
  throw std::invalid_argument("unknown formulation: " + s);
}

void SweepConfig::validate() const {
  if (E_list.empty() || nu_list.empty() || kappa_list.empty() || mesh_list.empty() ||
      preconditioners.empty())
    throw std::invalid_argument("sweep config: all parameter lists must be nonempty");
  for (double E : E_list)
    for (double nu : nu_list)
      for (double kappa : kappa_list) MaterialParams::footing(E, nu, kappa).validate();
  for (int n : mesh_list)
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sweep config: mesh sizes must be even and >= 2");
  if (!(rtol > 0)) throw std::invalid_argument("sweep config: rtol must be positive");
  if (maxiter == 0) throw std::invalid_argument("sweep config: maxiter must be >= 1");
  for (PrecKind p : preconditioners)
    if (!prec_allowed(formulation, p))
      throw std::invalid_argument("sweep config: preconditioner " + to_string(p) +
                                  " does not apply to the " + to_string(formulation) + " formulation");
}

bool SweepResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.converged && r.error.empty(); });
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult out;
  out.rtol = config.rtol;
  out.version = kVersion;
  out.timestamp = iso_timestamp();

  std::map<int, Mesh> mesh_cache;
  auto get_mesh = [&mesh_cache](int n) -> const Mesh& {
    auto it = mesh_cache.find(n);
    if (it == mesh_cache.end()) it = mesh_cache.emplace(n, build_structured_mesh(n)).first;
    return it->second;
  };
  const int coarsest = *std::min_element(config.mesh_list.begin(), config.mesh_list.end());

  for (PrecKind prec : config.preconditioners) {
    for (double E : config.E_list) {
      for (double nu : config.nu_list) {
        for (double kappa : config.kappa_list) {
          for (int n : config.mesh_list) {
            SweepRow row;
            row.prec = prec;
            row.E = E;
            row.nu = nu;
            row.kappa = kappa;
            row.n = n;
            row.rtol = config.rtol;
            try {
              const Mesh& mesh = get_mesh(n);
              const MaterialParams params = MaterialParams::footing(E, nu, kappa);
              const AssembledSystem sys = config.formulation == Formulation::THREE_FIELD
                                              ? assemble_three_field(mesh, params)
                                              : assemble_two_field(mesh, params);
              PreconditionerSpec pspec;
              pspec.kind = prec;
              pspec.beta_rule = config.beta_rule;
              const Preconditioner P = build_preconditioner(pspec, sys.op, params);
              const CsrMatrix S = sys.op.monolithic();
              auto [x, report] = minres([&S](const Eigen::VectorXd& v) { return spmv(S, v); },
                                        [&P](const Eigen::VectorXd& r) { return P.apply(r); },
                                        sys.rhs, config.rtol, config.maxiter);
              (void)x;
              row.iterations = report.iterations;
              row.converged = report.converged;
              row.wall_time_s = report.wall_time_s;
              if (config.with_condition_numbers && n == coarsest) {
                const EigMode mode = sys.op.dim() <= 600 ? EigMode::DENSE : EigMode::LANCZOS;
                row.cond_number =
                    condition_number(sys.op, prec == PrecKind::NONE ? nullptr : &P, mode);
              }
            } catch (const std::exception& e) {
              row.converged = false;
              row.error = e.what();
            }
            out.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(static_cast<int>(a.prec), a.E, a.nu, a.kappa, a.n) <
           std::make_tuple(static_cast<int>(b.prec), b.E, b.nu, b.kappa, b.n);
  });
  return out;
}

namespace {

std::string emit_csv(const SweepResult& result) {
  // 12 significant digits so parse_result_csv round-trips losslessly for
  // practical purposes
  auto f = [](double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
  };
  std::ostringstream os;
  os << "prec,E,nu,kappa,n,iterations,converged,cond_number,wall_time_s,rtol\n";
  for (const SweepRow& r : result.rows) {
    os << to_string(r.prec) << ',' << f(r.E) << ',' << f(r.nu) << ',' << f(r.kappa) << ','
       << r.n << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << ','
       << (std::isnan(r.cond_number) ? "" : f(r.cond_number)) << ',' << f(r.wall_time_s) << ','
       << f(r.rtol) << '\n';
  }
  return os.str();
}

std::string emit_markdown(const SweepResult& result) {
  std::set<double> kappas, Es, nus;
  std::set<int> ns, precs;
  for (const SweepRow& r : result.rows) {
    kappas.insert(r.kappa);
    Es.insert(r.E);
    nus.insert(r.nu);
    ns.insert(r.n);
    precs.insert(static_cast<int>(r.prec));
  }
  std::map<std::tuple<int, double, double, double, int>, const SweepRow*> index;
  for (const SweepRow& r : result.rows)
    index[{static_cast<int>(r.prec), r.E, r.nu, r.kappa, r.n}] = &r;

  std::ostringstream os;
  os << "# MINRES iteration counts (rtol " << fmt(result.rtol) << ")\n";
  for (double kappa : kappas) {
    os << "\n## kappa = " << fmt(kappa) << "\n\n";
    os << "| nu | h |";
    for (double E : Es)
      for (int p : precs) os << " E=" << fmt(E) << " " << to_string(static_cast<PrecKind>(p)) << " |";
    os << "\n|---|---|";
    for (std::size_t k = 0; k < Es.size() * precs.size(); ++k) os << "---|";
    os << "\n";
    for (double nu : nus) {
      for (int n : ns) {
        os << "| " << fmt(nu) << " | 1/" << n << " |";
        for (double E : Es) {
          for (int p : precs) {
            auto it = index.find({p, E, nu, kappa, n});
            if (it == index.end()) {
              os << " - |";
            } else if (!it->second->error.empty()) {
              os << " err |";
            } else {
              os << " " << it->second->iterations << (it->second->converged ? "" : "*") << " |";
            }
          }
        }
        os << "\n";
      }
    }
  }
  os << "\n(*) did not reach the tolerance within maxiter.\n";
  return os.str();
}

}  // namespace

std::string emit_table(const SweepResult& result, TableFormat format) {
  if (result.rows.empty()) throw std::invalid_argument("emit_table: empty result");
  switch (format) {
    case TableFormat::CSV: return emit_csv(result);
    case TableFormat::JSON: {
      nlohmann::json j = result;
      return j.dump(2) + "\n";
    }
    case TableFormat::MARKDOWN: return emit_markdown(result);
  }
  throw std::invalid_argument("emit_table: unknown format");
}

SweepResult parse_result_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "prec,E,nu,kappa,n,iterations,converged,cond_number,wall_time_s,rtol")
    throw std::runtime_error("parse_result_csv: unexpected header");
  SweepResult out;
  out.version = kVersion;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 10) throw std::runtime_error("parse_result_csv: bad row: " + line);
    SweepRow r;
    r.prec = prec_kind_from_string(f[0]);
    r.E = std::stod(f[1]);
    r.nu = std::stod(f[2]);
    r.kappa = std::stod(f[3]);
    r.n = std::stoi(f[4]);
    r.iterations = static_cast<std::size_t>(std::stoul(f[5]));
    r.converged = f[6] == "true";
    r.cond_number = f[7].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[7]);
    r.wall_time_s = std::stod(f[8]);
    r.rtol = std::stod(f[9]);
    out.rows.push_back(std::move(r));
  }
  if (!out.rows.empty()) out.rtol = out.rows.front().rtol;
  return out;
}

SweepResult parse_result_json(const std::string& text) {
  return nlohmann::json::parse(text).get<SweepResult>();
}

TableFormat table_format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::CSV;
  if (s == "json") return TableFormat::JSON;
  if (s == "markdown" || s == "md") return TableFormat::MARKDOWN;
  throw std::invalid_argument("unknown table format: " + s);
}

void to_json(nlohmann::json& j, const SweepConfig& c) {
  std::vector<std::string> precs;
  for (PrecKind p : c.preconditioners) precs.push_back(to_string(p));
  j = nlohmann::json{{"E_list", c.E_list},
                     {"nu_list", c.nu_list},
                     {"kappa_list", c.kappa_list},
                     {"mesh_list", c.mesh_list},
                     {"preconditioners", precs},
                     {"formulation", to_string(c.formulation)},
                     {"rtol", c.rtol},
                     {"maxiter", c.maxiter},
                     {"with_condition_numbers", c.with_condition_numbers},
                     {"beta_rule", to_string(c.beta_rule)}};
}

void from_json(const nlohmann::json& j, SweepConfig& c) {
  c = SweepConfig{};
  if (j.contains("E_list")) j.at("E_list").get_to(c.E_list);
  if (j.contains("nu_list")) j.at("nu_list").get_to(c.nu_list);
  if (j.contains("kappa_list")) j.at("kappa_list").get_to(c.kappa_list);
  if (j.contains("mesh_list")) j.at("mesh_list").get_to(c.mesh_list);
  if (j.contains("preconditioners")) {
    c.preconditioners.clear();
    for (const auto& s : j.at("preconditioners"))
      c.preconditioners.push_back(prec_kind_from_string(s.get<std::string>()));
  }
  if (j.contains("formulation")) c.formulation = formulation_from_string(j.at("formulation").get<std::string>());
  if (j.contains("rtol")) j.at("rtol").get_to(c.rtol);
  if (j.contains("maxiter")) j.at("maxiter").get_to(c.maxiter);
  if (j.contains("with_condition_numbers")) j.at("with_condition_numbers").get_to(c.with_condition_numbers);
  if (j.contains("beta_rule")) c.beta_rule = beta_rule_from_string(j.at("beta_rule").get<std::string>());
}

void to_json(nlohmann::json& j, const SweepRow& r) {
  j = nlohmann::json{{"prec", to_string(r.prec)},
                     {"E", r.E},
                     {"nu", r.nu},
                     {"kappa", r.kappa},
                     {"n", r.n},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"cond_number", std::isnan(r.cond_number) ? nlohmann::json() : nlohmann::json(r.cond_number)},
                     {"wall_time_s", r.wall_time_s},
                     {"rtol", r.rtol},
                     {"error", r.error}};
}

void from_json(const nlohmann::json& j, SweepRow& r) {
  r.prec = prec_kind_from_string(j.at("prec").get<std::string>());
  j.at("E").get_to(r.E);
  j.at("nu").get_to(r.nu);
  j.at("kappa").get_to(r.kappa);
  j.at("n").get_to(r.n);
  j.at("iterations").get_to(r.iterations);
  j.at("converged").get_to(r.converged);
  r.cond_number = j.at("cond_number").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("cond_number").get<double>();
  j.at("wall_time_s").get_to(r.wall_time_s);
  j.at("rtol").get_to(r.rtol);
  r.error = j.value("error", std::string());
}

void to_json(nlohmann::json& j, const SweepResult& r) {
  j = nlohmann::json{{"rows", r.rows}, {"rtol", r.rtol}, {"version", r.version}, {"timestamp", r.timestamp}};
}

void from_json(const nlohmann::json& j, SweepResult& r) {
  j.at("rows").get_to(r.rows);
  j.at("rtol").get_to(r.rtol);
  r.version = j.value("version", std::string());
  r.timestamp = j.value("timestamp", std::string());
}

}  // namespace biot
