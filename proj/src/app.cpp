#include "pcopula/app.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "parallel_for.hpp"
#include "pcopula/csv.hpp"
#include "pcopula/kernels.hpp"
#include "pcopula/rng.hpp"

namespace pcop {

namespace {

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  const auto end = s.find_last_not_of(ws);
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_value<double>(key, trim(item)));
  return out;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("grid entry '" + item + "' is not name=points");
    const std::string name = trim(item.substr(0, eq));
    const int pts = parse_value<int>("grid", trim(item.substr(eq + 1)));
    if (pts < 2) throw UsageError("grid '" + name + "' needs at least 2 points");
    if (name == "kdd") g.kdd_points = pts;
    else if (name == "zoom") g.zoom_points = pts;
    else if (name == "qpd") g.qpd_points = pts;
    else if (name == "z") g.z_points = pts;
    else throw UsageError("unknown grid '" + name + "' (kdd, zoom, qpd, z)");
  }
  return g;
}

std::string grid_text(const GridSpec& g) {
  return "kdd=" + std::to_string(g.kdd_points) + ",zoom=" + std::to_string(g.zoom_points) +
         ",qpd=" + std::to_string(g.qpd_points) + ",z=" + std::to_string(g.z_points);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << text;
}

bool is_default_grid(const GridSpec& g) {
  const GridSpec d;
  return g.kdd_points == d.kdd_points && g.zoom_points == d.zoom_points &&
         g.qpd_points == d.qpd_points && g.z_points == d.z_points;
}

}  // namespace

// ---- configuration ---------------------------------------------------------

void apply_config_text(const std::string& text, RunConfig& cfg) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "command") cfg.command = val;
    else if (key == "scenario") cfg.scenario = val;
    else if (key == "family") cfg.family = val;
    else if (key == "params") cfg.params = val;
    else if (key == "rotation") cfg.rotation = parse_value<int>(key, val);
    else if (key == "n") cfg.n = parse_value<std::size_t>(key, val);
    else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, val);
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "grid") cfg.grid = parse_grid(val);
    else if (key == "workers") cfg.workers = parse_value<int>(key, val);
    else if (key == "sigma") cfg.sigma = parse_list(key, val);
    else if (key == "mutate") cfg.mutate = val;
    else if (key == "only") cfg.only = val;
    else throw UsageError("unknown config key '" + key + "'");
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), cfg);
}

std::vector<double> default_sigmas() { return {0.1, 0.5, 1.0, 2.0}; }

std::string materialize(const RunConfig& cfg) {
  std::string sig;
  for (double s : cfg.sigma.empty() ? default_sigmas() : cfg.sigma)
    sig += (sig.empty() ? "" : ",") + format_short(s);
  std::ostringstream o;
  o << "command=" << cfg.command << '\n'
    << "scenario=" << (cfg.scenario.empty() ? "all" : cfg.scenario) << '\n'
    << "family=" << (cfg.family.empty() ? "all" : cfg.family) << '\n'
    << "params=" << (cfg.params.empty() ? "default" : cfg.params) << '\n'
    << "rotation=" << cfg.rotation << '\n'
    << "n=" << cfg.n << '\n'
    << "seed=" << cfg.seed << '\n'
    << "out_dir=" << cfg.out_dir.string() << '\n'
    << "grid=" << grid_text(cfg.grid) << '\n'
    << "workers=" << (cfg.workers > 0 ? cfg.workers : omp_get_max_threads()) << '\n'
    << "sigma=" << sig << '\n'
    << "mutate=" << (cfg.mutate.empty() ? "none" : cfg.mutate) << '\n'
    << "only=" << (cfg.only.empty() ? "all" : cfg.only) << '\n';
  return o.str();
}

// ---- scenarios -------------------------------------------------------------

ScenarioRun run_scenario(const ScenarioConfig& config) {
  ScenarioRun r;
  r.config = config;
  r.samples = sample_cvine(config.model, config.n, config.seed);
  r.pseudo = pseudo_observations(r.samples, config.model.c_xz, config.model.c_yz);
  r.marginal = summarize("marginal", r.samples.x, r.samples.y);
  r.partial = summarize("partial", r.pseudo.u_x, r.pseudo.u_y);
  return r;
}

std::vector<ScenarioConfig> select_scenarios(const RunConfig& cfg) {
  auto table = scenario_table(cfg.n, cfg.seed);
  std::vector<ScenarioConfig> out;
  std::string valid;
  for (const auto& c : table) {
    std::string sid = std::to_string(c.scenario);
    if (c.sub_case) sid += c.sub_case;
    if (valid.find(" " + sid + ",") == std::string::npos) valid += " " + sid + ",";
    const bool scen_ok = cfg.scenario.empty() || cfg.scenario == sid;
    const bool fam_ok = cfg.family.empty() || cfg.family == family_name(c.family) ||
                        (cfg.family == "independence" && c.family == Family::independence);
    if (scen_ok && fam_ok) out.push_back(c);
  }
  if (out.empty()) {
    valid.pop_back();
    throw UsageError("no scenario '" + cfg.scenario + "' with family '" + cfg.family +
                     "'; scenarios:" + valid + "; families: frank, gumbel, clayton, gaussian");
  }
  return out;
}

namespace {

std::string meta_text(const ScenarioConfig& c, const RunConfig& cfg) {
  std::ostringstream o;
  o << "artifact_version=" << kArtifactVersion << '\n'
    << "rng=" << CounterRng::kName << '\n'
    << "seed=" << c.seed << '\n'
    << "n=" << c.n << '\n'
    << "config_id=" << c.id() << '\n'
    << "model=" << c.params() << '\n'
    << "signs=" << c.signs[0] << "," << c.signs[1] << "," << c.signs[2] << '\n'
    << "signs_match=" << (c.signs_match() ? "yes" : "no") << '\n'
    << "parameter_source=artifact defaults (only the dependence signs are fixed)\n"
    << materialize(cfg);
  return o.str();
}

void write_scenario_files(const ScenarioRun& r, const RunConfig& cfg) {
  const std::string id = r.config.id();
  std::vector<std::vector<std::string>> rows;
  rows.reserve(r.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i)
    rows.push_back({format_g17(r.samples.x[i]), format_g17(r.samples.y[i]),
                    format_g17(r.samples.z[i]), format_g17(r.pseudo.u_x[i]),
                    format_g17(r.pseudo.u_y[i])});
  write_csv(cfg.out_dir / ("samples_" + id + ".csv"), {"x", "y", "z", "u_x", "u_y"}, rows);
  write_text(cfg.out_dir / ("summary_" + id + ".csv"),
             DependenceSummary::csv_header() + "\n" + r.marginal.csv_row() + "\n" +
                 r.partial.csv_row() + "\n");
  write_text(cfg.out_dir / ("meta_" + id + ".txt"), meta_text(r.config, cfg));
}

}  // namespace

// ---- commands --------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  if (cfg.scenario.empty()) throw UsageError("simulate needs --scenario");
  const auto configs = select_scenarios(cfg);
  ensure_dir(cfg.out_dir);
  for (const auto& c : configs) {
    const ScenarioRun r = run_scenario(c);
    write_scenario_files(r, cfg);
    log << c.id() << ": marginal rho=" << format_short(r.marginal.spearman)
        << " partial rho=" << format_short(r.partial.spearman) << '\n';
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  RunConfig all = cfg;
  const auto configs = select_scenarios(all);
  ensure_dir(cfg.out_dir);

  struct Row {
    ScenarioRun run;
    double rho_analytic = 0.0;
    double tau_analytic = 0.0;
    std::string status = "ok";
  };
  std::vector<Row> rows(configs.size());
  detail::parallel_for(
      configs.size(),
      [&](std::size_t i) {
        try {
          rows[i].run = run_scenario(configs[i]);
          rows[i].rho_analytic = partial_rho(configs[i].model.cond);
          rows[i].tau_analytic = partial_tau(configs[i].model.cond);
        } catch (const std::exception& e) {
          rows[i].run.config = configs[i];
          rows[i].status = std::string("error: ") + e.what();
        }
      },
      cfg.workers);

  // Single collector: files are written in table order after all rows finish.
  std::vector<std::vector<std::string>> table;
  int failures = 0;
  for (const auto& row : rows) {
    const ScenarioConfig& c = row.run.config;
    std::string sid = std::to_string(c.scenario);
    if (c.sub_case) sid += c.sub_case;
    if (row.status != "ok") {
      ++failures;
      std::string status = row.status;
      std::replace(status.begin(), status.end(), ',', ';');
      table.push_back({sid, std::string(family_name(c.family)), c.params(), std::to_string(c.n),
                       std::to_string(c.seed), "", "", "", "", "", "", status});
      log << c.id() << ": " << row.status << '\n';
      continue;
    }
    write_scenario_files(row.run, cfg);
    table.push_back({sid, std::string(family_name(c.family)), c.params(), std::to_string(c.n),
                     std::to_string(c.seed), format_g17(row.run.marginal.spearman),
                     format_g17(row.run.marginal.kendall), format_g17(row.run.partial.spearman),
                     format_g17(row.run.partial.kendall), format_g17(row.rho_analytic),
                     format_g17(row.tau_analytic), "ok"});
  }
  write_csv(cfg.out_dir / "sweep.csv",
            {"scenario", "family", "params", "n", "seed", "marginal_rho", "marginal_tau",
             "partial_rho", "partial_tau", "analytic_partial_rho", "analytic_partial_tau",
             "status"},
            table);
  std::ostringstream meta;
  meta << "artifact_version=" << kArtifactVersion << '\n'
       << "rng=" << CounterRng::kName << '\n'
       << "rows=" << table.size() << '\n'
       << "parameter_source=artifact defaults (only the dependence signs are fixed)\n"
       << materialize(cfg);
  write_text(cfg.out_dir / "meta_sweep.txt", meta.str());
  log << "sweep: " << table.size() << " rows, " << failures << " errors\n";
  return failures ? 1 : 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& log) {
  if (cfg.family.empty()) throw UsageError("eval needs --family");
  Family family;
  ThetaFunction theta = ThetaFunction::constant(0.0);
  Rotation rotation;
  try {
    family = parse_family(cfg.family);
    theta = ThetaFunction::parse(cfg.params.empty() ? "const:0" : cfg.params);
    rotation = parse_rotation(cfg.rotation);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (cfg.params.empty() && family != Family::independence)
    throw UsageError("eval needs --theta-fn for family " + cfg.family);
  ConditionalFamily cond;
  try {
    cond = ConditionalFamily(family, theta, rotation);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  ensure_dir(cfg.out_dir);

  const auto grid = linspace(0.0, 1.0, 21);
  std::vector<std::vector<std::string>> rows;
  std::vector<double> values(grid.size() * grid.size());
  detail::parallel_for(
      values.size(),
      [&](std::size_t k) {
        values[k] = partial_cdf(cond, grid[k / grid.size()], grid[k % grid.size()]);
      },
      cfg.workers);
  for (std::size_t k = 0; k < values.size(); ++k)
    rows.push_back({"partial_cdf", format_g17(grid[k / grid.size()]),
                    format_g17(grid[k % grid.size()]), format_g17(values[k])});

  const BoundCertificate cert = certify_bounds(cond, cond.describe(), cfg.grid);
  auto scalar = [&](const std::string& name, double v) {
    rows.push_back({name, "", "", format_g17(v)});
  };
  scalar("partial_rho", cert.rho_partial);
  scalar("partial_rho_from_cdf", partial_rho_from_cdf(cond));
  scalar("partial_tau", cert.tau_partial);
  scalar("conditional_kdd_sup", cert.k);
  scalar("partial_kdd", cert.kdd_partial);
  scalar("certificate_passed", cert.passed() ? 1.0 : 0.0);
  write_csv(cfg.out_dir / "eval.csv", {"quantity", "u", "v", "value"}, rows);
  write_text(cfg.out_dir / "certificate.csv",
             BoundCertificate::csv_header() + "\n" + cert.csv_row() + "\n");
  log << cond.describe() << ": rho=" << format_short(cert.rho_partial)
      << " tau=" << format_short(cert.tau_partial) << " k=" << format_short(cert.k)
      << " certificate " << (cert.passed() ? "PASS" : "FAIL") << '\n';
  if (!is_default_grid(cfg.grid)) log << "note: non-default grid " << grid_text(cfg.grid) << '\n';
  return cert.passed() ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  dev::Mutation m = dev::Mutation::none;
  if (cfg.mutate == "gumbel-h2") m = dev::Mutation::gumbel_h2;
  else if (!cfg.mutate.empty() && cfg.mutate != "none")
    throw UsageError("unknown mutation '" + cfg.mutate + "' (gumbel-h2)");
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

  VerifyOptions opts;
  opts.only = cfg.only;
  opts.n = cfg.n;
  opts.seed = cfg.seed;
  opts.grid = cfg.grid;
  dev::set_mutation(m);
  std::vector<CheckResult> results;
  try {
    results = run_verify(opts, &log);
  } catch (...) {
    dev::set_mutation(dev::Mutation::none);
    throw;
  }
  dev::set_mutation(dev::Mutation::none);

  ensure_dir(cfg.out_dir);
  std::string report;
  int failed = 0;
  for (const auto& r : results) {
    report += format_check(r) + '\n';
    failed += r.passed ? 0 : 1;
  }
  report += "summary: " + std::to_string(results.size() - failed) + " passed, " +
            std::to_string(failed) + " failed\n";
  write_text(cfg.out_dir / "verify_report.txt", report);
  log << "verify: " << results.size() - failed << " passed, " << failed << " failed\n";
  if (results.empty()) {
    log << "verify: no check matches '" << cfg.only << "'\n";
    return 1;
  }
  return failed ? 1 : 0;
}

int cmd_pitfall(const RunConfig& cfg, std::ostream& log) {
  const auto sigmas = cfg.sigma.empty() ? default_sigmas() : cfg.sigma;
  for (double s : sigmas)
    if (!(s > 0.0)) throw UsageError("sigma must be positive, got " + format_short(s));
  ensure_dir(cfg.out_dir);
  std::vector<std::vector<std::string>> rows;
  for (double s : sigmas) {
    const PitfallSample p = sample_pitfall(s, cfg.n, cfg.seed);
    const double marginal = pearson(p.x, p.y);
    const double residual = partial_correlation(p.x, p.y, p.z);
    const double theory = 2.0 / (2.0 + s * s);
    const double copula_rho = spearman_emp(p.u_x, p.u_y);
    rows.push_back({format_g17(s), format_g17(marginal), format_g17(residual),
                    format_g17(theory), format_g17(copula_rho)});
    log << "sigma=" << format_short(s) << ": residual correlation " << format_short(residual)
        << " (theory " << format_short(theory) << "), partial copula rho "
        << format_short(copula_rho) << '\n';
  }
  write_csv(cfg.out_dir / "pitfall.csv",
            {"sigma", "pearson_marginal", "partial_correlation", "theory", "partial_copula_rho"},
            rows);
  return 0;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "simulate") return cmd_simulate(cfg, log);
  if (cfg.command == "sweep") return cmd_sweep(cfg, log);
  if (cfg.command == "eval") return cmd_eval(cfg, log);
  if (cfg.command == "verify") return cmd_verify(cfg, log);
  if (cfg.command == "pitfall") return cmd_pitfall(cfg, log);
  throw UsageError("unknown command '" + cfg.command +
                   "' (simulate, sweep, eval, verify, pitfall)");
}

}  // namespace pcop
