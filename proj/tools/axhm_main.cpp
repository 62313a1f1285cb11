// Command-line surface: run / sweep / bench / mms subcommands, each fully
// reproducible from its output directory (effective config echo + CSVs +
// summary).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "axhm/bench.hpp"
#include "axhm/config.hpp"
#include "axhm/csv.hpp"
#include "axhm/experiments.hpp"
#include "axhm/run.hpp"

namespace {

using namespace axhm;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

void echo_config(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/config_echo.txt", render_config(cfg));
}

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> out;
  for (const std::string& tok : split_csv_line(csv))
    if (!tok.empty()) out.push_back(parse_double(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (const std::string& tok : split_csv_line(csv))
    if (!tok.empty()) out.push_back(static_cast<int>(parse_double(tok)));
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& resume_path) {
  RunConfig cfg = load_config_file(config_path);
  cfg.control.out_dir = out_dir;
  echo_config(cfg, out_dir);

  RunResult result;
  if (resume_path.empty()) {
    result = run(cfg.make_grid_(), cfg.initial, cfg.physics, cfg.control);
  } else {
    State state = checkpoint_load(resume_path);
    const GridPtr expected = cfg.make_grid_();
    if (!state.gamma.grid().same_geometry(*expected))
      throw std::runtime_error("resume: checkpoint grid does not match the configured grid");
    result = run_from_state(std::move(state), cfg.control);
  }

  std::ostringstream sum;
  const double e0 = result.records.empty()
                        ? 0.0
                        : result.records.front().h3_u + result.records.front().h3_h;
  sum << "E0 = " << format_double(e0) << "\n";
  sum << "termination = " << termination_name(result.reason) << "\n";
  sum << "t_proxy = " << format_double(result.verdict.t_proxy) << "\n";
  sum << "steps = " << result.steps << "\n";
  sum << "records = " << result.records.size() << "\n";
  if (!result.records.empty()) {
    const DiagnosticsRecord& last = result.records.back();
    sum << "final t = " << format_double(last.t) << "\n";
    sum << "final l2_H = " << format_double(last.l2_H) << "\n";
    sum << "final l2_energy = " << format_double(last.l2_energy) << "\n";
    sum << "final bootstrap_q = " << format_double(last.bootstrap_q) << "\n";
  }
  write_text(out_dir + "/summary.txt", sum.str());
  std::cout << sum.str();
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& param, const std::string& values_csv) {
  RunConfig cfg = load_config_file(config_path);
  echo_config(cfg, out_dir);
  std::vector<double> values = parse_value_list(values_csv);
  if (values.empty()) {
    if (param == "eps")
      values = {1e-1, 1e-2, 1e-3, 1e-4};
    else
      values = {1.0, 0.3, 0.1, 0.03};
  }
  const SweepResult result = sweep(cfg, param, values, out_dir);
  write_sweep_csv(result, out_dir + "/sweep.csv");
  const std::string summary = fit_trend(result);
  write_text(out_dir + "/summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, int samples,
              const std::string& resolutions_csv) {
  RunConfig cfg = load_config_file(config_path);
  echo_config(cfg, out_dir);
  std::vector<int> res = parse_int_list(resolutions_csv);
  if (res.size() != 2) res = {128, 256};

  SampleFamily bumps{FamilyKind::gaussian_bumps, samples, cfg.seed};
  SampleFamily bandlimited{FamilyKind::random_bandlimited, samples, cfg.seed + 1};
  SampleFamily rings{FamilyKind::vortex_rings, samples, cfg.seed + 2};
  SampleFamily heat_family{FamilyKind::gaussian_bumps, std::min(samples, 6), cfg.seed + 3};

  std::vector<RatioReport> reports;
  reports.push_back(verify_gn(bandlimited, GnExponents{0, 1, 6.0, 2.0, 2.0, 1.0}, res[0], res[1]));
  reports.push_back(verify_gn(bandlimited, GnExponents{0, 2, INFINITY, 2.0, 2.0, 0.75}, res[0], res[1]));
  reports.push_back(verify_gn(bumps, GnExponents{1, 2, 2.0, 2.0, 2.0, 0.5}, res[0], res[1]));
  reports.push_back(verify_gn(bumps, GnExponents{0, 1, INFINITY, 6.0, 6.0, 0.5}, res[0], res[1]));
  for (double p : {2.0, 3.0, 6.0}) reports.push_back(verify_biot_savart(rings, p, res[0], res[1]));
  for (double p : {2.0, 6.0}) reports.push_back(verify_grad_ur_over_r(bumps, p, res[0], res[1]));
  reports.push_back(verify_heat_maxreg(heat_family, 2.0, 2.0, 0.25, res[0]));
  reports.push_back(verify_nu_scaling(heat_family, {1.0, 0.1, 0.01}, 0.25, res[0]));

  write_bench_csv(reports, out_dir + "/bench.csv");
  const std::string summary = render_bench_summary(reports);
  write_text(out_dir + "/summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_mms(const std::string& config_path, const std::string& out_dir, const std::string& case_id,
            const std::string& resolutions_csv, double t_final) {
  RunConfig cfg = load_config_file(config_path);
  echo_config(cfg, out_dir);
  std::vector<int> res = parse_int_list(resolutions_csv);
  if (res.empty()) res = {64, 128, 256};
  const auto rows = convergence_study(case_id, res, t_final, cfg.control.cfl_safety);
  write_convergence_csv(rows, out_dir + "/convergence.csv");
  std::ostringstream sum;
  sum << "case = " << case_id << "\n";
  sum << "t_final = " << format_double(t_final) << "\n";
  sum << "n h error order\n";
  for (const ConvergenceRow& r : rows)
    sum << r.n << " " << format_double(r.h) << " " << format_double(r.error) << " "
        << format_double(r.order) << "\n";
  write_text(out_dir + "/summary.txt", sum.str());
  std::cout << sum.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axisymmetric Hall-MHD laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, resume_path, param = "eps", values_csv, resolutions_csv;
  std::string case_id = "coupled_bumps";
  int samples = 12;
  double t_final = 0.05;

  CLI::App* c_run = app.add_subcommand("run", "integrate one configuration");
  c_run->add_option("--config", config_path, "config file");
  c_run->add_option("--out", out_dir, "output directory")->required();
  c_run->add_option("--resume", resume_path, "checkpoint to resume from");

  CLI::App* c_sweep = app.add_subcommand("sweep", "parameter sweep over eps or nu");
  c_sweep->add_option("--config", config_path, "config file");
  c_sweep->add_option("--out", out_dir, "output directory")->required();
  c_sweep->add_option("--param", param, "eps or nu")->check(CLI::IsMember({"eps", "nu"}));
  c_sweep->add_option("--values", values_csv, "comma-separated parameter values");

  CLI::App* c_bench = app.add_subcommand("bench", "functional-inequality bench");
  c_bench->add_option("--config", config_path, "config file");
  c_bench->add_option("--out", out_dir, "output directory")->required();
  c_bench->add_option("--samples", samples, "samples per family");
  c_bench->add_option("--resolutions", resolutions_csv, "coarse,fine grid sizes");

  CLI::App* c_mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  c_mms->add_option("--config", config_path, "config file");
  c_mms->add_option("--out", out_dir, "output directory")->required();
  c_mms->add_option("--case", case_id, "coupled_bumps | linear_h_kernel | zero");
  c_mms->add_option("--resolutions", resolutions_csv, "comma-separated grid sizes");
  c_mms->add_option("--t-final", t_final, "final time");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(config_path, out_dir, resume_path);
    if (c_sweep->parsed()) return cmd_sweep(config_path, out_dir, param, values_csv);
    if (c_bench->parsed()) return cmd_bench(config_path, out_dir, samples, resolutions_csv);
    if (c_mms->parsed()) return cmd_mms(config_path, out_dir, case_id, resolutions_csv, t_final);
  } catch (const axhm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
