#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbrc/cba.hpp"
#include "mbrc/curve.hpp"
#include "mbrc/errors.hpp"
#include "mbrc/prioritizer.hpp"
#include "mbrc/scenario_io.hpp"
#include "mbrc/synthetic.hpp"
#include "mbrc/text.hpp"

namespace mbrc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string scenario_path;
  std::optional<double> z_override;
  std::string mode = "lazy";
  std::optional<double> target;
  std::string output_dir;
  std::optional<int> threads;
  std::uint64_t seed = 42;
  bool json_output = false;

  // subcommand specific
  std::string footprint_path;
  std::optional<double> inject_price_pp;
  std::optional<double> inject_delta_pp;
  bool smooth = false;
  SyntheticParams synthetic;
  std::string cost_distribution = "lognormal";
};

/// Signals an early exit with a specific code after the message was printed.
struct Exit {
  int code;
};

void write_file(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  f << content;
  if (!f) throw InputError(file.string(), "cannot write file");
}

class Commands {
 public:
  Commands(RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int build_curve_cmd() {
    require_out();
    const auto& s = load();
    const auto prepared = prepare(s);
    const double z = z_for(s);
    SequenceOptions opt{mode(), cfg_.target, std::nullopt, true};
    const auto plan = build_sequence(prepared, z, opt);
    const auto curve = build_curve(plan);
    if (prepared.candidates.empty()) err_ << "warning: scenario has no candidate actions; curve is empty\n";

    const fs::path dir = cfg_.output_dir;
    {
      std::ostringstream csv;
      write_curve_csv(csv, curve);
      write_file(dir / "curve.csv", csv.str());
    }
    if (cfg_.smooth) {
      std::ostringstream csv;
      write_curve_csv(csv, lower_convex_envelope(curve));
      write_file(dir / "curve_smoothed.csv", csv.str());
    }
    {
      std::ostringstream csv;
      csv << "cell_id,rank,cost_effectiveness,technology_id\n";
      for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        const auto& st = plan.steps[k];
        csv << st.action.cell_id << ',' << k + 1 << ',' << text::format_double(st.cost_effectiveness) << ','
            << text::csv_field(st.action.technology_id) << '\n';
      }
      write_file(dir / "map.csv", csv.str());
    }
    json summary;
    summary["z"] = z;
    summary["mode"] = std::string(to_string(mode()));
    summary["n_species"] = plan.n_species;
    summary["n_candidates"] = prepared.candidates.size();
    summary["baseline_index"] = plan.baseline_index;
    summary["final_index"] = plan.final_index;
    summary["step_count"] = plan.steps.size();
    summary["total_cost"] = plan.total_cost();
    summary["excluded_species"] = json::array();
    for (const auto& ex : prepared.species.excluded)
      summary["excluded_species"].push_back({{"species_id", ex.species_id}, {"reason", ex.reason}});
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    out_ << "wrote " << curve.steps.size() << " steps to " << (dir / "curve.csv").string() << '\n';
    return kOk;
  }

  int shadow_price_cmd() {
    const double target = require_target();
    const auto& s = load();
    const auto prepared = prepare(s);
    const double z = z_for(s);
    const auto plan = build_sequence(prepared, z, {mode(), target, std::nullopt, true});
    const auto quote = shadow_price(build_curve(plan), target);
    const auto j = to_json(quote);
    out_ << j.dump(2) << '\n';
    if (!cfg_.output_dir.empty()) write_file(fs::path(cfg_.output_dir) / "quote.json", j.dump(2) + "\n");
    return kOk;
  }

  int price_project_cmd() {
    const double target = require_target();
    ProjectFootprint footprint;
    if (!cfg_.footprint_path.empty()) footprint = load_footprint(cfg_.footprint_path);
    const bool need_scenario = !(cfg_.inject_price_pp && cfg_.inject_delta_pp);
    if (need_scenario && cfg_.scenario_path.empty()) usage("--scenario is required unless both --price-pp and --delta-pp are given");
    if (!cfg_.inject_delta_pp && cfg_.footprint_path.empty()) usage("--footprint is required unless --delta-pp is given");

    double z = cfg_.z_override.value_or(0.25);
    ShadowPriceQuote quote;
    double delta_pp = 0.0;
    if (need_scenario) {
      const auto& s = load();
      z = z_for(s);
      const auto prepared = prepare(s);
      const auto plan = build_sequence(prepared, z, {mode(), target, std::nullopt, true});
      quote = shadow_price(build_curve(plan), target);
      if (!cfg_.inject_delta_pp)
        delta_pp = project_delta_index(s, prepared.species, footprint, z, classes_after(s, plan.steps));
    }
    if (cfg_.inject_price_pp) {
      quote.target = target;
      quote.z = z;
      quote.price_per_pp = *cfg_.inject_price_pp;
      quote.price_per_unit_index = *cfg_.inject_price_pp * 100.0;
    }
    if (cfg_.inject_delta_pp) delta_pp = *cfg_.inject_delta_pp;
    const ProjectImpact impact{delta_pp, footprint.z.value_or(z), footprint.target.value_or(target)};
    const auto appraisal = price_project(quote, impact, footprint.label);
    const auto j = to_json(appraisal);
    out_ << j.dump(2) << '\n';
    if (!cfg_.output_dir.empty()) write_file(fs::path(cfg_.output_dir) / "appraisal.json", j.dump(2) + "\n");
    return kOk;
  }

  int sweep_z_cmd() {
    const double target = require_target();
    require_out();
    const auto& s = load();
    const auto prepared = prepare(s);
    const auto entries = sweep_z(prepared, s.z, target, mode());
    std::ostringstream csv;
    csv << "z,baseline_index,max_achievable_index,reachable,target,price_per_unit_index,price_per_pp,marginal_step,"
           "achieved_index\n";
    bool any = false;
    for (const auto& e : entries) {
      using text::format_double;
      csv << format_double(e.z) << ',' << format_double(e.baseline_index) << ',' << format_double(e.max_achievable_index)
          << ',';
      if (e.quote) {
        any = true;
        const auto& q = *e.quote;
        csv << "true," << format_double(target) << ',' << format_double(q.price_per_unit_index) << ','
            << format_double(q.price_per_pp) << ',' << (q.marginal_step ? std::to_string(*q.marginal_step) : "") << ','
            << format_double(q.achieved_index) << '\n';
      } else {
        csv << "false," << format_double(target) << ",,,,\n";
        err_ << "warning: target " << format_double(target) << " unreachable at z = " << format_double(e.z)
             << " (max achievable " << format_double(e.max_achievable_index) << ")\n";
      }
    }
    write_file(fs::path(cfg_.output_dir) / "sweep.csv", csv.str());
    out_ << "wrote " << entries.size() << " rows to " << (fs::path(cfg_.output_dir) / "sweep.csv").string() << '\n';
    return any ? kOk : kTargetUnreachable;
  }

  int gen_synthetic_cmd() {
    require_out();
    auto params = cfg_.synthetic;
    const auto dist = parse_cost_distribution(cfg_.cost_distribution);
    if (!dist) usage("--cost-dist must be lognormal or uniform");
    params.cost_distribution = *dist;
    const auto s = gen_synthetic(cfg_.seed, params);
    save_scenario(s, cfg_.output_dir);
    out_ << "wrote synthetic scenario (seed " << cfg_.seed << ") to " << cfg_.output_dir << '\n';
    return kOk;
  }

  int validate_cmd() {
    if (cfg_.scenario_path.empty()) usage("--scenario is required");
    ValidationReport report;
    try {
      report = validate(load_scenario(cfg_.scenario_path));
    } catch (const InputError& e) {
      const std::string where = e.line() > 0 ? " (line " + std::to_string(e.line()) + ")" : "";
      report.errors.push_back({e.file(), e.detail() + where});
    }
    if (cfg_.json_output) {
      json j;
      j["valid"] = report.ok();
      j["errors"] = json::array();
      j["warnings"] = json::array();
      for (const auto& i : report.errors) j["errors"].push_back({{"file", i.file}, {"message", i.message}});
      for (const auto& i : report.warnings) j["warnings"].push_back({{"file", i.file}, {"message", i.message}});
      out_ << j.dump(2) << '\n';
    } else {
      for (const auto& i : report.errors) out_ << "error: " << i.file << ": " << i.message << '\n';
      for (const auto& i : report.warnings) out_ << "warning: " << i.file << ": " << i.message << '\n';
      out_ << (report.ok() ? "valid" : "invalid") << " (" << report.errors.size() << " error(s), " << report.warnings.size()
           << " warning(s))\n";
    }
    return report.ok() ? kOk : kInputError;
  }

 private:
  [[noreturn]] void usage(const std::string& message) {
    err_ << "error: " << message << '\n';
    throw Exit{kInputError};
  }

  void require_out() {
    if (cfg_.output_dir.empty()) usage("--out is required");
  }

  double require_target() {
    if (!cfg_.target) usage("--target is required");
    return *cfg_.target;
  }

  PrioritizerMode mode() {
    const auto m = parse_mode(cfg_.mode);
    if (!m) usage("--mode must be exact or lazy");
    return *m;
  }

  double z_for(const Scenario& s) const { return cfg_.z_override.value_or(s.z.central); }

  const Scenario& load() {
    if (cfg_.scenario_path.empty()) usage("--scenario is required");
    scenario_ = load_scenario(cfg_.scenario_path);
    const auto report = validate(*scenario_);
    for (const auto& w : report.warnings) err_ << "warning: " << w.file << ": " << w.message << '\n';
    if (!report.ok()) {
      for (const auto& e : report.errors) err_ << "error: " << e.file << ": " << e.message << '\n';
      throw Exit{kInputError};
    }
    return *scenario_;
  }

  RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Scenario> scenario_;
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool scenario, bool target) {
  if (scenario) cmd->add_option("--scenario", cfg.scenario_path, "Scenario package directory");
  if (target) cmd->add_option("--target", cfg.target, "Target index level in (0, 1]");
  cmd->add_option("--z", cfg.z_override, "Override the manifest's central z");
  cmd->add_option("--mode", cfg.mode, "Prioritizer mode: exact or lazy");
  cmd->add_option("--threads", cfg.threads, "OpenMP thread count");
  cmd->add_option("--out", cfg.output_dir, "Output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Marginal biodiversity recovery cost curves and shadow prices", "mbrc"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-curve", "Build the MBRC curve and plot-ready outputs");
  add_common(build, cfg, true, true);
  build->add_flag("--smooth", cfg.smooth, "Also write the lower convex envelope as curve_smoothed.csv");

  auto* quote = app.add_subcommand("shadow-price", "Shadow price at a target index");
  add_common(quote, cfg, true, true);

  auto* project = app.add_subcommand("price-project", "Price a project footprint at the target shadow price");
  add_common(project, cfg, true, true);
  project->add_option("--footprint", cfg.footprint_path, "Footprint JSON file");
  project->add_option("--price-pp", cfg.inject_price_pp, "Use this shadow price per percentage point");
  project->add_option("--delta-pp", cfg.inject_delta_pp, "Use this index impact in percentage points");

  auto* sweep = app.add_subcommand("sweep-z", "Shadow price at the target for z low / central / high");
  add_common(sweep, cfg, true, true);

  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic scenario package");
  gen->add_option("--seed", cfg.seed, "Random seed");
  gen->add_option("--out", cfg.output_dir, "Package directory to write");
  gen->add_option("--rows", cfg.synthetic.rows, "Grid rows");
  gen->add_option("--cols", cfg.synthetic.cols, "Grid columns");
  gen->add_option("--species", cfg.synthetic.n_species, "Number of species");
  gen->add_option("--technologies", cfg.synthetic.n_technologies, "Number of technologies");
  gen->add_option("--range-density", cfg.synthetic.range_density, "Mean range share of the grid");
  gen->add_option("--suitability-density", cfg.synthetic.suitability_density, "Chance a natural class suits a species");
  gen->add_option("--cost-dist", cfg.cost_distribution, "lognormal or uniform");
  gen->add_option("--aggregation", cfg.synthetic.aggregation_factor, "Decision block size in cells");

  auto* val = app.add_subcommand("validate", "Validate a scenario package");
  val->add_option("--scenario", cfg.scenario_path, "Scenario package directory");
  val->add_flag("--json", cfg.json_output, "Print the report as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (cfg.threads) {
    if (*cfg.threads < 1) {
      err << "error: --threads must be positive\n";
      return kInputError;
    }
    omp_set_num_threads(*cfg.threads);
  }
  if (cfg.target && !(*cfg.target > 0.0 && *cfg.target <= 1.0)) {
    err << "error: --target must lie in (0, 1]\n";
    return kInputError;
  }

  Commands cmds(cfg, out, err);
  try {
    if (build->parsed()) return cmds.build_curve_cmd();
    if (quote->parsed()) return cmds.shadow_price_cmd();
    if (project->parsed()) return cmds.price_project_cmd();
    if (sweep->parsed()) return cmds.sweep_z_cmd();
    if (gen->parsed()) return cmds.gen_synthetic_cmd();
    if (val->parsed()) return cmds.validate_cmd();
  } catch (const Exit& e) {
    return e.code;
  } catch (const TargetUnreachable& e) {
    err << "error: " << e.what() << '\n';
    return kTargetUnreachable;
  } catch (const ConfigMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kConfigMismatch;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace mbrc::cli
