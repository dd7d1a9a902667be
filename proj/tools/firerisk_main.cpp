// firerisk: command-line front end of the department fire-risk pipeline.
//
// Output root precedence: --out flag, then $FIRERISK_OUT, then paths.out in
// the config file. --seed, --jobs and the stage flags (--k, --target, ...)
// likewise override the matching config keys.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "firerisk/config.hpp"
#include "firerisk/csv.hpp"
#include "firerisk/cube_io.hpp"
#include "firerisk/error.hpp"
#include "firerisk/indices.hpp"
#include "firerisk/log.hpp"
#include "firerisk/pipeline.hpp"
#include "firerisk/synth.hpp"

namespace fs = std::filesystem;
using namespace firerisk;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
  bool verbose = false;
  bool quiet = false;
};

struct StageArgs {
  std::string config;
  bool force = false;
};

PipelineConfig load_config(const Globals& g, const std::string& path) {
  PipelineConfig c = PipelineConfig::load(path);
  if (!g.out.empty()) {
    c.paths.out = fs::absolute(g.out);
  } else if (const char* env = std::getenv("FIRERISK_OUT"); env && *env) {
    c.paths.out = fs::absolute(env);
  }
  if (g.seed) c.seed = *g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  return c;
}

void print_stage_summary(const std::vector<StageReport>& reports) {
  for (const auto& r : reports) {
    std::cout << r.name << ": " << (r.ran ? "ran" : "cached") << '\n';
  }
}

void print_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::cout << in.rdbuf();
}

void print_sweep(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  const auto j = nlohmann::json::parse(in);
  for (const auto& [target, models] : j.items()) {
    for (const auto& [model, s] : models.items()) {
      std::cout << target << ' ' << model << ": best " << s.at("best_percent").get<int>() << "% of class 0\n";
      for (const auto& p : s.at("points")) {
        std::cout << "  " << p.at("percent").get<int>() << "%  val_iou " << format_number(p.at("val_iou").get<double>())
                  << "  n_train " << p.at("n_train").get<std::size_t>() << '\n';
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Department-level daily wildfire risk: datacubes, indices, ordinal labels, baselines and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "firerisk 0.1.0");

  Globals g;
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--jobs", g.jobs, "Worker threads across departments (overrides the config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output root (overrides $FIRERISK_OUT and the config)");
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");
  app.add_flag("-q,--quiet", g.quiet, "Warnings and errors only");

  // synth
  std::string synth_dir;
  SynthConfig synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic region and a matching config.json");
  synth_cmd->add_option("dir", synth_dir, "Destination directory")->required();
  synth_cmd->add_option("--departments", synth.n_departments, "Number of departments")->capture_default_str();
  synth_cmd->add_option("--years", synth.n_years, "Number of years (>= 2)")->capture_default_str();
  synth_cmd->add_option("--start-year", synth.start_year, "First calendar year")->capture_default_str();
  synth_cmd->add_option("--nx", synth.n_x, "Grid columns per department")->capture_default_str();
  synth_cmd->add_option("--ny", synth.n_y, "Grid rows per department")->capture_default_str();

  // Config-driven stages. Each runs the pipeline up to and including its stage.
  struct StageCommand {
    const char* name;
    const char* stage;
    const char* help;
  };
  const std::vector<StageCommand> stage_commands = {
      {"ingest", "ingest", "Build and store department datacubes"},
      {"compute-indices", "indices", "Append fire-danger and precipitation features"},
      {"label", "labeling", "Fit ordinal models and write labels.csv"},
      {"cluster", "clustering", "Cluster departments by DTW on fire histories"},
      {"encode", "encoding", "Aggregate cubes and add target encodings (features_raw.csv)"},
      {"select", "selection", "Drop correlated features and standardize (features.csv)"},
      {"export-windows", "windows", "Export trailing feature windows for sequence models"},
      {"train", "baselines", "Fit baselines and write test predictions"},
      {"sweep", "baselines", "Run the undersampling sweep and print validation IoU per grid point"},
      {"report", "evaluation", "Score all baseline predictions and print report.csv"},
      {"run", "", "Run every stage"},
  };
  std::map<std::string, StageArgs> stage_args;
  std::map<std::string, CLI::App*> stage_apps;
  std::map<std::string, CLI::Option*> config_opts;
  for (const auto& sc : stage_commands) {
    auto* cmd = app.add_subcommand(sc.name, sc.help);
    auto& a = stage_args[sc.name];
    config_opts[sc.name] = cmd->add_option("-c,--config", a.config, "Pipeline config (JSON)")->check(CLI::ExistingFile);
    cmd->add_flag("--force", a.force, "Ignore cached stage results");
    stage_apps[sc.name] = cmd;
  }
  for (const auto& sc : stage_commands) {
    if (std::string(sc.name) != "compute-indices") config_opts[sc.name]->required();
  }

  // Stage-specific overrides of config keys.
  auto* indices_cmd = stage_apps.at("compute-indices");
  std::string cube_in, cube_out, season_start;
  std::optional<double> rain_threshold;
  auto* cube_opt = indices_cmd->add_option("--cube", cube_in, "Standalone mode: input cube directory")
                       ->check(CLI::ExistingDirectory)
                       ->excludes(config_opts.at("compute-indices"));
  indices_cmd->add_option("--out", cube_out, "Standalone mode: output cube directory")->needs(cube_opt);
  indices_cmd->add_option("--season-start", season_start, "Annual reset day, MM-DD");
  indices_cmd->add_option("--rain-threshold", rain_threshold, "Rain day threshold in mm");

  auto* label_cmd = stage_apps.at("label");
  std::vector<std::string> label_targets;
  std::vector<int> label_train_years;
  std::string label_out;
  label_cmd->add_option("--target", label_targets, "Targets to label (fo, ba)")
      ->check(CLI::IsMember({"fo", "ba"}));
  label_cmd->add_option("--train-years", label_train_years, "Training years (override the config)");
  label_cmd->add_option("-o,--out", label_out, "Also copy labels.csv here");

  auto* cluster_cmd = stage_apps.at("cluster");
  std::optional<std::size_t> cluster_k;
  std::string cluster_out;
  cluster_cmd->add_option("--k", cluster_k, "Number of clusters")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("-o,--out", cluster_out, "Also copy clusters.csv here");

  // evaluate
  std::vector<std::string> pred_files;
  std::string eval_config, eval_labels, eval_dir, eval_split = "test";
  auto* eval_cmd = app.add_subcommand("evaluate", "Score external prediction files against labels");
  eval_cmd->add_option("predictions", pred_files, "Prediction CSV files")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-c,--config", eval_config, "Pipeline config providing the split years")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--labels", eval_labels, "labels.csv (default: <out>/labels.csv)");
  eval_cmd->add_option("--report-dir", eval_dir, "Where reports go (default: <out>/external)");
  eval_cmd->add_option("--split", eval_split, "Split to score")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (g.verbose) log::set_min_level(log::Level::Debug);
  if (g.quiet) log::set_min_level(log::Level::Warn);

  try {
    if (*synth_cmd) {
      if (g.seed) synth.seed = *g.seed;
      const fs::path dir = fs::absolute(synth_dir);
      write_synthetic_region(generate_synthetic_region(synth), dir);
      PipelineConfig c = synthetic_pipeline_config(dir, synth.start_year, synth.n_years, dir / "out");
      if (g.seed) c.seed = *g.seed;
      c.save(dir / "config.json");
      std::cout << "wrote " << synth.n_departments << " departments x " << synth.n_years << " years to "
                << dir.string() << '\n';
      return 0;
    }
    if (*eval_cmd) {
      const PipelineConfig c = load_config(g, eval_config);
      const fs::path labels = eval_labels.empty() ? c.paths.out / "labels.csv" : fs::path(eval_labels);
      const fs::path dir = eval_dir.empty() ? c.paths.out / "external" : fs::path(eval_dir);
      std::vector<fs::path> files(pred_files.begin(), pred_files.end());
      const auto reports = evaluate_external(files, labels, c.split(), dir, split_from_string(eval_split));
      print_file(dir / "report.csv");
      log::info("wrote " + std::to_string(reports.size()) + " reports to " + dir.string());
      return 0;
    }
    if (*indices_cmd && !cube_in.empty()) {
      if (cube_out.empty()) throw ValidationError("--cube needs --out");
      IndexOptions opt;
      if (!season_start.empty()) opt.season_start = MonthDay::parse(season_start);
      if (rain_threshold) opt.rain_threshold_mm = *rain_threshold;
      store_cube(compute_indices(load_cube(cube_in), opt), cube_out);
      std::cout << "wrote " << cube_out << '\n';
      return 0;
    }
    for (const auto& sc : stage_commands) {
      if (!*stage_apps.at(sc.name)) continue;
      const auto& a = stage_args.at(sc.name);
      if (a.config.empty()) throw ValidationError(std::string(sc.name) + " needs --config (or --cube and --out)");
      PipelineConfig c = load_config(g, a.config);
      if (!season_start.empty()) c.season_start = MonthDay::parse(season_start);
      if (rain_threshold) c.rain_threshold_mm = *rain_threshold;
      if (!label_targets.empty()) {
        c.targets.clear();
        for (const auto& t : label_targets) c.targets.push_back(target_from_string(t));
      }
      if (!label_train_years.empty()) c.train_years = {label_train_years.begin(), label_train_years.end()};
      if (cluster_k) c.cluster_k = *cluster_k;
      PipelineOptions opt;
      opt.stop_after = sc.stage;
      opt.force = a.force;
      const auto reports = run_pipeline(c, opt);
      const std::string name = sc.name;
      if (name == "sweep") {
        print_sweep(c.paths.out / "sweep.json");
      } else if (name == "report" || name == "run") {
        print_file(c.paths.out / "report.csv");
      } else {
        print_stage_summary(reports);
      }
      if (!label_out.empty()) fs::copy_file(c.paths.out / "labels.csv", label_out, fs::copy_options::overwrite_existing);
      if (!cluster_out.empty()) {
        fs::copy_file(c.paths.out / "clusters.csv", cluster_out, fs::copy_options::overwrite_existing);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
