#include <litmap/error.hpp>
#include <litmap/pipeline.hpp>
#include <litmap/summarizer.hpp>
#include <litmap/text_util.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

namespace {

namespace pl = litmap::pipeline;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  bool force = false;
  std::string log_level = "info";
};

pl::RunConfig load_config(const GlobalOptions& g) {
  auto c = pl::RunConfig::load(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  if (g.out) c.out_dir = *g.out;
  return c;
}

void print_record(const pl::StageRecord& r) {
  std::cout << r.stage << ": " << (r.skipped ? "skipped" : "ran") << ", " << r.outputs.size()
            << " outputs\n";
}

int cmd_verify(const GlobalOptions& g) {
  const auto c = load_config(g);
  const auto manifest = pl::Manifest::load(c.out_dir / "manifest.json");
  if (manifest.stages.empty()) {
    std::cerr << "no manifest under " << c.out_dir << "\n";
    return 3;
  }
  const auto issues = pl::verify(manifest, c.out_dir);
  for (const auto& i : issues) std::cout << i.problem << ": " << i.path << "\n";
  std::size_t n = 0;
  for (const auto& [_, r] : manifest.stages) n += r.outputs.size();
  std::cout << (issues.empty() ? "ok" : "FAILED") << ": " << n << " outputs checked\n";
  return issues.empty() ? 0 : 3;
}

int cmd_ratings(const std::vector<std::string>& specs, const std::string& out) {
  std::vector<litmap::summarize::ModelEval> models;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw litmap::InvalidArgument("expected NAME=ratings.csv, got " + spec);
    }
    litmap::summarize::ModelEval m{spec.substr(0, eq), {}};
    for (const auto& [_, sheet] : litmap::summarize::load_ratings(spec.substr(eq + 1))) {
      m.rows.push_back(litmap::summarize::evaluate_sheet(sheet));
    }
    models.push_back(std::move(m));
  }
  const auto report = litmap::summarize::evaluation_report(models);
  std::cout << report;
  if (!out.empty()) litmap::text::write_file(out, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"litmap: bibliometric and topic analysis of a literature corpus"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  const auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", g.config, "Run configuration (TOML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", g.seed, "Override the configured seed");
    sub->add_option("-j,--jobs", g.jobs, "Cap on worker threads")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", g.out, "Override the output directory");
  };

  std::vector<std::pair<CLI::App*, pl::Stage>> stage_cmds;
  for (pl::Stage s : pl::all_stages()) {
    auto* sub = app.add_subcommand(std::string(pl::to_string(s)), "Run the " +
                                                                      std::string(pl::to_string(s)) +
                                                                      " stage");
    add_run_options(sub);
    sub->add_flag("-f,--force", g.force, "Run even when inputs are unchanged");
    stage_cmds.emplace_back(sub, s);
  }
  auto* all = app.add_subcommand("all", "Run every stage in order");
  add_run_options(all);
  all->add_flag("-f,--force", g.force, "Run even when inputs are unchanged");

  auto* verify = app.add_subcommand("verify", "Re-hash every output listed in the manifest");
  add_run_options(verify);

  std::vector<std::string> rating_specs;
  std::string ratings_out;
  auto* ratings = app.add_subcommand("ratings", "Comprehensiveness and kappa from rating sheets");
  ratings->add_option("models", rating_specs, "NAME=ratings.csv, one per model")->required();
  ratings->add_option("-o,--out", ratings_out, "Also write the report here");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("litmap"));
  spdlog::set_level(spdlog::level::from_str(g.log_level));

  try {
    if (*verify) return cmd_verify(g);
    if (*ratings) return cmd_ratings(rating_specs, ratings_out);
    pl::Runner runner(load_config(g), g.force);
    if (*all) {
      for (const auto& r : runner.run_all()) print_record(r);
      return 0;
    }
    for (const auto& [sub, stage] : stage_cmds) {
      if (*sub) print_record(runner.run(stage));
    }
    return 0;
  } catch (const litmap::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
