#include "codevo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "codevo/builtin_metrics.hpp"
#include "codevo/error.hpp"
#include "codevo/metric_engine.hpp"
#include "codevo/report_exporter.hpp"

namespace fs = std::filesystem;

namespace codevo::cli {

namespace {

// Whole-line writes so parallel repos do not interleave mid-line.
class LineLog {
 public:
  explicit LineLog(std::ostream& os) : os_(os) {}
  void line(const std::string& text) {
    std::lock_guard lock(mu_);
    os_ << text << '\n' << std::flush;
  }

 private:
  std::ostream& os_;
  std::mutex mu_;
};

std::string utc_now_iso() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return format_timestamp(Timestamp{now, std::chrono::minutes{0}});
}

std::string read_asset(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read chart asset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::variant<CliArgs, CliExit> parse_args(const std::vector<std::string>& argv) {
  CliArgs args;
  std::string report;

  CLI::App app{"Sample a Git repository's history and chart how its code evolves.", "codevo"};
  std::vector<std::string> languages;
  for (const Language l : kAllLanguages) languages.emplace_back(to_string(l));

  app.add_option("-r,--report", report, "Language to analyze")->required()->check(CLI::IsMember(languages));
  app.add_option("repo", args.repo, "Git URL, local repository, or directory of repositories")->required();
  app.add_flag("--monthly", args.monthly, "Sample the first day of every month instead of every year");
  app.add_option("--from", args.from_year, "First year to sample")->check(CLI::Range(1000, 9999));
  app.add_option("--to", args.to_year, "Last year to sample")->check(CLI::Range(1000, 9999));
  app.add_option("-o,--output", args.output, "Directory for the reports")->capture_default_str();
  auto* csv = app.add_flag("--csv-only", args.csv_only, "Write only the CSV report");
  auto* html = app.add_flag("--html-only", args.html_only, "Write only the HTML report");
  csv->excludes(html);
  html->excludes(csv);
  app.add_flag("-v,--verbose", args.verbose, "Print every sampled boundary");
  app.add_option("-j,--jobs", args.jobs, "Repositories analyzed in parallel (0 = all cores)");
  app.add_option("--chart-asset", args.chart_asset, "JavaScript chart renderer to embed instead of the built-in one");
  app.add_option("--workspace", args.workspace, "Clone directory for remote repositories (env: CODEVO_WORKSPACE)");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return CliExit{kExitOk, app.help()};
  } catch (const CLI::ParseError& e) {
    return CliExit{kExitUsage, std::string(e.what()) + "\nRun with --help for more information."};
  }

  args.report_type = *parse_language(report);
  if (args.from_year && args.to_year && *args.from_year > *args.to_year) {
    return CliExit{kExitUsage, "--from " + std::to_string(*args.from_year) + " is after --to " +
                                   std::to_string(*args.to_year)};
  }
  return args;
}

int run(const CliArgs& args, std::ostream& out, std::ostream& err) {
  LineLog log_out(out);
  LineLog log_err(err);

  SourceSet sources;
  try {
    ResolveOptions options;
    if (args.workspace) options.workspace = *args.workspace;
    sources = resolve_sources(RepoInput{args.repo}, options);
  } catch (const Error& e) {
    log_err.line(std::string("error: ") + e.what());
    return kExitAnalysisFailure;
  }
  for (const auto& skipped : sources.skipped) {
    log_err.line("warning: skipping " + skipped.path.string() + ": " + skipped.reason);
  }

  std::string asset;
  try {
    asset = args.chart_asset ? read_asset(*args.chart_asset) : std::string(default_chart_asset());
  } catch (const Error& e) {
    log_err.line(std::string("error: ") + e.what());
    return kExitAnalysisFailure;
  }

  AnalysisConfig config;
  config.repo_input = RepoInput{args.repo};
  config.language = args.report_type;
  config.date_unit = args.monthly ? DateUnit::Month : DateUnit::Year;
  config.output_dir = args.output;
  if (args.from_year || args.to_year) {
    const int to = args.to_year.value_or(year_of(today_utc()));
    const int from = args.from_year.value_or(to - 4);
    if (from > to) {
      log_err.line("error: --from " + std::to_string(from) + " is after --to " + std::to_string(to));
      return kExitUsage;
    }
    config.window = SamplingWindow{from, to};
  }

  const auto& repos = sources.repos;
  std::vector<std::optional<EvolutionTable>> results(repos.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < repos.size(); i = next++) {
      const auto& repo = repos[i];
      const BuiltinSet builtins = builtin_set(config.language);
      try {
        auto table = evaluate(config, builtins.metrics, repo,
                              [&](std::size_t done, std::size_t total, const CommitSample& s) {
                                if (!args.verbose) return;
                                log_err.line("[" + repo.name + "] " + std::to_string(done) + "/" +
                                             std::to_string(total) + " " + format_date(s.boundary) + " " +
                                             s.commit.hash.substr(0, 10));
                              });
        log_err.line("[" + repo.name + "] analyzed " + std::to_string(table.boundaries.size()) + " boundaries");
        results[i] = std::move(table);
      } catch (const std::exception& e) {
        log_err.line("warning: skipping " + repo.name + ": " + e.what());
      }
    }
  };

  unsigned jobs = args.jobs != 0 ? args.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, repos.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<EvolutionTable> tables;
  const std::string generated_at = utc_now_iso();
  for (auto& r : results) {
    if (!r) continue;
    r->metadata.generated_at = generated_at;
    tables.push_back(std::move(*r));
  }
  if (tables.empty()) {
    log_err.line("error: no repository could be analyzed");
    return kExitAnalysisFailure;
  }

  try {
    const ReportFormats formats{!args.html_only, !args.csv_only};
    for (const auto& path : write_reports(tables, args.output, formats, asset)) log_out.line(path.string());
  } catch (const Error& e) {
    log_err.line(std::string("error: ") + e.what());
    return kExitAnalysisFailure;
  }
  return kExitOk;
}

int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argv);
  if (auto* exit = std::get_if<CliExit>(&parsed)) {
    (exit->code == kExitOk ? out : err) << exit->message << '\n';
    return exit->code;
  }
  try {
    return run(std::get<CliArgs>(parsed), out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysisFailure;
  }
}

}  // namespace codevo::cli
