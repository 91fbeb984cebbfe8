#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "codevo/commit_sampler.hpp"
#include "codevo/cst_parser.hpp"
#include "codevo/repo_access.hpp"

namespace codevo {

enum class MetricKind { Numeric, Categorical };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric_kind(std::string_view text);

struct MetricDef {
  std::string name;
  MetricKind kind = MetricKind::Numeric;
  std::optional<Aggregate> aggregate_hint;
  bool show_version_chart = true;
};

/// A number for numeric metrics, occurrence labels for categorical ones.
using MetricValue = std::variant<double, std::vector<std::string>>;
using MetricFn = std::function<MetricValue(const ParsedCommit&)>;

struct MetricEvaluator {
  MetricDef def;
  MetricFn eval;
};

/// Ordered set of metrics; registration order is chart order.
class MetricRegistry {
 public:
  /// Throws DuplicateMetricName, or InvalidArgument for an empty name.
  MetricRegistry& add(MetricDef def, MetricFn eval);

  MetricRegistry& numeric(std::string name, std::function<double(const ParsedCommit&)> eval,
                          std::optional<Aggregate> aggregate_hint = std::nullopt);
  MetricRegistry& categorical(std::string name, std::function<std::vector<std::string>(const ParsedCommit&)> eval);

  bool contains(std::string_view name) const;
  std::size_t size() const { return metrics_.size(); }
  bool empty() const { return metrics_.empty(); }
  const std::vector<MetricEvaluator>& metrics() const { return metrics_; }
  auto begin() const { return metrics_.begin(); }
  auto end() const { return metrics_.end(); }

 private:
  std::vector<MetricEvaluator> metrics_;
};

std::map<std::string, std::size_t> fold_categorical(const std::vector<std::string>& labels);

struct Series {
  std::string label;
  std::vector<double> values;  // one per table boundary

  friend bool operator==(const Series&, const Series&) = default;
};

struct MetricColumn {
  std::string name;
  MetricKind kind = MetricKind::Numeric;
  std::optional<Aggregate> aggregate_hint;
  bool show_version_chart = true;
  std::vector<Series> series;

  friend bool operator==(const MetricColumn&, const MetricColumn&) = default;
};

struct GrammarInfo {
  std::string name;
  std::string version;
  friend bool operator==(const GrammarInfo&, const GrammarInfo&) = default;
};

struct SampleInfo {
  Date boundary;
  std::string commit;
  std::string committer_date;  // ISO-8601
  std::size_t files = 0;
  friend bool operator==(const SampleInfo&, const SampleInfo&) = default;
};

struct SkippedFileInfo {
  Date boundary;
  std::string commit;
  std::string path;
  std::string reason;
  std::string detail;
  friend bool operator==(const SkippedFileInfo&, const SkippedFileInfo&) = default;
};

struct MetricErrorInfo {
  std::string metric;
  Date boundary;
  std::string message;
  friend bool operator==(const MetricErrorInfo&, const MetricErrorInfo&) = default;
};

struct TableMetadata {
  std::string language;
  std::optional<SamplingWindow> window;
  std::vector<GrammarInfo> grammars;
  std::vector<SampleInfo> samples;
  std::vector<SkippedFileInfo> skipped_files;
  std::vector<MetricErrorInfo> metric_errors;
  std::vector<std::string> always_zero_metrics;
  std::string generated_at;  // excluded from determinism comparisons

  friend bool operator==(const TableMetadata&, const TableMetadata&) = default;
};

/// Rectangular (metric, series, boundary) -> value grid.
struct EvolutionTable {
  std::string repo_name;
  DateUnit unit = DateUnit::Year;
  std::vector<Date> boundaries;
  std::vector<MetricColumn> metrics;
  TableMetadata metadata;

  const MetricColumn* find_metric(std::string_view name) const;
  /// nullopt when the metric, series or boundary is absent.
  std::optional<double> cell(std::string_view metric, std::string_view series, Date boundary) const;

  friend bool operator==(const EvolutionTable&, const EvolutionTable&) = default;
};

/// Incrementally folds evaluated snapshots into an EvolutionTable. Evaluators
/// run in registration order; an evaluator that throws (or returns a
/// non-finite number) contributes 0 for that boundary and is logged.
class TableBuilder {
 public:
  TableBuilder(std::string repo_name, DateUnit unit, const MetricRegistry& registry);

  void add(const ParsedCommit& snapshot);
  EvolutionTable finish() &&;

  TableMetadata& metadata() { return table_.metadata; }

 private:
  struct Pending {
    std::vector<std::string> series_order;
    std::map<std::string, std::map<std::size_t, double>> values;  // label -> boundary index -> value
  };

  const MetricRegistry& registry_;
  EvolutionTable table_;
  std::vector<Pending> pending_;
};

struct AnalysisConfig {
  RepoInput repo_input;
  Language language = Language::Python;
  DateUnit date_unit = DateUnit::Year;
  std::optional<SamplingWindow> window;  // default: last five years
  std::filesystem::path output_dir = ".";
  std::optional<Date> today;             // pins the default window; defaults to the current UTC day
};

SamplingWindow effective_window(const AnalysisConfig& config);

using ProgressFn = std::function<void(std::size_t done, std::size_t total, const CommitSample& sample)>;

/// Samples the handle's history, parses each sample once, and runs every
/// evaluator on it. Throws EmptyRepository / NoSamples.
EvolutionTable evaluate(const AnalysisConfig& config, const MetricRegistry& registry, const RepositoryHandle& handle,
                        const ProgressFn& progress = {});

}  // namespace codevo
