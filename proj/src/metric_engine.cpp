#include "codevo/metric_engine.hpp"

#include <algorithm>
#include <cmath>

#include "codevo/error.hpp"

namespace codevo {

std::string_view to_string(MetricKind kind) { return kind == MetricKind::Numeric ? "Numeric" : "Categorical"; }

std::optional<MetricKind> parse_metric_kind(std::string_view text) {
  if (text == "Numeric") return MetricKind::Numeric;
  if (text == "Categorical") return MetricKind::Categorical;
  return std::nullopt;
}

MetricRegistry& MetricRegistry::add(MetricDef def, MetricFn eval) {
  if (def.name.empty()) throw Error(ErrorCode::InvalidArgument, "metric name must not be empty");
  if (contains(def.name)) throw Error(ErrorCode::DuplicateMetricName, def.name);
  metrics_.push_back({std::move(def), std::move(eval)});
  return *this;
}

MetricRegistry& MetricRegistry::numeric(std::string name, std::function<double(const ParsedCommit&)> eval,
                                        std::optional<Aggregate> aggregate_hint) {
  MetricDef def{std::move(name), MetricKind::Numeric, aggregate_hint, true};
  return add(std::move(def), [fn = std::move(eval)](const ParsedCommit& pc) -> MetricValue { return fn(pc); });
}

MetricRegistry& MetricRegistry::categorical(std::string name,
                                            std::function<std::vector<std::string>(const ParsedCommit&)> eval) {
  MetricDef def{std::move(name), MetricKind::Categorical, std::nullopt, true};
  return add(std::move(def), [fn = std::move(eval)](const ParsedCommit& pc) -> MetricValue { return fn(pc); });
}

bool MetricRegistry::contains(std::string_view name) const {
  return std::any_of(metrics_.begin(), metrics_.end(), [&](const MetricEvaluator& m) { return m.def.name == name; });
}

std::map<std::string, std::size_t> fold_categorical(const std::vector<std::string>& labels) {
  std::map<std::string, std::size_t> counts;
  for (const auto& label : labels) ++counts[label];
  return counts;
}

const MetricColumn* EvolutionTable::find_metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::optional<double> EvolutionTable::cell(std::string_view metric, std::string_view series, Date boundary) const {
  const auto* column = find_metric(metric);
  if (column == nullptr) return std::nullopt;
  const auto at = std::find(boundaries.begin(), boundaries.end(), boundary);
  if (at == boundaries.end()) return std::nullopt;
  const auto index = static_cast<std::size_t>(at - boundaries.begin());
  for (const auto& s : column->series) {
    if (s.label == series) return s.values.at(index);
  }
  return std::nullopt;
}

TableBuilder::TableBuilder(std::string repo_name, DateUnit unit, const MetricRegistry& registry)
    : registry_(registry), pending_(registry.size()) {
  table_.repo_name = std::move(repo_name);
  table_.unit = unit;
}

void TableBuilder::add(const ParsedCommit& snapshot) {
  const std::size_t index = table_.boundaries.size();
  table_.boundaries.push_back(snapshot.boundary());

  std::size_t i = 0;
  for (const auto& metric : registry_) {
    Pending& slot = pending_[i++];
    MetricValue value;
    try {
      value = metric.eval(snapshot);
    } catch (const std::exception& e) {
      table_.metadata.metric_errors.push_back({metric.def.name, snapshot.boundary(), e.what()});
      continue;
    } catch (...) {
      table_.metadata.metric_errors.push_back({metric.def.name, snapshot.boundary(), "unknown exception"});
      continue;
    }

    if (metric.def.kind == MetricKind::Numeric) {
      const double* number = std::get_if<double>(&value);
      if (number == nullptr || !std::isfinite(*number)) {
        table_.metadata.metric_errors.push_back(
            {metric.def.name, snapshot.boundary(),
             number == nullptr ? "numeric metric returned labels" : "non-finite value"});
        continue;
      }
      slot.values[metric.def.name][index] = *number;
      continue;
    }

    const auto* labels = std::get_if<std::vector<std::string>>(&value);
    if (labels == nullptr) {
      table_.metadata.metric_errors.push_back(
          {metric.def.name, snapshot.boundary(), "categorical metric returned a number"});
      continue;
    }
    for (const auto& label : *labels) {
      auto& per_boundary = slot.values[label];
      if (per_boundary.empty()) slot.series_order.push_back(label);
      per_boundary[index] += 1.0;
    }
  }
}

EvolutionTable TableBuilder::finish() && {
  const std::size_t n = table_.boundaries.size();
  std::size_t i = 0;
  for (const auto& metric : registry_) {
    Pending& slot = pending_[i++];
    MetricColumn column{metric.def.name, metric.def.kind, metric.def.aggregate_hint, metric.def.show_version_chart, {}};
    auto fill = [&](const std::string& label) {
      Series s{label, std::vector<double>(n, 0.0)};
      for (const auto& [index, v] : slot.values[label]) s.values[index] = v;
      column.series.push_back(std::move(s));
    };
    if (metric.def.kind == MetricKind::Numeric) {
      fill(metric.def.name);
    } else {
      for (const auto& label : slot.series_order) fill(label);
    }

    const bool all_zero = std::all_of(column.series.begin(), column.series.end(), [](const Series& s) {
      return std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; });
    });
    if (all_zero) table_.metadata.always_zero_metrics.push_back(column.name);
    table_.metrics.push_back(std::move(column));
  }
  return std::move(table_);
}

SamplingWindow effective_window(const AnalysisConfig& config) {
  if (config.window) return *config.window;
  return default_window(config.today.value_or(today_utc()));
}

EvolutionTable evaluate(const AnalysisConfig& config, const MetricRegistry& registry, const RepositoryHandle& handle,
                        const ProgressFn& progress) {
  if (registry.empty()) throw Error(ErrorCode::InvalidArgument, "no metrics registered");
  const LanguageSpec& spec = language_spec(config.language);
  const SamplingWindow window = effective_window(config);

  const auto commits = list_commits(handle);
  const auto boundaries = boundary_dates(config.date_unit, window);
  const auto samples = sample(commits, boundaries);

  TableBuilder builder(handle.name, config.date_unit, registry);
  auto& meta = builder.metadata();
  meta.language = std::string(to_string(config.language));
  meta.window = window;
  meta.grammars.push_back({spec.grammar_name, spec.grammar_version});

  // Quiet periods repeat a commit; its trees are shared rather than re-parsed.
  std::optional<ParsedCommit> previous;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const CommitSample& s = samples[k];
    std::optional<ParsedCommit> snapshot;
    if (previous && previous->hash() == s.commit.hash) {
      snapshot.emplace(s.commit, s.boundary, previous->files(), previous->skipped());
    } else {
      const auto blobs = read_snapshot(handle, s.commit, spec.file_extensions);
      snapshot.emplace(parse_snapshot(blobs, spec, s.commit, s.boundary));
    }

    meta.samples.push_back(
        {s.boundary, s.commit.hash, format_timestamp(s.commit.committer_date), snapshot->files().size()});
    for (const auto& skip : snapshot->skipped()) {
      meta.skipped_files.push_back(
          {s.boundary, s.commit.hash, skip.path, std::string(to_string(skip.reason)), skip.detail});
    }
    builder.add(*snapshot);
    previous = std::move(snapshot);
    if (progress) progress(k + 1, samples.size(), s);
  }
  return std::move(builder).finish();
}

}  // namespace codevo
