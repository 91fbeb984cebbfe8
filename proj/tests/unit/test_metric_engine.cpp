#include "doctest.h"

#include <random>
#include <stdexcept>
#include <unordered_map>

#include "codevo/error.hpp"
#include "codevo/metric_engine.hpp"
#include "fixtures.hpp"

using namespace codevo;
using codevo::testing::GitFixture;
using codevo::testing::TempDir;

namespace {

ParsedCommit snapshot(Date boundary, const std::vector<std::pair<std::string, std::string>>& sources) {
  std::vector<FileBlob> blobs;
  for (const auto& [path, content] : sources) blobs.push_back({path, path, content});
  return parse_snapshot(blobs, language_spec(Language::Python), CommitRef{std::string(40, 'a'), {}, {}}, boundary);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected codevo::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("registration keeps order and rejects duplicates") {
  MetricRegistry registry;
  registry.numeric("Lines of code", [](const ParsedCommit& pc) { return static_cast<double>(pc.loc()); });
  CHECK(registry.size() == 1);
  registry.categorical("Data structures",
                       [](const ParsedCommit& pc) { return pc.find_node_types({"dictionary", "list", "set", "tuple"}); });
  CHECK(registry.size() == 2);
  CHECK(registry.metrics()[0].def.name == "Lines of code");
  CHECK(registry.metrics()[1].def.kind == MetricKind::Categorical);

  CHECK(code_of([&] { registry.numeric("Lines of code", [](const ParsedCommit&) { return 0.0; }); }) ==
        ErrorCode::DuplicateMetricName);
  CHECK(code_of([&] { registry.numeric("", [](const ParsedCommit&) { return 0.0; }); }) == ErrorCode::InvalidArgument);
  CHECK(registry.size() == 2);
}

TEST_CASE("fold_categorical counts a multiset") {
  const auto counts = fold_categorical({"list", "dictionary", "list"});
  CHECK(counts == std::map<std::string, std::size_t>{{"dictionary", 1}, {"list", 2}});
  CHECK(fold_categorical({}).empty());

  std::mt19937 rng(7);
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> naive;
  for (int i = 0; i < 10000; ++i) {
    labels.push_back("label" + std::to_string(rng() % 37));
    naive[labels.back()] += 1;
  }
  const auto folded = fold_categorical(labels);
  CHECK(folded.size() == naive.size());
  for (const auto& [label, n] : naive) CHECK(folded.at(label) == n);
}

TEST_CASE("categorical series are the union of labels with zero fill") {
  MetricRegistry registry;
  registry.categorical("Data structures",
                       [](const ParsedCommit& pc) { return pc.find_node_types({"dictionary", "list", "set", "tuple"}); });
  registry.numeric("Lines of code", [](const ParsedCommit& pc) { return static_cast<double>(pc.loc()); });

  TableBuilder builder("repo", DateUnit::Year, registry);
  const Date b1 = make_date(2021, 1, 1), b2 = make_date(2022, 1, 1), b3 = make_date(2023, 1, 1);
  builder.add(snapshot(b1, {{"a.py", "x = [1]\n"}}));
  builder.add(snapshot(b2, {{"a.py", "x = {}\ny = [1, [2]]\n"}}));
  builder.add(snapshot(b3, {{"a.py", "t = (1, 2)\n"}}));
  const auto table = std::move(builder).finish();

  CHECK(table.boundaries == std::vector<Date>{b1, b2, b3});
  REQUIRE(table.metrics.size() == 2);
  const auto& ds = table.metrics[0];
  REQUIRE(ds.series.size() == 3);
  // first-observation order
  CHECK(ds.series[0].label == "list");
  CHECK(ds.series[1].label == "dictionary");
  CHECK(ds.series[2].label == "tuple");
  CHECK(ds.series[0].values == std::vector<double>{1, 2, 0});
  CHECK(ds.series[1].values == std::vector<double>{0, 1, 0});
  CHECK(ds.series[2].values == std::vector<double>{0, 0, 1});

  const auto& loc = table.metrics[1];
  REQUIRE(loc.series.size() == 1);
  CHECK(loc.series[0].label == "Lines of code");
  CHECK(loc.series[0].values == std::vector<double>{1, 2, 1});
  CHECK(table.cell("Lines of code", "Lines of code", b2) == 2);
  CHECK_FALSE(table.cell("Lines of code", "Lines of code", make_date(1999, 1, 1)));
  CHECK_FALSE(table.cell("nope", "x", b1));
}

TEST_CASE("per-boundary series totals equal the labels emitted") {
  MetricRegistry registry;
  std::vector<std::size_t> emitted;
  registry.categorical("Everything", [&](const ParsedCommit& pc) {
    auto labels = pc.find_node_types({"identifier", "integer", "list", "call"});
    emitted.push_back(labels.size());
    return labels;
  });
  TableBuilder builder("repo", DateUnit::Month, registry);
  builder.add(snapshot(make_date(2021, 1, 1), {{"a.py", "x = [1, 2]\nprint(x)\n"}}));
  builder.add(snapshot(make_date(2021, 2, 1), {{"a.py", "y = 3\n"}}));
  const auto table = std::move(builder).finish();
  for (std::size_t b = 0; b < table.boundaries.size(); ++b) {
    double total = 0;
    for (const auto& s : table.metrics[0].series) total += s.values[b];
    CHECK(total == static_cast<double>(emitted[b]));
  }
}

TEST_CASE("a failing evaluator records zero and an error without touching other cells") {
  MetricRegistry registry;
  registry.numeric("Fragile", [](const ParsedCommit& pc) -> double {
    if (pc.boundary() == make_date(2022, 1, 1)) throw std::runtime_error("boom");
    return 7;
  });
  registry.numeric("Files", [](const ParsedCommit& pc) { return static_cast<double>(pc.files().size()); });
  registry.numeric("NaN", [](const ParsedCommit&) { return std::nan(""); });

  TableBuilder builder("repo", DateUnit::Year, registry);
  builder.add(snapshot(make_date(2021, 1, 1), {{"a.py", "a = 1\n"}}));
  builder.add(snapshot(make_date(2022, 1, 1), {{"a.py", "a = 1\n"}, {"b.py", "b = 1\n"}}));
  builder.add(snapshot(make_date(2023, 1, 1), {{"a.py", "a = 1\n"}}));
  const auto table = std::move(builder).finish();

  CHECK(table.metrics[0].series[0].values == std::vector<double>{7, 0, 7});
  CHECK(table.metrics[1].series[0].values == std::vector<double>{1, 2, 1});
  CHECK(table.metrics[2].series[0].values == std::vector<double>{0, 0, 0});
  REQUIRE(table.metadata.metric_errors.size() == 4);
  // recorded boundary by boundary, registration order within one
  const auto& fragile = table.metadata.metric_errors[1];
  CHECK(table.metadata.metric_errors[0].metric == "NaN");
  CHECK(fragile.metric == "Fragile");
  CHECK(fragile.boundary == make_date(2022, 1, 1));
  CHECK(fragile.message == "boom");
  CHECK(table.metadata.always_zero_metrics == std::vector<std::string>{"NaN"});
}

TEST_CASE("an always-empty categorical metric has no series but stays listed") {
  MetricRegistry registry;
  registry.categorical("Nothing", [](const ParsedCommit&) { return std::vector<std::string>{}; });
  TableBuilder builder("repo", DateUnit::Year, registry);
  builder.add(snapshot(make_date(2021, 1, 1), {{"a.py", "a = 1\n"}}));
  const auto table = std::move(builder).finish();
  REQUIRE(table.metrics.size() == 1);
  CHECK(table.metrics[0].name == "Nothing");
  CHECK(table.metrics[0].series.empty());
  CHECK(table.metadata.always_zero_metrics == std::vector<std::string>{"Nothing"});
}

TEST_CASE("evaluate walks a repository's sampled history") {
  TempDir tmp;
  GitFixture repo(tmp.path() / "proj");
  repo.write("a.py", "x = 1\n");
  repo.commit("2019", "2019-06-01T10:00:00Z");
  repo.write("b.py", "def f():\n\n    return [1]\n");
  repo.commit("2020", "2020-06-01T10:00:00Z");
  repo.write("c.py", "c = 1\nd = 2\n");
  repo.write("bad.py", "s = '\xff'\n");
  repo.commit("2021", "2021-06-01T10:00:00Z");

  MetricRegistry registry;
  registry.numeric("Lines of code", [](const ParsedCommit& pc) { return static_cast<double>(pc.loc()); });
  registry.categorical("Lists", [](const ParsedCommit& pc) { return pc.find_node_types({"list"}); });

  AnalysisConfig config;
  config.language = Language::Python;
  config.window = SamplingWindow{2020, 2022};
  const RepositoryHandle handle{"proj", repo.root(), "main"};

  std::vector<std::size_t> progress;
  const auto table = evaluate(config, registry, handle,
                              [&](std::size_t done, std::size_t total, const CommitSample&) {
                                progress.push_back(done);
                                CHECK(total == 3);
                              });
  CHECK(progress == std::vector<std::size_t>{1, 2, 3});
  CHECK(table.repo_name == "proj");
  CHECK(table.boundaries == boundary_dates(DateUnit::Year, {2020, 2022}));
  // a.py=1; +b.py=2; +c.py=2 (bad.py skipped)
  CHECK(table.metrics[0].series[0].values == std::vector<double>{1, 3, 5});
  CHECK(table.metrics[1].series[0].values == std::vector<double>{0, 1, 1});

  const auto& meta = table.metadata;
  CHECK(meta.language == "python");
  CHECK(meta.window == SamplingWindow{2020, 2022});
  REQUIRE(meta.grammars.size() == 1);
  CHECK(meta.grammars[0].name == "tree-sitter-python");
  REQUIRE(meta.samples.size() == 3);
  CHECK(meta.samples[0].files == 1);
  REQUIRE(meta.skipped_files.size() == 1);
  CHECK(meta.skipped_files[0].path == "bad.py");
  CHECK(meta.skipped_files[0].reason == "DecodeFailure");
  CHECK(meta.skipped_files[0].boundary == make_date(2022, 1, 1));

  CHECK(evaluate(config, registry, handle) == table);
}

TEST_CASE("evaluate uses the five-year default window") {
  TempDir tmp;
  GitFixture repo(tmp.path() / "proj");
  repo.write("a.py", "x = 1\n");
  repo.commit("old", "2010-06-01T10:00:00Z");

  MetricRegistry registry;
  registry.numeric("Files", [](const ParsedCommit& pc) { return static_cast<double>(pc.files().size()); });
  AnalysisConfig config;
  config.today = make_date(2025, 6, 15);
  const auto table = evaluate(config, registry, RepositoryHandle{"proj", repo.root(), "main"});
  CHECK(table.boundaries == boundary_dates(DateUnit::Year, {2021, 2025}));
  CHECK(table.metadata.window == SamplingWindow{2021, 2025});
  // same commit carried across the quiet period
  for (const auto& s : table.metadata.samples) CHECK(s.commit == table.metadata.samples[0].commit);
}

TEST_CASE("evaluate propagates repository errors") {
  TempDir tmp;
  MetricRegistry registry;
  registry.numeric("Files", [](const ParsedCommit& pc) { return static_cast<double>(pc.files().size()); });
  AnalysisConfig config;
  config.window = SamplingWindow{2020, 2021};

  GitFixture empty(tmp.path() / "empty");
  CHECK(code_of([&] { evaluate(config, registry, RepositoryHandle{"empty", empty.root(), "main"}); }) ==
        ErrorCode::EmptyRepository);

  GitFixture recent(tmp.path() / "recent");
  recent.commit("c", "2023-05-01T00:00:00Z");
  CHECK(code_of([&] { evaluate(config, registry, RepositoryHandle{"recent", recent.root(), "main"}); }) ==
        ErrorCode::NoSamples);

  CHECK(code_of([&] { evaluate(config, MetricRegistry{}, RepositoryHandle{"recent", recent.root(), "main"}); }) ==
        ErrorCode::InvalidArgument);
}
