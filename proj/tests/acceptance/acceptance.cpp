// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "codevo/builtin_metrics.hpp"
#include "codevo/commit_sampler.hpp"
#include "codevo/report_exporter.hpp"
#include "fixtures.hpp"
#include "process.hpp"

using namespace codevo;
using codevo::testing::GitFixture;
using codevo::testing::TempDir;
namespace fs = std::filesystem;
namespace oracle = codevo::testing::oracle;

namespace {

using Clock = std::chrono::steady_clock;

struct Failure {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// --- sampling -------------------------------------------------------------

void sampling_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  const auto lo = std::chrono::sys_seconds(make_date(2010, 1, 1)).time_since_epoch().count();
  const auto hi = std::chrono::sys_seconds(make_date(2026, 1, 1)).time_since_epoch().count();
  std::uniform_int_distribution<long long> when(lo, hi - 1);
  std::uniform_int_distribution<int> offset_q(-48, 56);  // quarter hours
  std::uniform_int_distribution<int> size(50, 500);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::set<long long> seen;
    std::vector<CommitRef> commits;
    while (static_cast<int>(commits.size()) < n) {
      const long long t = when(rng);
      if (!seen.insert(t).second) continue;
      CommitRef c;
      c.hash = std::to_string(trial) + ":" + std::to_string(commits.size());
      c.committer_date = Timestamp{std::chrono::sys_seconds(std::chrono::seconds(t)),
                                   std::chrono::minutes(15 * offset_q(rng))};
      // author dates are deliberately unrelated
      c.author_date = Timestamp{std::chrono::sys_seconds(std::chrono::seconds(when(rng))), {}};
      commits.push_back(c);
    }
    std::sort(commits.begin(), commits.end(),
              [](const CommitRef& a, const CommitRef& b) { return a.committer_date < b.committer_date; });

    const DateUnit unit = trial % 2 ? DateUnit::Month : DateUnit::Year;
    const auto boundaries = boundary_dates(unit, {2010, 2025});

    std::vector<CommitSample> expected;
    for (const Date b : boundaries) {
      const CommitRef* best = nullptr;
      for (const auto& c : commits) {
        if (c.committer_date.utc <= end_of_day(b) && (!best || c.committer_date.utc > best->committer_date.utc)) {
          best = &c;
        }
      }
      if (best) expected.push_back({b, *best});
    }
    const auto got = sample(commits, boundaries);
    expect(got.size() == expected.size(), "trial " + std::to_string(trial) + ": sample count differs");
    for (std::size_t i = 0; i < got.size(); ++i) {
      expect(got[i].boundary == expected[i].boundary && got[i].commit.hash == expected[i].commit.hash,
             "trial " + std::to_string(trial) + ": mismatch at " + format_date(expected[i].boundary));
    }
  }
  const double elapsed = seconds_since(start);
  expect(elapsed < 5.0, "took " + std::to_string(elapsed) + " s");
}

void default_window_shape() {
  for (int year = 1990; year <= 2100; ++year) {
    for (const unsigned month : {1u, 6u, 12u}) {
      const Date today = make_date(year, month, month == 12 ? 31 : 1);
      const auto bounds = boundary_dates(DateUnit::Year, default_window(today));
      expect(bounds.size() == 5, "window size for " + format_date(today));
      expect(bounds.back() == make_date(year, 1, 1), "last boundary for " + format_date(today));
      expect(bounds.front() == make_date(year - 4, 1, 1), "first boundary for " + format_date(today));
    }
  }
}

// --- parsing --------------------------------------------------------------

void node_count_oracle() {
  const auto start = Clock::now();
  std::size_t snippets = 0;
  for (const Language l : kAllLanguages) {
    const auto& spec = language_spec(l);
    const auto types = builtin_node_types(l);
    std::map<std::string, std::size_t> covered;
    for (const auto& path : codevo::testing::corpus_files(to_string(l))) {
      const std::string content = codevo::testing::read_file(path);
      const FileBlob blob{path.filename().string(), path.filename().string(), content};
      const auto pc = parse_snapshot(std::span(&blob, 1), spec, CommitRef{}, make_date(2024, 1, 1));
      if (pc.files().empty()) continue;  // undecodable on purpose
      ++snippets;
      const auto expected = oracle::named_type_counts(spec.grammar_for(blob.path), content);
      for (const auto& type : types) {
        const auto it = expected.find(type);
        const std::size_t want = it == expected.end() ? 0 : it->second;
        expect(pc.count_nodes(type) == want, blob.path + ": " + type + " count differs");
        covered[type] += want;
      }
    }
    for (const auto& type : types) {
      expect(covered[type] > 0, std::string(to_string(l)) + " corpus never exercises " + type);
    }
  }
  expect(snippets >= 80, "only " + std::to_string(snippets) + " corpus snippets");
  const double elapsed = seconds_since(start);
  expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
}

void loc_oracle() {
  std::size_t files = 0;
  for (const Language l : kAllLanguages) {
    const auto& spec = language_spec(l);
    for (const auto& path : codevo::testing::corpus_files(to_string(l))) {
      const std::string content = codevo::testing::read_file(path);
      expect(count_loc(content) == oracle::non_blank_lines(content), path.string() + ": count_loc differs");
      const FileBlob blob{path.filename().string(), path.filename().string(), content};
      if (auto parsed = parse_file(blob, spec, nullptr)) {
        expect(parsed->loc() == oracle::non_blank_lines(content), path.string() + ": file loc differs");
      }
      ++files;
    }
  }
  expect(files >= 80, "corpus too small");
}

void functional_features() {
  const std::string source =
      "double = lambda x: x * 2\n"
      "add = lambda a, b: a + b\n"
      "\n"
      "def numbers():\n"
      "    yield 1\n"
      "\n"
      "squares = [n * n for n in range(4)]\n"
      "index = {k: v for k, v in enumerate('ab')}\n";
  const FileBlob blob{"f.py", "f.py", source};
  const auto& spec = language_spec(Language::Python);
  const auto pc = parse_snapshot(std::span(&blob, 1), spec, CommitRef{}, make_date(2024, 1, 1));
  const auto set = builtin_set(Language::Python);
  const MetricEvaluator* metric = nullptr;
  for (const auto& m : set.metrics) {
    if (m.def.name == "Functional features") metric = &m;
  }
  expect(metric != nullptr, "no Functional features metric");
  const auto counts = fold_categorical(std::get<std::vector<std::string>>(metric->eval(pc)));
  const std::map<std::string, std::size_t> hand{
      {"dictionary_comprehension", 1}, {"lambda", 2}, {"list_comprehension", 1}, {"yield", 1}};
  expect(counts == hand, "counts differ from the hand-computed ones");
  const auto walked = oracle::named_type_counts(spec.grammar_for("f.py"), source);
  for (const auto& [type, n] : hand) expect(walked.at(type) == n, "oracle disagrees on " + type);
}

// --- end to end -------------------------------------------------------------

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{CODEVO_CLI_PATH};
  argv.insert(argv.end(), args.begin(), args.end());
  const auto r = codevo::detail::run_process(argv);
  return {r.exit_code, r.out, r.err};
}

// Three years of backdated history with hand-computed expectations.
//   2022-01-01 -> first commit : loc 2, list 1, dictionary 1
//   2023-01-01 -> second commit: loc 5, list 3, dictionary 1, tuple 1
//   2024-01-01 -> third commit : loc 4, list 2, tuple 1
// The 2024-03 commit falls outside the window.
void build_history(const fs::path& root) {
  GitFixture repo(root);
  repo.write("a.py", "x = [1, 2]\n\ny = {'k': 1}\n");
  repo.commit("first", "2021-05-10T09:00:00Z");
  repo.write("lib/b.py", "t = (1, 2)\nz = [[1], 2]\n   # note\n\n");
  repo.write("README.md", "x = [1]\n");
  repo.commit("second", "2022-07-04T18:30:00+02:00");
  repo.write("a.py", "x = 1\n");
  repo.commit("third", "2023-12-31T20:00:00-05:00");
  repo.write("c.py", "q = [1]\n");
  repo.commit("late", "2024-03-01T00:00:00Z");
}

std::optional<double> csv_cell(const std::string& csv, const std::string& metric, const std::string& series,
                               const std::string& date) {
  std::istringstream in(csv);
  const std::string prefix = metric + "," + series + "," + date + ",";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) return std::stod(line.substr(prefix.size()));
  }
  return std::nullopt;
}

struct EndToEnd {
  TempDir tmp{"codevo-accept"};
  fs::path repo = tmp.path() / "history";
  EndToEnd() { build_history(repo); }

  fs::path analyze(const std::string& out_name) {
    const auto out = tmp.path() / out_name;
    const auto r = run_cli({"-r", "python", "--from", "2022", "--to", "2024", "-o", out.string(), repo.string()});
    expect(r.code == 0, "exit " + std::to_string(r.code) + ": " + r.err);
    return out;
  }
};

EndToEnd& e2e() {
  static EndToEnd fixture;
  return fixture;
}

void end_to_end() {
  const auto start = Clock::now();
  const auto out = e2e().analyze("run1");
  const std::string csv = codevo::testing::read_file(out / "history.csv");
  expect(fs::exists(out / "history.html"), "no html report");

  const std::vector<std::tuple<std::string, std::string, std::string, double>> hand{
      {"Lines of code", "Lines of code", "2022-01-01", 2},
      {"Lines of code", "Lines of code", "2023-01-01", 5},
      {"Lines of code", "Lines of code", "2024-01-01", 4},
      {"Data structures", "list", "2022-01-01", 1},
      {"Data structures", "list", "2023-01-01", 3},
      {"Data structures", "list", "2024-01-01", 2},
      {"Data structures", "dictionary", "2022-01-01", 1},
      {"Data structures", "dictionary", "2023-01-01", 1},
      {"Data structures", "dictionary", "2024-01-01", 0},
      {"Data structures", "tuple", "2022-01-01", 0},
      {"Data structures", "tuple", "2023-01-01", 1},
      {"Data structures", "tuple", "2024-01-01", 1},
  };
  for (const auto& [metric, series, date, value] : hand) {
    const auto cell = csv_cell(csv, metric, series, date);
    expect(cell.has_value(), "missing " + metric + "/" + series + "@" + date);
    expect(*cell == value, metric + "/" + series + "@" + date + " = " + std::to_string(*cell));
  }
  expect(!csv_cell(csv, "Data structures", "set", "2022-01-01"), "unexpected set series");
  const double elapsed = seconds_since(start);
  expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
}

nlohmann::json payload_of(const fs::path& html) {
  const auto payload = extract_payload(codevo::testing::read_file(html));
  expect(payload.has_value(), "no payload in " + html.string());
  return *payload;
}

void determinism() {
  const auto a = e2e().analyze("det-a");
  const auto b = e2e().analyze("det-b");
  expect(codevo::testing::read_file(a / "history.csv") == codevo::testing::read_file(b / "history.csv"),
         "CSV differs between runs");
  auto pa = payload_of(a / "history.html");
  auto pb = payload_of(b / "history.html");
  pa["metadata"].erase("generated_at");
  pb["metadata"].erase("generated_at");
  expect(pa == pb, "payload differs between runs");
}

void cross_serialization() {
  const auto out = e2e().analyze("cross");
  const auto table = from_payload(payload_of(out / "history.html"));
  expect(to_csv(table) == codevo::testing::read_file(out / "history.csv"), "payload CSV differs from report CSV");
}

void robustness() {
  TempDir tmp("codevo-robust");
  const auto coll = tmp.path() / "repos";
  build_history(coll / "valid");
  GitFixture corrupt(coll / "corrupt");
  corrupt.write("a.py", "x = 1\n");
  corrupt.commit("c", "2022-02-02T00:00:00Z");
  std::ofstream(coll / "corrupt" / ".git" / "HEAD", std::ios::trunc) << "not a ref\n";
  fs::create_directories(coll / "notes");
  std::ofstream(coll / "notes" / "todo.txt") << "nothing\n";

  const auto out = tmp.path() / "out";
  const auto r = run_cli({"-r", "python", "--from", "2022", "--to", "2024", "-o", out.string(), coll.string()});
  expect(r.code == 0, "exit " + std::to_string(r.code) + ": " + r.err);
  std::size_t reports = 0;
  for (const auto& entry : fs::directory_iterator(out)) reports += entry.is_regular_file();
  expect(reports == 2, std::to_string(reports) + " report files");
  expect(fs::exists(out / "valid.csv") && fs::exists(out / "valid.html"), "valid repo not reported");
  std::size_t warnings = 0;
  std::istringstream err(r.err);
  for (std::string line; std::getline(err, line);) warnings += line.rfind("warning: ", 0) == 0;
  expect(warnings == 2, std::to_string(warnings) + " warning lines:\n" + r.err);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"sampling matches brute-force oracle on 200 random histories", sampling_oracle},
      {"default window is five yearly boundaries ending this year", default_window_shape},
      {"node counts match an independent traversal on the corpus", node_count_oracle},
      {"lines of code match a line-scan oracle on the corpus", loc_oracle},
      {"end-to-end CLI run reproduces hand-computed cells", end_to_end},
      {"repeated runs are byte-identical", determinism},
      {"payload and CSV describe the same table", cross_serialization},
      {"broken entries are skipped with warnings", robustness},
      {"functional features counts match hand counts", functional_features},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      check();
      std::cout << "PASS  " << name << '\n';
    } catch (const Failure& f) {
      std::cout << "FAIL  " << name << ": " << f.why << '\n';
      ++failed;
    } catch (const std::exception& e) {
      std::cout << "FAIL  " << name << ": exception: " << e.what() << '\n';
      ++failed;
    }
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
