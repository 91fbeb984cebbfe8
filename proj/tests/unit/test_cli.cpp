#include "doctest.h"

#include <fstream>
#include <sstream>

#include "codevo/cli.hpp"
#include "codevo/report_exporter.hpp"
#include "fixtures.hpp"
#include "process.hpp"

using namespace codevo;
using codevo::testing::GitFixture;
using codevo::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& argv) {
  std::ostringstream out, err;
  const int code = cli::main(argv, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines_starting(const std::string& text, std::string_view prefix) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

void make_python_repo(const fs::path& root) {
  GitFixture repo(root);
  repo.write("app.py", "items = [1, 2]\n");
  repo.commit("one", "2021-03-01T12:00:00Z");
  repo.write("more.py", "d = {'a': 1}\n\nt = (1, 2)\n");
  repo.commit("two", "2022-03-01T12:00:00Z");
}

}  // namespace

TEST_CASE("parse_args accepts a report type and repository") {
  const auto parsed = cli::parse_args({"-r", "python", "https://github.com/pallets/flask"});
  const auto* args = std::get_if<cli::CliArgs>(&parsed);
  REQUIRE(args);
  CHECK(args->report_type == Language::Python);
  CHECK(args->repo == "https://github.com/pallets/flask");
  CHECK_FALSE(args->monthly);
  CHECK_FALSE(args->from_year);
  CHECK(args->output == ".");

  const auto full = cli::parse_args({"--report", "typescript", "--monthly", "--from", "2019", "--to", "2020", "-o",
                                     "reports", "--csv-only", "-v", "-j", "3", "repos/"});
  const auto* f = std::get_if<cli::CliArgs>(&full);
  REQUIRE(f);
  CHECK(f->report_type == Language::TypeScript);
  CHECK(f->monthly);
  CHECK(f->from_year == 2019);
  CHECK(f->to_year == 2020);
  CHECK(f->output == "reports");
  CHECK(f->csv_only);
  CHECK(f->verbose);
  CHECK(f->jobs == 3);
}

TEST_CASE("parse_args usage errors exit with 2") {
  auto exit_of = [](const std::vector<std::string>& argv) {
    const auto parsed = cli::parse_args(argv);
    const auto* e = std::get_if<cli::CliExit>(&parsed);
    REQUIRE(e);
    return *e;
  };
  const auto ruby = exit_of({"-r", "ruby", "x"});
  CHECK(ruby.code == cli::kExitUsage);
  for (const char* l : {"python", "javascript", "typescript", "java"}) CHECK(ruby.message.find(l) != std::string::npos);

  const auto window = exit_of({"-r", "python", "--from", "2022", "--to", "2020", "x"});
  CHECK(window.code == cli::kExitUsage);
  CHECK(window.message.find("2022") != std::string::npos);

  CHECK(exit_of({"-r", "python", "--csv-only", "--html-only", "x"}).code == cli::kExitUsage);
  CHECK(exit_of({"-r", "python"}).code == cli::kExitUsage);
  CHECK(exit_of({"x"}).code == cli::kExitUsage);
  CHECK(exit_of({"-r", "python", "--from", "abc", "x"}).code == cli::kExitUsage);

  const auto help = exit_of({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.message.find("--monthly") != std::string::npos);
}

TEST_CASE("run on a single repository writes both reports") {
  TempDir tmp;
  make_python_repo(tmp.path() / "proj");
  const auto out_dir = tmp.path() / "out";
  const auto r = invoke({"-r", "python", "--from", "2021", "--to", "2023", "-o", out_dir.string(),
                         (tmp.path() / "proj").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(out_dir / "proj.csv"));
  CHECK(fs::exists(out_dir / "proj.html"));
  CHECK(count_lines_starting(r.out, out_dir.string()) == 2);
  CHECK(r.err.find("[proj] analyzed 2 boundaries") != std::string::npos);

  const auto html = codevo::testing::read_file(out_dir / "proj.html");
  const auto payload = extract_payload(html);
  REQUIRE(payload);
  const auto table = from_payload(*payload);
  // 2021-01-01 precedes the first commit, so the first sample is 2022
  CHECK(table.boundaries.front() == make_date(2022, 1, 1));
  CHECK(table.cell("Lines of code", "Lines of code", make_date(2023, 1, 1)) == 3);
  CHECK(codevo::testing::read_file(out_dir / "proj.csv") == to_csv(table));
}

TEST_CASE("csv-only and verbose") {
  TempDir tmp;
  make_python_repo(tmp.path() / "proj");
  const auto out_dir = tmp.path() / "out";
  const auto r = invoke({"-r", "python", "--csv-only", "-v", "--from", "2022", "--to", "2023", "-o",
                         out_dir.string(), (tmp.path() / "proj").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(out_dir / "proj.csv"));
  CHECK_FALSE(fs::exists(out_dir / "proj.html"));
  CHECK(r.err.find("[proj] 1/2 2022-01-01") != std::string::npos);
  CHECK(r.err.find("[proj] 2/2 2023-01-01") != std::string::npos);
}

TEST_CASE("a collection with a corrupt repository still reports the valid one") {
  TempDir tmp;
  const auto coll = tmp.path() / "repos";
  make_python_repo(coll / "good");
  GitFixture broken(coll / "broken");
  broken.write("a.py", "x = 1\n");
  broken.commit("c", "2021-05-01T00:00:00Z");
  std::ofstream(coll / "broken" / ".git" / "HEAD", std::ios::trunc) << "garbage\n";

  const auto out_dir = tmp.path() / "out";
  const auto r = invoke({"-r", "python", "--from", "2022", "--to", "2023", "-o", out_dir.string(), coll.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(out_dir / "good.csv"));
  CHECK(fs::exists(out_dir / "good.html"));
  CHECK_FALSE(fs::exists(out_dir / "index.html"));
  CHECK(count_lines_starting(r.err, "warning: ") == 1);
  CHECK(r.err.find("broken") != std::string::npos);
}

TEST_CASE("analysis failures exit with 1") {
  TempDir tmp;
  const auto missing = invoke({"-r", "python", (tmp.path() / "nope").string()});
  CHECK(missing.code == cli::kExitAnalysisFailure);
  CHECK(missing.err.find("PathMissing") != std::string::npos);

  GitFixture empty(tmp.path() / "empty");
  const auto e = invoke({"-r", "python", "-o", (tmp.path() / "out").string(), empty.root().string()});
  CHECK(e.code == cli::kExitAnalysisFailure);
  CHECK(e.err.find("EmptyRepository") != std::string::npos);
  CHECK(e.out.empty());
}

TEST_CASE("the installed binary follows the same exit contract") {
  using codevo::detail::run_process;
  const std::string cli_path = CODEVO_CLI_PATH;
  CHECK(run_process({cli_path, "--help"}).exit_code == 0);
  const auto bad = run_process({cli_path, "-r", "cobol", "x"});
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());

  TempDir tmp;
  make_python_repo(tmp.path() / "proj");
  const auto ok = run_process({cli_path, "-r", "python", "--from", "2022", "--to", "2022", "-o",
                               (tmp.path() / "out").string(), (tmp.path() / "proj").string()});
  CHECK(ok.exit_code == 0);
  CHECK(fs::exists(tmp.path() / "out" / "proj.html"));
}
