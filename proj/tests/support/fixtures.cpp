#include "fixtures.hpp"

#include <stdlib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "process.hpp"

namespace fs = std::filesystem;

namespace codevo::testing {

TempDir::TempDir(std::string_view prefix) {
  std::string pattern = (fs::temp_directory_path() / (std::string(prefix) + "-XXXXXX")).string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

GitFixture::GitFixture(fs::path root, std::string branch) : root_(std::move(root)) {
  fs::create_directories(root_);
  git({"init", "--quiet", "--initial-branch=" + branch});
}

std::string GitFixture::git(const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
  std::vector<std::string> argv{"env"};
  for (const auto& [k, v] : env) argv.push_back(k + "=" + v);
  argv.insert(argv.end(), {"git", "-c", "user.name=Fixture", "-c", "user.email=fixture@example.com", "-c",
                           "commit.gpgsign=false", "-C", root_.string()});
  argv.insert(argv.end(), args.begin(), args.end());
  auto result = detail::run_process(argv);
  if (!result.ok()) throw std::runtime_error("git failed: " + result.err);
  return result.out;
}

void GitFixture::write(const std::string& path, std::string_view content) {
  const fs::path full = root_ / path;
  fs::create_directories(full.parent_path());
  std::ofstream out(full, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

void GitFixture::remove(const std::string& path) { git({"rm", "--quiet", path}); }

std::string GitFixture::commit(const std::string& message, const std::string& iso_date) {
  git({"add", "--all"});
  git({"commit", "--quiet", "--allow-empty", "-m", message},
      {{"GIT_AUTHOR_DATE", iso_date}, {"GIT_COMMITTER_DATE", iso_date}});
  auto hash = git({"rev-parse", "HEAD"});
  hash.pop_back();
  return hash;
}

void GitFixture::checkout(const std::string& branch, bool create) {
  if (create) {
    git({"checkout", "--quiet", "-b", branch});
  } else {
    git({"checkout", "--quiet", branch});
  }
}

std::string GitFixture::merge(const std::string& branch, const std::string& iso_date) {
  git({"merge", "--quiet", "--no-ff", "-m", "merge " + branch, branch},
      {{"GIT_AUTHOR_DATE", iso_date}, {"GIT_COMMITTER_DATE", iso_date}});
  auto hash = git({"rev-parse", "HEAD"});
  hash.pop_back();
  return hash;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path corpus_dir() { return fs::path(CODEVO_FIXTURE_DIR) / "corpus"; }

std::vector<fs::path> corpus_files(std::string_view language) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir() / language)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace oracle {

namespace {

struct Parsed {
  TSParser* parser = nullptr;
  TSTree* tree = nullptr;
  Parsed(const TSLanguage* grammar, std::string_view source) {
    parser = ts_parser_new();
    ts_parser_set_language(parser, grammar);
    tree = ts_parser_parse_string(parser, nullptr, source.data(), static_cast<uint32_t>(source.size()));
  }
  ~Parsed() {
    ts_tree_delete(tree);
    ts_parser_delete(parser);
  }
};

void descend(TSNode node, const std::function<void(TSNode)>& fn) {
  fn(node);
  const uint32_t n = ts_node_child_count(node);
  for (uint32_t i = 0; i < n; ++i) descend(ts_node_child(node, i), fn);
}

}  // namespace

std::map<std::string, std::size_t> named_type_counts(const TSLanguage* grammar, std::string_view source) {
  Parsed parsed(grammar, source);
  std::map<std::string, std::size_t> counts;
  descend(ts_tree_root_node(parsed.tree), [&](TSNode n) {
    if (ts_node_is_named(n)) ++counts[ts_node_type(n)];
  });
  return counts;
}

std::vector<int> spans_of(const TSLanguage* grammar, std::string_view source, std::string_view type) {
  Parsed parsed(grammar, source);
  std::vector<int> spans;
  descend(ts_tree_root_node(parsed.tree), [&](TSNode n) {
    if (!ts_node_is_named(n) || type != ts_node_type(n)) return;
    const TSPoint s = ts_node_start_point(n);
    const TSPoint e = ts_node_end_point(n);
    const int last = (e.column == 0 && e.row > s.row) ? static_cast<int>(e.row) - 1 : static_cast<int>(e.row);
    spans.push_back(last - static_cast<int>(s.row) + 1);
  });
  return spans;
}

std::size_t non_blank_lines(std::string_view bytes) {
  std::size_t count = 0;
  std::istringstream in{std::string(bytes)};
  std::string line;
  while (std::getline(in, line)) {
    bool content = false;
    for (const unsigned char c : line) content = content || !std::isspace(c);
    if (content) ++count;
  }
  return count;
}

}  // namespace oracle

}  // namespace codevo::testing
