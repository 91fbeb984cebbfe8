#pragma once

#include <tree_sitter/api.h>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace codevo::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view prefix = "codevo");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Builds throwaway repositories with backdated commits through the git CLI.
class GitFixture {
 public:
  explicit GitFixture(std::filesystem::path root, std::string branch = "main");

  const std::filesystem::path& root() const { return root_; }

  void write(const std::string& path, std::string_view content);
  void remove(const std::string& path);
  /// Commits everything staged or modified; `iso_date` sets author and
  /// committer dates. Returns the new commit hash.
  std::string commit(const std::string& message, const std::string& iso_date);
  void checkout(const std::string& branch, bool create = false);
  /// Non fast-forward merge of `branch` into the current branch.
  std::string merge(const std::string& branch, const std::string& iso_date);

  std::string git(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {});

 private:
  std::filesystem::path root_;
};

std::string read_file(const std::filesystem::path& path);
std::filesystem::path corpus_dir();
std::vector<std::filesystem::path> corpus_files(std::string_view language);

// Independent oracles. They parse and scan with their own code paths so they
// never share traversal logic with the library under test.
namespace oracle {

/// Count of named nodes per type, from a full recursive descent over every
/// child (named or not) of a fresh parse.
std::map<std::string, std::size_t> named_type_counts(const TSLanguage* grammar, std::string_view source);

/// Line spans (end - start + 1, same end-of-line convention as the library)
/// of all named nodes of `type`.
std::vector<int> spans_of(const TSLanguage* grammar, std::string_view source, std::string_view type);

/// Lines with at least one non-whitespace byte.
std::size_t non_blank_lines(std::string_view bytes);

}  // namespace oracle

}  // namespace codevo::testing
