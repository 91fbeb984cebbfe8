#pragma once

#include <tree_sitter/api.h>

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codevo/dates.hpp"
#include "codevo/repo_access.hpp"

namespace codevo {

enum class Language { Python, JavaScript, TypeScript, Java };

inline constexpr std::array<Language, 4> kAllLanguages{Language::Python, Language::JavaScript,
                                                       Language::TypeScript, Language::Java};

std::string_view to_string(Language language);
std::optional<Language> parse_language(std::string_view name);

/// Grammar registry entry. TypeScript carries two grammars: `.tsx` files are
/// parsed with the TSX dialect.
struct LanguageSpec {
  Language id;
  std::set<std::string> file_extensions;
  std::string grammar_name;
  std::string grammar_version;

  const TSLanguage* grammar_for(std::string_view path) const;
};

const LanguageSpec& language_spec(Language language);

/// Lines holding at least one non-whitespace character.
std::size_t count_loc(std::string_view source);

enum class Aggregate { Median, Mean, Sum };

std::string_view to_string(Aggregate aggregate);
double aggregate(std::vector<double> values, Aggregate how);

namespace detail {
struct SourceTree;
}

/// Non-owning view of one syntax-tree node. Valid while the ParsedFile (or a
/// copy of it) that produced it is alive.
class CstNode {
 public:
  CstNode(TSNode node, const detail::SourceTree* tree) : node_(node), tree_(tree) {}

  std::string_view type() const;
  bool is_named() const;
  bool has_error() const;

  std::optional<CstNode> parent() const;
  /// Named children, in source order.
  std::vector<CstNode> children() const;
  /// Every child including anonymous tokens (keywords, punctuation).
  std::vector<CstNode> all_children() const;
  std::optional<CstNode> child_by_field(std::string_view field) const;

  /// 1-based, inclusive. A node ending at column 0 of a later row ends on the
  /// row before it.
  int start_line() const;
  int end_line() const;
  int line_span() const { return end_line() - start_line() + 1; }

  std::string_view text() const;

  TSNode raw() const { return node_; }

 private:
  TSNode node_;
  const detail::SourceTree* tree_;
};

class ParsedFile {
 public:
  ParsedFile(std::string path, std::shared_ptr<const detail::SourceTree> tree);

  const std::string& name() const { return name_; }
  const std::string& path() const { return path_; }
  std::size_t loc() const { return loc_; }
  std::string_view source() const;
  CstNode root() const;

  /// Pre-order walk over named nodes.
  void visit(const std::function<void(const CstNode&)>& visitor) const;

 private:
  std::string name_;
  std::string path_;
  std::size_t loc_ = 0;
  std::shared_ptr<const detail::SourceTree> tree_;
};

enum class SkipReason { DecodeFailure, GrammarFailure };

std::string_view to_string(SkipReason reason);

struct FileSkip {
  std::string path;
  SkipReason reason;
  std::string detail;
};

/// One parsed snapshot. Immutable once built; safe to read concurrently.
class ParsedCommit {
 public:
  ParsedCommit(CommitRef commit, Date boundary, std::vector<ParsedFile> files, std::vector<FileSkip> skipped = {});

  const CommitRef& commit() const { return commit_; }
  const std::string& hash() const { return commit_.hash; }
  Date boundary() const { return boundary_; }
  const std::vector<ParsedFile>& files() const { return files_; }
  const std::vector<FileSkip>& skipped() const { return skipped_; }
  std::size_t loc() const { return loc_; }

  /// One label per named node whose type is listed, in file order then
  /// pre-order. Unknown types simply match nothing.
  std::vector<std::string> find_node_types(std::span<const std::string> type_names) const;
  std::vector<std::string> find_node_types(std::initializer_list<std::string_view> type_names) const;

  std::size_t count_nodes(std::span<const std::string> type_names) const;
  std::size_t count_nodes(std::initializer_list<std::string_view> type_names) const;
  std::size_t count_nodes(std::string_view type_name) const;

  /// Aggregate of line spans of every `type_name` node; 0 when none match.
  double loc_by_type(std::string_view type_name, Aggregate how = Aggregate::Median) const;

  std::vector<CstNode> nodes_matching(const std::function<bool(const CstNode&)>& predicate) const;

  /// Pre-order walk over named nodes of every file.
  void visit(const std::function<void(const CstNode&)>& visitor) const;

 private:
  CommitRef commit_;
  Date boundary_;
  std::vector<ParsedFile> files_;
  std::vector<FileSkip> skipped_;
  std::size_t loc_ = 0;
};

bool is_valid_utf8(std::string_view bytes);

/// Parses one blob. Returns nullopt and fills `skip` when the file cannot be
/// decoded or the grammar gives up; syntax errors still yield a tree.
std::optional<ParsedFile> parse_file(const FileBlob& blob, const LanguageSpec& spec, FileSkip* skip = nullptr);

ParsedCommit parse_snapshot(std::span<const FileBlob> blobs, const LanguageSpec& spec, const CommitRef& commit,
                            Date boundary);

}  // namespace codevo
