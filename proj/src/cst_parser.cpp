#include "codevo/cst_parser.hpp"

#include <algorithm>
#include <numeric>

#include "codevo/error.hpp"

extern "C" {
const TSLanguage* tree_sitter_python(void);
const TSLanguage* tree_sitter_javascript(void);
const TSLanguage* tree_sitter_typescript(void);
const TSLanguage* tree_sitter_tsx(void);
const TSLanguage* tree_sitter_java(void);
}

namespace codevo {

namespace detail {

struct SourceTree {
  std::string source;
  TSTree* tree = nullptr;

  SourceTree(std::string src, TSTree* t) : source(std::move(src)), tree(t) {}
  ~SourceTree() {
    if (tree != nullptr) ts_tree_delete(tree);
  }
  SourceTree(const SourceTree&) = delete;
  SourceTree& operator=(const SourceTree&) = delete;
};

}  // namespace detail

namespace {

struct ParserDeleter {
  void operator()(TSParser* p) const { ts_parser_delete(p); }
};
using ParserPtr = std::unique_ptr<TSParser, ParserDeleter>;

template <typename Visitor>
void walk_named(TSNode root, Visitor&& visit) {
  TSTreeCursor cursor = ts_tree_cursor_new(root);
  for (;;) {
    const TSNode node = ts_tree_cursor_current_node(&cursor);
    if (ts_node_is_named(node)) visit(node);
    if (ts_tree_cursor_goto_first_child(&cursor)) continue;
    bool advanced = false;
    while (!advanced) {
      if (ts_tree_cursor_goto_next_sibling(&cursor)) {
        advanced = true;
      } else if (!ts_tree_cursor_goto_parent(&cursor)) {
        ts_tree_cursor_delete(&cursor);
        return;
      }
    }
  }
}

bool contains(std::span<const std::string> names, std::string_view type) {
  return std::find(names.begin(), names.end(), type) != names.end();
}

std::vector<std::string> to_strings(std::initializer_list<std::string_view> names) {
  return {names.begin(), names.end()};
}

}  // namespace

std::string_view to_string(Language language) {
  switch (language) {
    case Language::Python: return "python";
    case Language::JavaScript: return "javascript";
    case Language::TypeScript: return "typescript";
    case Language::Java: return "java";
  }
  return "unknown";
}

std::optional<Language> parse_language(std::string_view name) {
  for (const Language l : kAllLanguages) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

const TSLanguage* LanguageSpec::grammar_for(std::string_view path) const {
  switch (id) {
    case Language::Python: return tree_sitter_python();
    case Language::JavaScript: return tree_sitter_javascript();
    case Language::TypeScript: return path.ends_with(".tsx") ? tree_sitter_tsx() : tree_sitter_typescript();
    case Language::Java: return tree_sitter_java();
  }
  return nullptr;
}

const LanguageSpec& language_spec(Language language) {
  static const std::array<LanguageSpec, 4> registry{{
      {Language::Python, {".py"}, "tree-sitter-python", CODEVO_TS_PYTHON_VERSION},
      {Language::JavaScript, {".js", ".mjs", ".cjs"}, "tree-sitter-javascript", CODEVO_TS_JAVASCRIPT_VERSION},
      {Language::TypeScript, {".ts", ".tsx"}, "tree-sitter-typescript", CODEVO_TS_TYPESCRIPT_VERSION},
      {Language::Java, {".java"}, "tree-sitter-java", CODEVO_TS_JAVA_VERSION},
  }};
  for (const auto& spec : registry) {
    if (spec.id == language) return spec;
  }
  throw Error(ErrorCode::UnsupportedLanguage, std::string(to_string(language)));
}

std::size_t count_loc(std::string_view source) {
  std::size_t loc = 0;
  bool content = false;
  for (const char c : source) {
    if (c == '\n') {
      loc += content ? 1 : 0;
      content = false;
    } else if (c != ' ' && c != '\t' && c != '\r' && c != '\v' && c != '\f') {
      content = true;
    }
  }
  return loc + (content ? 1 : 0);
}

std::string_view to_string(Aggregate aggregate) {
  switch (aggregate) {
    case Aggregate::Median: return "median";
    case Aggregate::Mean: return "mean";
    case Aggregate::Sum: return "sum";
  }
  return "unknown";
}

double aggregate(std::vector<double> values, Aggregate how) {
  if (values.empty()) return 0.0;
  switch (how) {
    case Aggregate::Sum: return std::accumulate(values.begin(), values.end(), 0.0);
    case Aggregate::Mean:
      return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    case Aggregate::Median: {
      std::sort(values.begin(), values.end());
      const std::size_t mid = values.size() / 2;
      return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    }
  }
  return 0.0;
}

std::string_view to_string(SkipReason reason) {
  return reason == SkipReason::DecodeFailure ? "DecodeFailure" : "GrammarFailure";
}

// CstNode

std::string_view CstNode::type() const { return ts_node_type(node_); }
bool CstNode::is_named() const { return ts_node_is_named(node_); }
bool CstNode::has_error() const { return ts_node_has_error(node_); }

std::optional<CstNode> CstNode::parent() const {
  const TSNode p = ts_node_parent(node_);
  if (ts_node_is_null(p)) return std::nullopt;
  return CstNode{p, tree_};
}

std::vector<CstNode> CstNode::children() const {
  std::vector<CstNode> out;
  const uint32_t n = ts_node_named_child_count(node_);
  out.reserve(n);
  for (uint32_t i = 0; i < n; ++i) out.emplace_back(ts_node_named_child(node_, i), tree_);
  return out;
}

std::vector<CstNode> CstNode::all_children() const {
  std::vector<CstNode> out;
  const uint32_t n = ts_node_child_count(node_);
  out.reserve(n);
  for (uint32_t i = 0; i < n; ++i) out.emplace_back(ts_node_child(node_, i), tree_);
  return out;
}

std::optional<CstNode> CstNode::child_by_field(std::string_view field) const {
  const TSNode c = ts_node_child_by_field_name(node_, field.data(), static_cast<uint32_t>(field.size()));
  if (ts_node_is_null(c)) return std::nullopt;
  return CstNode{c, tree_};
}

int CstNode::start_line() const { return static_cast<int>(ts_node_start_point(node_).row) + 1; }

int CstNode::end_line() const {
  const TSPoint start = ts_node_start_point(node_);
  const TSPoint end = ts_node_end_point(node_);
  if (end.column == 0 && end.row > start.row) return static_cast<int>(end.row);
  return static_cast<int>(end.row) + 1;
}

std::string_view CstNode::text() const {
  const std::string_view src = tree_->source;
  const uint32_t begin = std::min<uint32_t>(ts_node_start_byte(node_), static_cast<uint32_t>(src.size()));
  const uint32_t end = std::min<uint32_t>(ts_node_end_byte(node_), static_cast<uint32_t>(src.size()));
  return src.substr(begin, end - begin);
}

// ParsedFile

ParsedFile::ParsedFile(std::string path, std::shared_ptr<const detail::SourceTree> tree)
    : path_(std::move(path)), tree_(std::move(tree)) {
  const auto slash = path_.find_last_of('/');
  name_ = slash == std::string::npos ? path_ : path_.substr(slash + 1);
  loc_ = count_loc(tree_->source);
}

std::string_view ParsedFile::source() const { return tree_->source; }

CstNode ParsedFile::root() const { return CstNode{ts_tree_root_node(tree_->tree), tree_.get()}; }

void ParsedFile::visit(const std::function<void(const CstNode&)>& visitor) const {
  const auto* tree = tree_.get();
  walk_named(ts_tree_root_node(tree->tree), [&](TSNode n) { visitor(CstNode{n, tree}); });
}

// ParsedCommit

ParsedCommit::ParsedCommit(CommitRef commit, Date boundary, std::vector<ParsedFile> files,
                           std::vector<FileSkip> skipped)
    : commit_(std::move(commit)), boundary_(boundary), files_(std::move(files)), skipped_(std::move(skipped)) {
  std::stable_sort(files_.begin(), files_.end(),
                   [](const ParsedFile& a, const ParsedFile& b) { return a.path() < b.path(); });
  for (const auto& f : files_) loc_ += f.loc();
}

void ParsedCommit::visit(const std::function<void(const CstNode&)>& visitor) const {
  for (const auto& f : files_) f.visit(visitor);
}

std::vector<std::string> ParsedCommit::find_node_types(std::span<const std::string> type_names) const {
  std::vector<std::string> labels;
  visit([&](const CstNode& n) {
    const auto type = n.type();
    if (contains(type_names, type)) labels.emplace_back(type);
  });
  return labels;
}

std::vector<std::string> ParsedCommit::find_node_types(std::initializer_list<std::string_view> type_names) const {
  return find_node_types(to_strings(type_names));
}

std::size_t ParsedCommit::count_nodes(std::span<const std::string> type_names) const {
  std::size_t count = 0;
  visit([&](const CstNode& n) { count += contains(type_names, n.type()) ? 1 : 0; });
  return count;
}

std::size_t ParsedCommit::count_nodes(std::initializer_list<std::string_view> type_names) const {
  return count_nodes(to_strings(type_names));
}

std::size_t ParsedCommit::count_nodes(std::string_view type_name) const { return count_nodes({type_name}); }

double ParsedCommit::loc_by_type(std::string_view type_name, Aggregate how) const {
  std::vector<double> spans;
  visit([&](const CstNode& n) {
    if (n.type() == type_name) spans.push_back(static_cast<double>(n.line_span()));
  });
  return aggregate(std::move(spans), how);
}

std::vector<CstNode> ParsedCommit::nodes_matching(const std::function<bool(const CstNode&)>& predicate) const {
  std::vector<CstNode> out;
  visit([&](const CstNode& n) {
    if (predicate(n)) out.push_back(n);
  });
  return out;
}

// Parsing

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong, surrogate, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::optional<ParsedFile> parse_file(const FileBlob& blob, const LanguageSpec& spec, FileSkip* skip) {
  auto fail = [&](SkipReason reason, std::string detail) -> std::optional<ParsedFile> {
    if (skip != nullptr) *skip = FileSkip{blob.path, reason, std::move(detail)};
    return std::nullopt;
  };
  if (!is_valid_utf8(blob.content)) return fail(SkipReason::DecodeFailure, "invalid UTF-8");

  ParserPtr parser{ts_parser_new()};
  if (!ts_parser_set_language(parser.get(), spec.grammar_for(blob.path))) {
    return fail(SkipReason::GrammarFailure, "incompatible grammar " + spec.grammar_name);
  }
  auto source = blob.content;
  TSTree* tree =
      ts_parser_parse_string(parser.get(), nullptr, source.data(), static_cast<uint32_t>(source.size()));
  if (tree == nullptr) return fail(SkipReason::GrammarFailure, "parser returned no tree");
  return ParsedFile{blob.path, std::make_shared<const detail::SourceTree>(std::move(source), tree)};
}

ParsedCommit parse_snapshot(std::span<const FileBlob> blobs, const LanguageSpec& spec, const CommitRef& commit,
                            Date boundary) {
  std::vector<ParsedFile> files;
  std::vector<FileSkip> skipped;
  files.reserve(blobs.size());
  for (const auto& blob : blobs) {
    const bool supported = std::any_of(spec.file_extensions.begin(), spec.file_extensions.end(),
                                       [&](const std::string& ext) { return blob.path.ends_with(ext); });
    if (!supported) {
      throw Error(ErrorCode::InvalidArgument, blob.path + " is not a " + std::string(to_string(spec.id)) + " file");
    }
    FileSkip skip;
    if (auto parsed = parse_file(blob, spec, &skip)) {
      files.push_back(std::move(*parsed));
    } else {
      skipped.push_back(std::move(skip));
    }
  }
  return ParsedCommit{commit, boundary, std::move(files), std::move(skipped)};
}

}  // namespace codevo
