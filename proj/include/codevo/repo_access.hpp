#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "codevo/dates.hpp"

namespace codevo {

enum class RepoInputKind { RemoteUrl, LocalRepo, RepoCollection };

/// Raw user input naming what to analyze: a Git URL, a local repository, or a
/// directory whose immediate children are repositories.
struct RepoInput {
  std::string raw;
};

struct RepositoryHandle {
  std::string name;
  std::filesystem::path root_path;
  std::string default_branch;
};

struct CommitRef {
  std::string hash;
  Timestamp committer_date;
  Timestamp author_date;

  friend bool operator==(const CommitRef& a, const CommitRef& b) { return a.hash == b.hash; }
};

struct FileBlob {
  std::string path;  // repo-relative, '/' separated
  std::string name;
  std::string content;
};

/// A collection child that was not turned into a handle, with the reason.
struct SkippedSource {
  std::filesystem::path path;
  std::string reason;
};

struct SourceSet {
  std::vector<RepositoryHandle> repos;
  std::vector<SkippedSource> skipped;
};

struct ResolveOptions {
  /// Where remote clones live. Empty: $CODEVO_WORKSPACE, else ./.codevo-repos.
  std::filesystem::path workspace;
};

bool looks_like_url(std::string_view raw);

/// Classifies without touching the network. Throws PathMissing or
/// NotARepository for local paths that are neither a repo nor a collection.
RepoInputKind classify(const RepoInput& input);

/// Repository name implied by a clone URL ("https://x/y/flask.git" -> "flask").
std::string repo_name_from_url(std::string_view url);

SourceSet resolve_sources(const RepoInput& input, const ResolveOptions& options = {});

/// Renames duplicates to name-2, name-3, ... keeping the first occurrence.
void make_names_unique(std::vector<RepositoryHandle>& repos);

/// First-parent history of the default branch, ascending by committer date
/// (ties by hash).
std::vector<CommitRef> list_commits(const RepositoryHandle& handle);

/// Blobs of `commit` whose path ends with one of `extensions`, sorted by path.
/// Reads the object database only.
std::vector<FileBlob> read_snapshot(const RepositoryHandle& handle, const CommitRef& commit,
                                    const std::set<std::string>& extensions);

}  // namespace codevo
