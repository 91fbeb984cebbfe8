#include "codevo/repo_access.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "codevo/error.hpp"
#include "process.hpp"

namespace fs = std::filesystem;

namespace codevo {

namespace {

detail::ProcessResult git(const fs::path& root, std::vector<std::string> args, const std::string& input = {}) {
  std::vector<std::string> argv{"env", "GIT_TERMINAL_PROMPT=0", "git", "-c", "safe.directory=*"};
  if (!root.empty()) {
    argv.push_back("-C");
    argv.push_back(root.string());
  }
  argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
  return detail::run_process(argv, {}, input);
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

bool has_git_metadata(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir / ".git", ec)) return true;
  // bare repository
  return fs::is_regular_file(dir / "HEAD", ec) && fs::is_directory(dir / "objects", ec) &&
         fs::is_directory(dir / "refs", ec);
}

std::string dir_name(const fs::path& p) {
  auto name = p.filename().string();
  if (name.empty() || name == "." || name == "..") name = fs::weakly_canonical(p).filename().string();
  return name;
}

RepositoryHandle open_local(const fs::path& path) {
  auto probe = git(path, {"rev-parse", "--git-dir"});
  if (!probe.ok()) throw Error(ErrorCode::NotARepository, path.string() + ": " + trim(probe.err));
  auto branch = git(path, {"symbolic-ref", "--quiet", "--short", "HEAD"});
  std::string name = dir_name(path);
  if (name.size() > 4 && name.ends_with(".git")) name.resize(name.size() - 4);
  return RepositoryHandle{name, fs::absolute(path).lexically_normal(), branch.ok() ? trim(branch.out) : "HEAD"};
}

fs::path workspace_dir(const ResolveOptions& options) {
  if (!options.workspace.empty()) return options.workspace;
  if (const char* env = std::getenv("CODEVO_WORKSPACE"); env != nullptr && *env != '\0') return env;
  return fs::current_path() / ".codevo-repos";
}

RepositoryHandle clone_remote(const std::string& url, const ResolveOptions& options) {
  const fs::path workspace = workspace_dir(options);
  std::error_code ec;
  fs::create_directories(workspace, ec);
  if (ec) throw Error(ErrorCode::CloneFailed, "cannot create workspace " + workspace.string() + ": " + ec.message());

  const std::string name = repo_name_from_url(url);
  const fs::path target = workspace / (name + ".git");
  if (has_git_metadata(target)) {
    auto fetch = git(target, {"fetch", "--quiet", "--prune", "origin", "+refs/heads/*:refs/heads/*"});
    if (!fetch.ok()) throw Error(ErrorCode::CloneFailed, url + ": " + trim(fetch.err));
  } else {
    auto clone = git({}, {"clone", "--bare", "--quiet", url, target.string()});
    if (!clone.ok()) throw Error(ErrorCode::CloneFailed, url + ": " + trim(clone.err));
  }
  auto handle = open_local(target);
  handle.name = name;
  return handle;
}

bool ext_matches(std::string_view path, const std::set<std::string>& extensions) {
  return std::any_of(extensions.begin(), extensions.end(),
                     [&](const std::string& ext) { return path.ends_with(ext); });
}

}  // namespace

bool looks_like_url(std::string_view raw) {
  for (std::string_view scheme : {"http://", "https://", "ssh://", "git://", "file://"}) {
    if (raw.starts_with(scheme)) return true;
  }
  // scp-like syntax: user@host:path
  const auto at = raw.find('@');
  const auto colon = raw.find(':');
  return at != std::string_view::npos && colon != std::string_view::npos && at < colon &&
         raw.find('/') > colon;
}

std::string repo_name_from_url(std::string_view url) {
  while (!url.empty() && url.back() == '/') url.remove_suffix(1);
  if (url.ends_with(".git")) url.remove_suffix(4);
  const auto cut = url.find_last_of("/:");
  std::string name(cut == std::string_view::npos ? url : url.substr(cut + 1));
  return name.empty() ? "repo" : name;
}

RepoInputKind classify(const RepoInput& input) {
  if (input.raw.empty()) throw Error(ErrorCode::InvalidArgument, "empty repository input");
  if (looks_like_url(input.raw)) return RepoInputKind::RemoteUrl;
  const fs::path path{input.raw};
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::PathMissing, input.raw);
  if (!fs::is_directory(path, ec)) throw Error(ErrorCode::NotARepository, input.raw + " is not a directory");
  if (has_git_metadata(path)) return RepoInputKind::LocalRepo;
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (entry.is_directory(ec) && has_git_metadata(entry.path())) return RepoInputKind::RepoCollection;
  }
  throw Error(ErrorCode::NotARepository, input.raw + " has no Git metadata and no repository children");
}

SourceSet resolve_sources(const RepoInput& input, const ResolveOptions& options) {
  SourceSet result;
  switch (classify(input)) {
    case RepoInputKind::RemoteUrl:
      result.repos.push_back(clone_remote(input.raw, options));
      break;
    case RepoInputKind::LocalRepo:
      result.repos.push_back(open_local(input.raw));
      break;
    case RepoInputKind::RepoCollection: {
      std::vector<fs::path> children;
      std::error_code ec;
      for (const auto& entry : fs::directory_iterator(input.raw, ec)) {
        if (entry.is_directory(ec)) children.push_back(entry.path());
      }
      std::sort(children.begin(), children.end(),
                [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
      for (const auto& child : children) {
        if (!has_git_metadata(child)) {
          result.skipped.push_back({child, "not a Git repository"});
          continue;
        }
        try {
          result.repos.push_back(open_local(child));
        } catch (const Error& e) {
          result.skipped.push_back({child, e.what()});
        }
      }
      std::stable_sort(result.repos.begin(), result.repos.end(),
                       [](const RepositoryHandle& a, const RepositoryHandle& b) { return a.name < b.name; });
      make_names_unique(result.repos);
      break;
    }
  }
  return result;
}

void make_names_unique(std::vector<RepositoryHandle>& repos) {
  std::map<std::string, int> seen;
  std::set<std::string> taken;
  for (const auto& r : repos) taken.insert(r.name);
  for (auto& r : repos) {
    int& count = seen[r.name];
    ++count;
    if (count == 1) continue;
    std::string candidate;
    int suffix = count;
    do {
      candidate = r.name + "-" + std::to_string(suffix++);
    } while (taken.contains(candidate));
    taken.insert(candidate);
    r.name = candidate;
  }
}

std::vector<CommitRef> list_commits(const RepositoryHandle& handle) {
  auto head = git(handle.root_path, {"rev-parse", "--verify", "--quiet", "HEAD^{commit}"});
  if (!head.ok()) {
    auto any = git(handle.root_path, {"rev-parse", "--git-dir"});
    if (!any.ok()) throw Error(ErrorCode::GitFailure, handle.name + ": " + trim(any.err));
    throw Error(ErrorCode::EmptyRepository, handle.name + " has no commits");
  }
  auto log = git(handle.root_path, {"log", "--first-parent", "--format=%H %cI %aI", "HEAD"});
  if (!log.ok()) throw Error(ErrorCode::GitFailure, handle.name + ": " + trim(log.err));

  std::vector<CommitRef> commits;
  std::istringstream lines(log.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string hash, committed, authored;
    fields >> hash >> committed >> authored;
    auto c = parse_timestamp(committed);
    auto a = parse_timestamp(authored);
    if (hash.size() != 40 || !c || !a) throw Error(ErrorCode::GitFailure, "unexpected git log line: " + line);
    commits.push_back({hash, *c, *a});
  }
  if (commits.empty()) throw Error(ErrorCode::EmptyRepository, handle.name + " has no commits");
  std::sort(commits.begin(), commits.end(), [](const CommitRef& x, const CommitRef& y) {
    if (x.committer_date.utc != y.committer_date.utc) return x.committer_date.utc < y.committer_date.utc;
    return x.hash < y.hash;
  });
  return commits;
}

std::vector<FileBlob> read_snapshot(const RepositoryHandle& handle, const CommitRef& commit,
                                    const std::set<std::string>& extensions) {
  auto exists = git(handle.root_path, {"cat-file", "-e", commit.hash + "^{commit}"});
  if (!exists.ok()) throw Error(ErrorCode::UnknownCommit, commit.hash + " in " + handle.name);

  auto tree = git(handle.root_path, {"ls-tree", "-r", "-z", "--full-tree", commit.hash});
  if (!tree.ok()) throw Error(ErrorCode::GitFailure, trim(tree.err));

  // <mode> SP <type> SP <oid> TAB <path> NUL
  std::vector<std::pair<std::string, std::string>> wanted;  // path, oid
  std::size_t pos = 0;
  while (pos < tree.out.size()) {
    const auto end = tree.out.find('\0', pos);
    const std::string_view entry(tree.out.data() + pos, (end == std::string::npos ? tree.out.size() : end) - pos);
    pos = end == std::string::npos ? tree.out.size() : end + 1;
    const auto tab = entry.find('\t');
    if (tab == std::string_view::npos) continue;
    std::istringstream meta{std::string(entry.substr(0, tab))};
    std::string mode, type, oid;
    meta >> mode >> type >> oid;
    const std::string_view path = entry.substr(tab + 1);
    if (type != "blob" || mode == "120000" || !ext_matches(path, extensions)) continue;
    wanted.emplace_back(std::string(path), oid);
  }
  std::sort(wanted.begin(), wanted.end());
  if (wanted.empty()) return {};

  std::string request;
  for (const auto& w : wanted) request += w.second + '\n';
  auto batch = git(handle.root_path, {"cat-file", "--batch"}, request);
  if (!batch.ok()) throw Error(ErrorCode::GitFailure, trim(batch.err));

  std::vector<FileBlob> blobs;
  blobs.reserve(wanted.size());
  std::size_t cursor = 0;
  for (const auto& [path, oid] : wanted) {
    const auto header_end = batch.out.find('\n', cursor);
    if (header_end == std::string::npos) throw Error(ErrorCode::GitFailure, "truncated cat-file output");
    std::istringstream header(batch.out.substr(cursor, header_end - cursor));
    std::string got_oid, type;
    std::size_t size = 0;
    header >> got_oid >> type >> size;
    if (got_oid != oid || type != "blob" || header_end + 1 + size > batch.out.size()) {
      throw Error(ErrorCode::GitFailure, "unexpected cat-file output for " + path);
    }
    const auto slash = path.find_last_of('/');
    blobs.push_back({path, slash == std::string::npos ? path : path.substr(slash + 1),
                     batch.out.substr(header_end + 1, size)});
    cursor = header_end + 1 + size + 1;
  }
  return blobs;
}

}  // namespace codevo
