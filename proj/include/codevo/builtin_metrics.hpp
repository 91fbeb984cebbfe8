#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "codevo/cst_parser.hpp"
#include "codevo/metric_engine.hpp"

namespace codevo {

struct BuiltinSet {
  Language language;
  MetricRegistry metrics;
};

/// Predefined metrics used by the command-line tool. Every language gets
/// "Lines of code", "Source files", "Test files" and "LOC per file" first,
/// followed by its language-specific constructs.
BuiltinSet builtin_set(Language language);

/// Every grammar node type the builtin set for `language` queries.
std::vector<std::string> builtin_node_types(Language language);

/// Path heuristic behind the "Test files" metric: a "test"/"tests" directory,
/// a "test_" file prefix, or a "_test" / ".test" / ".spec" stem suffix.
bool is_test_file(std::string_view path);

// Building blocks for custom metric sets.

/// Categorical metric emitting one label per node of the listed types.
MetricEvaluator node_type_metric(std::string name, std::vector<std::string> node_types);

/// Numeric metric counting decorated definitions carrying a decorator whose
/// text starts with `prefix` (e.g. "@pytest").
MetricEvaluator decorated_definitions_metric(std::string name, std::string prefix);

}  // namespace codevo
