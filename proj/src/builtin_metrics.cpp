#include "codevo/builtin_metrics.hpp"

#include <algorithm>

#include "codevo/error.hpp"

namespace codevo {

namespace {

// Grammar node-type names live here and nowhere else in the library.
namespace python_types {
const std::vector<std::string> kDataStructures{"dictionary", "list", "set", "tuple"};
const std::vector<std::string> kLoops{"for_statement", "while_statement"};
const std::vector<std::string> kFunctional{"lambda",           "yield",
                                           "generator_expression", "list_comprehension",
                                           "dictionary_comprehension", "set_comprehension"};
constexpr std::string_view kFunction = "function_definition";
constexpr std::string_view kDecorated = "decorated_definition";
constexpr std::string_view kDecorator = "decorator";
}  // namespace python_types

namespace js_types {
constexpr std::string_view kLexical = "lexical_declaration";
constexpr std::string_view kVar = "variable_declaration";
const std::vector<std::string> kFunctions{"arrow_function", "function_declaration", "function_expression"};
const std::vector<std::string> kClasses{"class_declaration", "class"};
const std::vector<std::string> kTsTypes{"interface_declaration", "type_alias_declaration", "enum_declaration"};
}  // namespace js_types

namespace java_types {
const std::vector<std::string> kTypeDecls{"class_declaration", "interface_declaration", "enum_declaration",
                                          "record_declaration"};
constexpr std::string_view kMethod = "method_declaration";
const std::vector<std::string> kLoops{"for_statement", "enhanced_for_statement", "while_statement",
                                      "do_statement"};
}  // namespace java_types

void add(MetricRegistry& registry, MetricEvaluator metric) {
  registry.add(std::move(metric.def), std::move(metric.eval));
}

void add_common(MetricRegistry& registry) {
  registry.numeric("Lines of code", [](const ParsedCommit& pc) { return static_cast<double>(pc.loc()); });
  registry.numeric("Source files", [](const ParsedCommit& pc) { return static_cast<double>(pc.files().size()); });
  registry.numeric("Test files", [](const ParsedCommit& pc) {
    return static_cast<double>(std::count_if(pc.files().begin(), pc.files().end(),
                                             [](const ParsedFile& f) { return is_test_file(f.path()); }));
  });
  registry.numeric(
      "LOC per file",
      [](const ParsedCommit& pc) {
        std::vector<double> locs;
        for (const auto& f : pc.files()) locs.push_back(static_cast<double>(f.loc()));
        return aggregate(std::move(locs), Aggregate::Median);
      },
      Aggregate::Median);
}

bool starts_with_keyword(std::string_view text, std::string_view keyword) {
  if (!text.starts_with(keyword)) return false;
  if (text.size() == keyword.size()) return true;
  const char next = text[keyword.size()];
  return next == ' ' || next == '\t' || next == '\n' || next == '\r' || next == '\\';
}

void add_python(MetricRegistry& registry) {
  using namespace python_types;
  add(registry, node_type_metric("Data structures", kDataStructures));
  add(registry, node_type_metric("Loops", kLoops));
  registry.numeric("Async functions", [](const ParsedCommit& pc) {
    return static_cast<double>(
        pc.nodes_matching([](const CstNode& n) { return n.type() == kFunction && starts_with_keyword(n.text(), "async"); })
            .size());
  });
  add(registry, decorated_definitions_metric("@pytest decorated functions", "@pytest"));
  add(registry, node_type_metric("Functional features", kFunctional));
  registry.numeric(
      "Parameters per function",
      [](const ParsedCommit& pc) {
        std::vector<double> counts;
        pc.visit([&](const CstNode& n) {
          if (n.type() != kFunction) return;
          const auto params = n.child_by_field("parameters");
          counts.push_back(params ? static_cast<double>(params->children().size()) : 0.0);
        });
        return aggregate(std::move(counts), Aggregate::Median);
      },
      Aggregate::Median);
}

void add_javascript_family(MetricRegistry& registry, bool typescript) {
  using namespace js_types;
  registry.categorical("Variable declarations", [](const ParsedCommit& pc) {
    std::vector<std::string> labels;
    pc.visit([&](const CstNode& n) {
      if (n.type() == kVar) {
        labels.emplace_back("var");
      } else if (n.type() == kLexical) {
        const auto kind = n.child_by_field("kind");
        labels.emplace_back(kind ? std::string(kind->text()) : "let");
      }
    });
    return labels;
  });
  add(registry, node_type_metric("Functions", kFunctions));
  registry.numeric("Classes", [](const ParsedCommit& pc) { return static_cast<double>(pc.count_nodes(kClasses)); });
  if (typescript) add(registry, node_type_metric("Type declarations", kTsTypes));
}

void add_java(MetricRegistry& registry) {
  using namespace java_types;
  add(registry, node_type_metric("Type declarations", kTypeDecls));
  registry.numeric("Methods", [](const ParsedCommit& pc) { return static_cast<double>(pc.count_nodes(kMethod)); });
  add(registry, node_type_metric("Loops", kLoops));
}

}  // namespace

bool is_test_file(std::string_view path) {
  std::string_view rest = path;
  std::string_view file = path;
  while (true) {
    const auto slash = rest.find('/');
    if (slash == std::string_view::npos) {
      file = rest;
      break;
    }
    const auto segment = rest.substr(0, slash);
    if (segment == "test" || segment == "tests") return true;
    rest.remove_prefix(slash + 1);
  }
  if (file.starts_with("test_")) return true;
  const auto dot = file.find_last_of('.');
  const std::string_view stem = dot == std::string_view::npos ? file : file.substr(0, dot);
  return stem.ends_with("_test") || stem.ends_with(".test") || stem.ends_with(".spec");
}

MetricEvaluator node_type_metric(std::string name, std::vector<std::string> node_types) {
  MetricDef def{std::move(name), MetricKind::Categorical, std::nullopt, true};
  return {std::move(def),
          [types = std::move(node_types)](const ParsedCommit& pc) -> MetricValue { return pc.find_node_types(types); }};
}

MetricEvaluator decorated_definitions_metric(std::string name, std::string prefix) {
  MetricDef def{std::move(name), MetricKind::Numeric, std::nullopt, true};
  return {std::move(def), [prefix = std::move(prefix)](const ParsedCommit& pc) -> MetricValue {
            const auto matches = pc.nodes_matching([&](const CstNode& n) {
              if (n.type() != python_types::kDecorated) return false;
              const auto decorators = n.children();
              return std::any_of(decorators.begin(), decorators.end(), [&](const CstNode& d) {
                return d.type() == python_types::kDecorator && d.text().starts_with(prefix);
              });
            });
            return static_cast<double>(matches.size());
          }};
}

BuiltinSet builtin_set(Language language) {
  BuiltinSet set{language, {}};
  add_common(set.metrics);
  switch (language) {
    case Language::Python: add_python(set.metrics); break;
    case Language::JavaScript: add_javascript_family(set.metrics, false); break;
    case Language::TypeScript: add_javascript_family(set.metrics, true); break;
    case Language::Java: add_java(set.metrics); break;
    default: throw Error(ErrorCode::UnsupportedLanguage, std::to_string(static_cast<int>(language)));
  }
  return set;
}

std::vector<std::string> builtin_node_types(Language language) {
  std::vector<std::string> types;
  auto append = [&](const std::vector<std::string>& more) { types.insert(types.end(), more.begin(), more.end()); };
  switch (language) {
    case Language::Python:
      append(python_types::kDataStructures);
      append(python_types::kLoops);
      append(python_types::kFunctional);
      append({std::string(python_types::kFunction), std::string(python_types::kDecorated),
              std::string(python_types::kDecorator)});
      break;
    case Language::TypeScript:
      append(js_types::kTsTypes);
      [[fallthrough]];
    case Language::JavaScript:
      append({std::string(js_types::kLexical), std::string(js_types::kVar)});
      append(js_types::kFunctions);
      append(js_types::kClasses);
      break;
    case Language::Java:
      append(java_types::kTypeDecls);
      append({std::string(java_types::kMethod)});
      append(java_types::kLoops);
      break;
  }
  return types;
}

}  // namespace codevo
