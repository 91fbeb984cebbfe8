#include "doctest.h"

#include <algorithm>
#include <set>

#include "codevo/builtin_metrics.hpp"
#include "fixtures.hpp"

using namespace codevo;
namespace oracle = codevo::testing::oracle;

namespace {

ParsedCommit snapshot(Language language, const std::vector<std::pair<std::string, std::string>>& sources) {
  std::vector<FileBlob> blobs;
  for (const auto& [path, content] : sources) blobs.push_back({path, path, content});
  return parse_snapshot(blobs, language_spec(language), CommitRef{std::string(40, 'b'), {}, {}}, make_date(2024, 1, 1));
}

const MetricEvaluator& metric(const BuiltinSet& set, std::string_view name) {
  for (const auto& m : set.metrics) {
    if (m.def.name == name) return m;
  }
  FAIL("missing metric " << name);
  throw std::logic_error("unreachable");
}

std::map<std::string, std::size_t> fold(const MetricEvaluator& m, const ParsedCommit& pc) {
  return fold_categorical(std::get<std::vector<std::string>>(m.eval(pc)));
}

double number(const MetricEvaluator& m, const ParsedCommit& pc) { return std::get<double>(m.eval(pc)); }

std::vector<std::string> names(const BuiltinSet& set) {
  std::vector<std::string> out;
  for (const auto& m : set.metrics) out.push_back(m.def.name);
  return out;
}

}  // namespace

TEST_CASE("every language starts with the common metrics") {
  for (const Language l : kAllLanguages) {
    const auto set = builtin_set(l);
    CHECK(set.language == l);
    const auto n = names(set);
    REQUIRE(n.size() > 4);
    CHECK(std::vector<std::string>(n.begin(), n.begin() + 4) ==
          std::vector<std::string>{"Lines of code", "Source files", "Test files", "LOC per file"});
    CHECK(std::set<std::string>(n.begin(), n.end()).size() == n.size());
  }
}

TEST_CASE("python catalog names the charted constructs") {
  const auto n = names(builtin_set(Language::Python));
  for (const char* expected : {"Lines of code", "Test files", "Data structures", "Loops", "Async functions",
                               "@pytest decorated functions", "Functional features"}) {
    CHECK(std::find(n.begin(), n.end(), expected) != n.end());
  }
}

TEST_CASE("every queried node type exists in its grammar") {
  for (const Language l : kAllLanguages) {
    const auto& spec = language_spec(l);
    for (const auto& type : builtin_node_types(l)) {
      CAPTURE(type);
      const TSLanguage* grammar = spec.grammar_for(".ts");
      CHECK(ts_language_symbol_for_name(grammar, type.data(), static_cast<uint32_t>(type.size()), true) != 0);
    }
  }
}

TEST_CASE("builtins on an empty snapshot yield zeros and empty maps") {
  const ParsedCommit empty(CommitRef{std::string(40, 'e'), {}, {}}, make_date(2024, 1, 1), {});
  for (const Language l : kAllLanguages) {
    for (const auto& m : builtin_set(l).metrics) {
      CAPTURE(m.def.name);
      const auto v = m.eval(empty);
      if (m.def.kind == MetricKind::Numeric) {
        CHECK(std::get<double>(v) == 0);
      } else {
        CHECK(std::get<std::vector<std::string>>(v).empty());
      }
    }
  }
}

TEST_CASE("functional features on a known snippet") {
  const std::string source =
      "square = lambda x: x * x\nadd = lambda a, b: a + b\n\ndef gen():\n    yield 1\n\n"
      "evens = [x for x in range(10)]\n";
  const auto pc = snapshot(Language::Python, {{"f.py", source}});
  const auto counts = fold(metric(builtin_set(Language::Python), "Functional features"), pc);
  CHECK(counts == std::map<std::string, std::size_t>{{"lambda", 2}, {"list_comprehension", 1}, {"yield", 1}});

  const auto walked = oracle::named_type_counts(language_spec(Language::Python).grammar_for("f.py"), source);
  CHECK(walked.at("lambda") == 2);
  CHECK(walked.at("list_comprehension") == 1);
}

TEST_CASE("python content metrics") {
  const auto set = builtin_set(Language::Python);
  const auto pc = snapshot(Language::Python,
                           {{"a.py",
                             "import pytest\n\n@pytest.fixture\ndef a():\n    pass\n\n@pytest.mark.slow\n@other\n"
                             "def b():\n    pass\n\n@property\ndef c():\n    pass\n\nasync def d(x, y, z):\n"
                             "    pass\n\ndef asyncish():\n    pass\n"}});
  CHECK(number(metric(set, "@pytest decorated functions"), pc) == 2);
  CHECK(number(metric(set, "Async functions"), pc) == 1);
  // parameter counts 0, 0, 0, 3, 0 -> median 0
  CHECK(number(metric(set, "Parameters per function"), pc) == 0);
}

TEST_CASE("data structures and loops") {
  const auto set = builtin_set(Language::Python);
  const auto pc = snapshot(Language::Python, {{"a.py", "a = {1: [2]}\nb = {3}\nc = (4, 5)\nfor i in a:\n"
                                                        "    while i:\n        break\n"}});
  CHECK(fold(metric(set, "Data structures"), pc) ==
        std::map<std::string, std::size_t>{{"dictionary", 1}, {"list", 1}, {"set", 1}, {"tuple", 1}});
  CHECK(fold(metric(set, "Loops"), pc) ==
        std::map<std::string, std::size_t>{{"for_statement", 1}, {"while_statement", 1}});
}

TEST_CASE("javascript variable declarations by keyword") {
  const auto set = builtin_set(Language::JavaScript);
  const auto pc = snapshot(Language::JavaScript, {{"a.js", "const a=1; var b=2;"}});
  CHECK(fold(metric(set, "Variable declarations"), pc) ==
        std::map<std::string, std::size_t>{{"const", 1}, {"var", 1}});

  const auto more = snapshot(Language::JavaScript, {{"b.js", "let x = 1;\nfor (let i = 0; i < 2; i++) {}\nconst y = () => 1;\n"}});
  CHECK(fold(metric(set, "Variable declarations"), more) ==
        std::map<std::string, std::size_t>{{"const", 1}, {"let", 2}});
}

TEST_CASE("javascript functions and classes") {
  const auto set = builtin_set(Language::JavaScript);
  const auto pc = snapshot(Language::JavaScript,
                           {{"a.js", "function f() {}\nconst g = () => 1;\nconst h = function () {};\n"
                                     "class A {}\nconst B = class {};\n"}});
  CHECK(fold(metric(set, "Functions"), pc) ==
        std::map<std::string, std::size_t>{{"arrow_function", 1}, {"function_declaration", 1}, {"function_expression", 1}});
  CHECK(number(metric(set, "Classes"), pc) == 2);
}

TEST_CASE("typescript adds type declarations") {
  const auto set = builtin_set(Language::TypeScript);
  const auto pc = snapshot(Language::TypeScript,
                           {{"a.ts", "interface A { x: number }\ntype B = string;\nenum C { X }\nconst d: B = 'x';\n"}});
  CHECK(fold(metric(set, "Type declarations"), pc) ==
        std::map<std::string, std::size_t>{{"enum_declaration", 1}, {"interface_declaration", 1}, {"type_alias_declaration", 1}});
  CHECK(fold(metric(set, "Variable declarations"), pc) == std::map<std::string, std::size_t>{{"const", 1}});
}

TEST_CASE("java type declarations, methods and loops") {
  const auto set = builtin_set(Language::Java);
  const auto pc = snapshot(Language::Java,
                           {{"A.java", "class A { void m() { for (int i : xs) {} do {} while (false); } int n() { return 1; } }\n"
                                       "interface B {}\nenum C { X }\nrecord D(int x) {}\n"}});
  CHECK(fold(metric(set, "Type declarations"), pc) ==
        std::map<std::string, std::size_t>{{"class_declaration", 1}, {"enum_declaration", 1},
                                           {"interface_declaration", 1}, {"record_declaration", 1}});
  CHECK(number(metric(set, "Methods"), pc) == 2);
  CHECK(fold(metric(set, "Loops"), pc) ==
        std::map<std::string, std::size_t>{{"do_statement", 1}, {"enhanced_for_statement", 1}});
}

TEST_CASE("common metrics count files, tests and per-file loc") {
  const auto set = builtin_set(Language::Python);
  const auto pc = snapshot(Language::Python, {{"src/app.py", "a = 1\nb = 2\nc = 3\n"},
                                              {"tests/test_app.py", "def test():\n    pass\n"},
                                              {"app_test.py", "x = 1\n"}});
  CHECK(number(metric(set, "Lines of code"), pc) == 6);
  CHECK(number(metric(set, "Source files"), pc) == 3);
  CHECK(number(metric(set, "Test files"), pc) == 2);
  CHECK(number(metric(set, "LOC per file"), pc) == 2);
  CHECK(metric(set, "LOC per file").def.aggregate_hint == Aggregate::Median);
}

TEST_CASE("test file heuristic") {
  CHECK(is_test_file("tests/helpers.py"));
  CHECK(is_test_file("pkg/test/Foo.java"));
  CHECK(is_test_file("test_app.py"));
  CHECK(is_test_file("src/app_test.py"));
  CHECK(is_test_file("src/button.test.js"));
  CHECK(is_test_file("src/button.spec.ts"));
  CHECK_FALSE(is_test_file("src/testing.py"));
  CHECK_FALSE(is_test_file("contest/app.py"));
  CHECK_FALSE(is_test_file("latest.py"));
  CHECK_FALSE(is_test_file("tests.py"));
}

TEST_CASE("each builtin categorical label has a corpus snippet with a nonzero count") {
  for (const Language l : kAllLanguages) {
    const std::string dir(to_string(l));
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& p : codevo::testing::corpus_files(dir)) {
      sources.emplace_back(p.filename().string(), codevo::testing::read_file(p));
    }
    const auto pc = snapshot(l, sources);
    for (const auto& type : builtin_node_types(l)) {
      CAPTURE(type);
      CHECK(pc.count_nodes(type) > 0);
    }
  }
}
