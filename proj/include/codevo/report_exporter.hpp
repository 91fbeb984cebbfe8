#pragma once

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codevo/metric_engine.hpp"

namespace codevo {

/// Chart renderer compiled into the binary (see CODEVO_CHART_ASSET).
std::string_view default_chart_asset();

/// Long-format CSV: metric,series,date,value. Rows follow metric
/// registration order, then series order, then date. LF line endings.
std::string to_csv(const EvolutionTable& table);

/// Shortest fixed-notation rendering that round-trips ("12", "2.5").
std::string format_value(double value);

/// The JSON document embedded in HTML reports:
/// {repo, unit, boundaries[], metrics[{name, kind, series[{label, values[]}]}], metadata{}}
nlohmann::json to_payload(const EvolutionTable& table);
/// Inverse of to_payload. Throws InvalidArgument on schema violations.
EvolutionTable from_payload(const nlohmann::json& payload);

/// Single self-contained page: metadata block, one chart slot per metric,
/// the payload in <script type="application/json" id="report-data">, and the
/// chart renderer inlined.
std::string to_html(const EvolutionTable& table, std::string_view asset = default_chart_asset());

/// Pulls the payload text back out of a page produced by to_html.
std::optional<nlohmann::json> extract_payload(std::string_view html);

struct ReportFormats {
  bool csv = true;
  bool html = true;
};

/// Writes <repo>.csv / <repo>.html per table, plus index.html when more than
/// one table is given. Throws IoFailure naming the offending path.
std::vector<std::filesystem::path> write_reports(std::span<const EvolutionTable> tables,
                                                 const std::filesystem::path& output_dir,
                                                 ReportFormats formats = {},
                                                 std::string_view asset = default_chart_asset());

}  // namespace codevo
