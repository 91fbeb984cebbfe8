#include "codevo/report_exporter.hpp"

#include <charconv>
#include <fstream>

#include "codevo/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace codevo {

namespace {

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

// Keeps "</script>" and comment openers from terminating the data block.
std::string script_safe_json(const json& payload) {
  const std::string text = payload.dump(2, ' ', false, json::error_handler_t::replace);
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '<': out += "\\u003c"; break;
      case '>': out += "\\u003e"; break;
      case '&': out += "\\u0026"; break;
      default: out += c;
    }
  }
  return out;
}

std::string script_safe_asset(std::string_view asset) {
  std::string out(asset);
  for (std::size_t pos = 0; (pos = out.find("</script", pos)) != std::string::npos; pos += 2) {
    out.replace(pos, 2, "<\\/");
  }
  return out;
}

json date_json(Date d) { return format_date(d); }

Date date_from(const json& j) {
  const auto text = j.get<std::string>();
  const auto d = parse_date(text);
  if (!d) throw Error(ErrorCode::InvalidArgument, "bad date in payload: " + text);
  return *d;
}

json metadata_json(const EvolutionTable& table) {
  const auto& m = table.metadata;
  json meta = json::object();
  meta["language"] = m.language;
  meta["window"] = m.window ? json{{"start_year", m.window->start_year}, {"end_year", m.window->end_year}} : json();
  meta["grammars"] = json::array();
  for (const auto& g : m.grammars) meta["grammars"].push_back({{"name", g.name}, {"version", g.version}});
  meta["samples"] = json::array();
  for (const auto& s : m.samples) {
    meta["samples"].push_back({{"boundary", date_json(s.boundary)},
                               {"commit", s.commit},
                               {"committer_date", s.committer_date},
                               {"files", s.files}});
  }
  meta["skipped_files"] = json::array();
  for (const auto& s : m.skipped_files) {
    meta["skipped_files"].push_back({{"boundary", date_json(s.boundary)},
                                     {"commit", s.commit},
                                     {"path", s.path},
                                     {"reason", s.reason},
                                     {"detail", s.detail}});
  }
  meta["metric_errors"] = json::array();
  for (const auto& e : m.metric_errors) {
    meta["metric_errors"].push_back({{"metric", e.metric}, {"boundary", date_json(e.boundary)}, {"message", e.message}});
  }
  meta["always_zero_metrics"] = m.always_zero_metrics;
  json options = json::object();
  for (const auto& metric : table.metrics) {
    options[metric.name] = {
        {"aggregate_hint", metric.aggregate_hint ? json(std::string(to_string(*metric.aggregate_hint))) : json()},
        {"show_version_chart", metric.show_version_chart}};
  }
  meta["metric_options"] = std::move(options);
  meta["generated_at"] = m.generated_at;
  return meta;
}

std::optional<Aggregate> aggregate_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  const auto text = j.get<std::string>();
  for (const Aggregate a : {Aggregate::Median, Aggregate::Mean, Aggregate::Sum}) {
    if (to_string(a) == text) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "bad aggregate hint: " + text);
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

std::string index_html(std::span<const EvolutionTable> tables, ReportFormats formats) {
  std::string page =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>Code evolution reports</title>\n</head>\n<body>\n<h1>Code evolution reports</h1>\n<ul>\n";
  for (const auto& t : tables) {
    page += "<li>" + html_escape(t.repo_name);
    if (formats.html) page += " <a href=\"" + html_escape(t.repo_name) + ".html\">HTML</a>";
    if (formats.csv) page += " <a href=\"" + html_escape(t.repo_name) + ".csv\">CSV</a>";
    page += "</li>\n";
  }
  page += "</ul>\n</body>\n</html>\n";
  return page;
}

constexpr std::string_view kStyle = R"css(
body { font-family: system-ui, sans-serif; margin: 2rem auto; max-width: 960px; color: #222; }
#report-metadata dl { display: grid; grid-template-columns: max-content 1fr; gap: .2rem 1rem; font-size: .9rem; }
#report-metadata dt { font-weight: 600; }
section.chart { border: 1px solid #ddd; border-radius: 6px; padding: .5rem 1rem; margin: 1rem 0; }
section.chart h2 { font-size: 1.1rem; margin: .3rem 0; }
ul.legend { list-style: none; padding: 0; display: flex; flex-wrap: wrap; gap: 1rem; font-size: .85rem; }
.error-banner { background: #fdd; border: 1px solid #c00; padding: .5rem; }
)css";

}  // namespace

std::string format_value(double value) {
  if (value == 0.0) return "0";
  char buf[400];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

std::string to_csv(const EvolutionTable& table) {
  std::vector<std::string> dates;
  dates.reserve(table.boundaries.size());
  for (const Date d : table.boundaries) dates.push_back(format_date(d));

  std::string out = "metric,series,date,value\n";
  for (const auto& metric : table.metrics) {
    const std::string name = csv_field(metric.name);
    for (const auto& series : metric.series) {
      const std::string label = csv_field(series.label);
      for (std::size_t i = 0; i < dates.size(); ++i) {
        out += name;
        out += ',';
        out += label;
        out += ',';
        out += dates[i];
        out += ',';
        out += format_value(series.values.at(i));
        out += '\n';
      }
    }
  }
  return out;
}

json to_payload(const EvolutionTable& table) {
  json payload = json::object();
  payload["repo"] = table.repo_name;
  payload["unit"] = std::string(to_string(table.unit));
  payload["boundaries"] = json::array();
  for (const Date d : table.boundaries) payload["boundaries"].push_back(date_json(d));
  payload["metrics"] = json::array();
  for (const auto& metric : table.metrics) {
    json series = json::array();
    for (const auto& s : metric.series) series.push_back({{"label", s.label}, {"values", s.values}});
    payload["metrics"].push_back(
        {{"name", metric.name}, {"kind", std::string(to_string(metric.kind))}, {"series", std::move(series)}});
  }
  payload["metadata"] = metadata_json(table);
  return payload;
}

EvolutionTable from_payload(const json& payload) {
  try {
    EvolutionTable table;
    table.repo_name = payload.at("repo").get<std::string>();
    const auto unit = payload.at("unit").get<std::string>();
    if (unit != "year" && unit != "month") throw Error(ErrorCode::InvalidArgument, "bad unit: " + unit);
    table.unit = unit == "year" ? DateUnit::Year : DateUnit::Month;
    for (const auto& d : payload.at("boundaries")) table.boundaries.push_back(date_from(d));

    const json& meta = payload.at("metadata");
    const json options = meta.value("metric_options", json::object());
    for (const auto& m : payload.at("metrics")) {
      MetricColumn column;
      column.name = m.at("name").get<std::string>();
      const auto kind = parse_metric_kind(m.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::InvalidArgument, "bad metric kind for " + column.name);
      column.kind = *kind;
      for (const auto& s : m.at("series")) {
        Series series{s.at("label").get<std::string>(), s.at("values").get<std::vector<double>>()};
        if (series.values.size() != table.boundaries.size()) {
          throw Error(ErrorCode::InvalidArgument, "series length mismatch in " + column.name);
        }
        column.series.push_back(std::move(series));
      }
      if (options.contains(column.name)) {
        const auto& o = options.at(column.name);
        column.aggregate_hint = aggregate_from(o.value("aggregate_hint", json()));
        column.show_version_chart = o.value("show_version_chart", true);
      }
      table.metrics.push_back(std::move(column));
    }

    auto& md = table.metadata;
    md.language = meta.value("language", "");
    if (meta.contains("window") && !meta.at("window").is_null()) {
      md.window = SamplingWindow{meta.at("window").at("start_year").get<int>(),
                                 meta.at("window").at("end_year").get<int>()};
    }
    for (const auto& g : meta.value("grammars", json::array())) {
      md.grammars.push_back({g.at("name").get<std::string>(), g.at("version").get<std::string>()});
    }
    for (const auto& s : meta.value("samples", json::array())) {
      md.samples.push_back({date_from(s.at("boundary")), s.at("commit").get<std::string>(),
                            s.at("committer_date").get<std::string>(), s.at("files").get<std::size_t>()});
    }
    for (const auto& s : meta.value("skipped_files", json::array())) {
      md.skipped_files.push_back({date_from(s.at("boundary")), s.at("commit").get<std::string>(),
                                  s.at("path").get<std::string>(), s.at("reason").get<std::string>(),
                                  s.at("detail").get<std::string>()});
    }
    for (const auto& e : meta.value("metric_errors", json::array())) {
      md.metric_errors.push_back(
          {e.at("metric").get<std::string>(), date_from(e.at("boundary")), e.at("message").get<std::string>()});
    }
    md.always_zero_metrics = meta.value("always_zero_metrics", std::vector<std::string>{});
    md.generated_at = meta.value("generated_at", "");
    return table;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed report payload: ") + e.what());
  }
}

std::string to_html(const EvolutionTable& table, std::string_view asset) {
  const auto& m = table.metadata;
  std::string page;
  page += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  page += "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n";
  page += "<title>" + html_escape(table.repo_name) + " - code evolution</title>\n";
  page += "<style>" + std::string(kStyle) + "</style>\n</head>\n<body>\n";
  page += "<h1>" + html_escape(table.repo_name) + "</h1>\n";

  auto row = [&](std::string_view key, const std::string& value) {
    page += "<dt>" + std::string(key) + "</dt><dd>" + html_escape(value) + "</dd>\n";
  };
  page += "<section id=\"report-metadata\">\n<dl>\n";
  row("Repository", table.repo_name);
  row("Language", m.language);
  row("Date unit", std::string(to_string(table.unit)));
  if (m.window) row("Window", std::to_string(m.window->start_year) + "-" + std::to_string(m.window->end_year));
  if (!table.boundaries.empty()) {
    row("Boundaries", format_date(table.boundaries.front()) + " .. " + format_date(table.boundaries.back()) + " (" +
                          std::to_string(table.boundaries.size()) + ")");
  }
  std::string grammars;
  for (const auto& g : m.grammars) grammars += (grammars.empty() ? "" : ", ") + g.name + " " + g.version;
  row("Grammars", grammars);
  row("Skipped files", std::to_string(m.skipped_files.size()));
  row("Metric errors", std::to_string(m.metric_errors.size()));
  if (!m.always_zero_metrics.empty()) {
    std::string names;
    for (const auto& n : m.always_zero_metrics) names += (names.empty() ? "" : ", ") + n;
    row("Always-zero metrics", names);
  }
  row("Generated", m.generated_at);
  page += "</dl>\n</section>\n";

  page += "<main id=\"charts\">\n";
  for (std::size_t i = 0; i < table.metrics.size(); ++i) {
    const auto& metric = table.metrics[i];
    page += "<section class=\"chart\" data-metric-index=\"" + std::to_string(i) + "\" data-metric-kind=\"" +
            std::string(to_string(metric.kind)) + "\">\n";
    page += "<h2>" + html_escape(metric.name) + "</h2>\n<div class=\"chart-body\"></div>\n</section>\n";
  }
  page += "</main>\n";

  page += "<script type=\"application/json\" id=\"report-data\">\n";
  page += script_safe_json(to_payload(table));
  page += "\n</script>\n<script>\n";
  page += script_safe_asset(asset);
  page += "\n</script>\n</body>\n</html>\n";
  return page;
}

std::optional<json> extract_payload(std::string_view html) {
  constexpr std::string_view open = "<script type=\"application/json\" id=\"report-data\">";
  const auto begin = html.find(open);
  if (begin == std::string_view::npos) return std::nullopt;
  const auto body = begin + open.size();
  const auto end = html.find("</script>", body);
  if (end == std::string_view::npos) return std::nullopt;
  auto parsed = json::parse(html.substr(body, end - body), nullptr, false);
  if (parsed.is_discarded()) return std::nullopt;
  return parsed;
}

std::vector<fs::path> write_reports(std::span<const EvolutionTable> tables, const fs::path& output_dir,
                                    ReportFormats formats, std::string_view asset) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, output_dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  std::set<std::string> names;
  for (const auto& table : tables) {
    if (!names.insert(table.repo_name).second) {
      throw Error(ErrorCode::IoFailure, "two reports named " + table.repo_name + " in " + output_dir.string());
    }
    if (formats.html) {
      const auto path = output_dir / (table.repo_name + ".html");
      write_file(path, to_html(table, asset));
      written.push_back(path);
    }
    if (formats.csv) {
      const auto path = output_dir / (table.repo_name + ".csv");
      write_file(path, to_csv(table));
      written.push_back(path);
    }
  }
  if (tables.size() > 1) {
    const auto path = output_dir / "index.html";
    write_file(path, index_html(tables, formats));
    written.push_back(path);
  }
  return written;
}

}  // namespace codevo
