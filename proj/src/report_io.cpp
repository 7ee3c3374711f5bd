#include "pmelab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace pmelab {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "pmelab-report/1";

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json checks_to_json(const std::vector<BoundReport>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"theoretical", number(c.theoretical)},
                   {"measured", number(c.measured)},
                   {"satisfied", c.satisfied}});
  }
  return arr;
}

std::vector<BoundReport> checks_from_json(const json& arr) {
  std::vector<BoundReport> out;
  for (const auto& c : arr) {
    out.push_back({c.at("name").get<std::string>(), number_from(c.at("theoretical")),
                   number_from(c.at("measured")), c.at("satisfied").get<bool>()});
  }
  return out;
}

json values_to_json(const std::map<std::string, double>& values) {
  json obj = json::object();
  for (const auto& [k, v] : values) obj[k] = number(v);
  return obj;
}

std::map<std::string, double> values_from_json(const json& obj) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : obj.items()) out[k] = number_from(v);
  return out;
}

json vector_to_json(const std::vector<double>& xs) {
  json arr = json::array();
  for (double x : xs) arr.push_back(number(x));
  return arr;
}

std::vector<double> vector_from_json(const json& arr) {
  std::vector<double> out;
  for (const auto& x : arr) out.push_back(number_from(x));
  return out;
}

json config_to_json(const ExperimentConfig& c) {
  return {{"experiment", to_string(c.kind)},
          {"n_list", c.n_list},
          {"s", c.s},
          {"r_list", c.r_list},
          {"T", c.T},
          {"delta", c.delta},
          {"seed", c.seed},
          {"output_dir", c.output_dir},
          {"threads", c.threads},
          {"grid", {{"multiplier", c.grid_multiplier}, {"max_points", c.max_grid_points}}},
          {"solver", {{"dt_safety", c.dt_safety}, {"dealias", c.dealias}}},
          {"sampling", {{"time_samples", c.time_samples}, {"early_samples", c.early_samples}}},
          {"verdict",
           {{"gap_fraction", c.gap_fraction},
            {"initial_gap_threshold", c.initial_gap_threshold},
            {"random_pairs", c.random_pairs}}}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
  c.n_list = j.at("n_list").get<std::vector<int>>();
  c.s = j.at("s").get<double>();
  c.r_list = j.at("r_list").get<std::vector<double>>();
  c.T = j.at("T").get<double>();
  c.delta = j.at("delta").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.output_dir = j.at("output_dir").get<std::string>();
  c.threads = j.at("threads").get<int>();
  c.grid_multiplier = j.at("grid").at("multiplier").get<int>();
  c.max_grid_points = j.at("grid").at("max_points").get<int>();
  c.dt_safety = j.at("solver").at("dt_safety").get<double>();
  c.dealias = j.at("solver").at("dealias").get<bool>();
  c.time_samples = j.at("sampling").at("time_samples").get<int>();
  c.early_samples = j.at("sampling").at("early_samples").get<int>();
  c.gap_fraction = j.at("verdict").at("gap_fraction").get<double>();
  c.initial_gap_threshold = j.at("verdict").at("initial_gap_threshold").get<double>();
  c.random_pairs = j.at("verdict").at("random_pairs").get<int>();
  return c;
}

std::string optional_field(const std::map<std::string, double>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end() || !std::isfinite(it->second)) return {};
  return format_double(it->second);
}

void write_or_throw(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, end);
}

std::string norms_file_name(int n) { return "norms_n" + std::to_string(n) + ".csv"; }

std::string render_norms_csv(const NRecord& record, const ExperimentConfig& config) {
  std::string out = std::string(kNormsHeader) + "\n";
  const auto& s = record.series;
  if (s.t.empty()) return out;
  const std::string hr = hr_column("u", config.effective_r_list().front());
  const std::vector<const std::vector<double>*> cols{
      &s.column("hs_gap"), &s.column("h1_err_u"), &s.column("h1_err_v"), &s.column(hr),
      &s.column("min_u"),  &s.column("max_u"),    &s.column("sup_ux")};
  for (size_t i = 0; i < s.t.size(); ++i) {
    out += format_double(s.t[i]);
    for (const auto* c : cols) {
      out += ',';
      out += format_double((*c)[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_summary_csv(const ExperimentReport& report) {
  std::string out = std::string(kSummaryHeader) + "\n";
  const std::string slope_u = optional_field(report.fits, "slope_h1_u");
  const std::string slope_v = optional_field(report.fits, "slope_h1_v");
  for (const auto& rec : report.records) {
    out += std::to_string(rec.n);
    out += ',' + optional_field(rec.values, "initial_gap");
    out += ',' + optional_field(rec.values, "inf_gap");
    out += ',' + slope_u;
    out += ',' + slope_v;
    out += ',';
    out += rec.passed() ? "pass" : "fail";
    out += '\n';
  }
  return out;
}

std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      std::string_view contents) {
  const std::filesystem::path file(name);
  if (file.has_parent_path() || file.is_absolute() || name == "." || name == "..") {
    throw IoError("output file name '" + name + "' must not contain a directory");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / file;
  write_or_throw(path, contents);
  return path;
}

std::vector<std::filesystem::path> emit_csv(const ExperimentReport& report,
                                            const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& rec : report.records) {
    written.push_back(write_text_file(dir, norms_file_name(rec.n), render_norms_csv(rec, report.config)));
  }
  written.push_back(write_text_file(dir, kSummaryFile, render_summary_csv(report)));
  return written;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  auto split = [](std::string_view line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  };
  bool first = true;
  size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw ArgumentError("CSV line is not terminated by \\n");
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    auto fields = split(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size()) throw ArgumentError("CSV row width differs from header");
    std::vector<CsvCell> row;
    for (const auto& f : fields) {
      if (f.empty()) {
        row.emplace_back(std::monostate{});
        continue;
      }
      double x = 0.0;
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
      if (ec == std::errc() && end == f.data() + f.size()) {
        row.emplace_back(x);
      } else {
        row.emplace_back(f);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else if (const auto* s = std::get_if<std::string>(&row[i])) {
        out += *s;
      }
    }
    out += '\n';
  }
  return out;
}

std::string serialize_report(const ExperimentReport& report) {
  json j;
  j["format"] = kFormatTag;
  j["config"] = config_to_json(report.config);
  json records = json::array();
  for (const auto& rec : report.records) {
    json r{{"n", rec.n},
           {"grid_points", rec.grid_points},
           {"values", values_to_json(rec.values)},
           {"checks", checks_to_json(rec.checks)},
           {"passed", rec.passed()}};
    json columns = json::object();
    for (const auto& [name, col] : rec.series.columns) columns[name] = vector_to_json(col);
    r["series"] = {{"t", vector_to_json(rec.series.t)}, {"columns", columns}};
    if (rec.abort) r["abort"] = *rec.abort;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  j["fits"] = values_to_json(report.fits);
  j["checks"] = checks_to_json(report.checks);
  j["notes"] = report.notes;
  j["passed"] = report.passed();
  return j.dump(1) + "\n";
}

ExperimentReport deserialize_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("report is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != kFormatTag) throw ArgumentError("not a pmelab report");
  try {
    ExperimentReport report;
    report.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("records")) {
      NRecord rec;
      rec.n = r.at("n").get<int>();
      rec.grid_points = r.at("grid_points").get<int>();
      rec.values = values_from_json(r.at("values"));
      rec.checks = checks_from_json(r.at("checks"));
      rec.series.t = vector_from_json(r.at("series").at("t"));
      for (const auto& [name, col] : r.at("series").at("columns").items()) {
        rec.series.columns[name] = vector_from_json(col);
      }
      if (r.contains("abort")) rec.abort = r.at("abort").get<std::string>();
      report.records.push_back(std::move(rec));
    }
    report.fits = values_from_json(j.at("fits"));
    report.checks = checks_from_json(j.at("checks"));
    report.notes = j.at("notes").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed report: ") + e.what());
  }
}

std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  return write_text_file(dir, kReportFile, serialize_report(report));
}

ExperimentReport read_report(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read report " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize_report(buffer.str());
}

}  // namespace pmelab
