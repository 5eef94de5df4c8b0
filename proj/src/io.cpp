#include "dsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsim {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

nlohmann::json to_json(const ScenarioSpec& s) {
  return nlohmann::json{{"dgp", to_string(s.dgp)},
                        {"deviation", to_string(s.deviation)},
                        {"magnitude", s.magnitude},
                        {"N", s.N},
                        {"p", s.p},
                        {"proportions", s.proportions},
                        {"grouping", to_string(s.grouping)},
                        {"with_target", s.with_target}};
}

ScenarioSpec spec_from_json(const nlohmann::json& j) {
  try {
    ScenarioSpec s;
    s.dgp = parse_dgp(j.value("dgp", std::string("normal")));
    s.deviation = parse_deviation(j.value("deviation", std::string("null")));
    s.magnitude = j.value("magnitude", 0.0);
    s.N = j.at("N").get<int>();
    s.p = j.at("p").get<int>();
    s.proportions = j.value("proportions", std::vector<double>{0.5, 0.5});
    s.grouping = parse_grouping(j.value("grouping", std::string(s.proportions.size() == 2 ? "1+1" : "3+1")));
    s.with_target = j.value("with_target", false);
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

nlohmann::json grid_to_json(const std::vector<ScenarioSpec>& specs) {
  auto arr = nlohmann::json::array();
  for (const auto& s : specs) arr.push_back(to_json(s));
  return arr;
}

std::vector<ScenarioSpec> grid_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("scenario grid must be a JSON array");
  std::vector<ScenarioSpec> out;
  for (const auto& e : j) out.push_back(spec_from_json(e));
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
    f << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_dump(const std::filesystem::path& path, const ScenarioResult& r) {
  std::vector<std::vector<std::string>> rows;
  for (int rep = 0; rep < r.reps; ++rep)
    for (std::size_t m = 0; m < r.methods.size(); ++m) {
      const double v = r.values[static_cast<std::size_t>(rep)][m];
      const bool failed = !r.errors[static_cast<std::size_t>(rep)][m].empty() || !std::isfinite(v);
      rows.push_back({std::to_string(rep), r.methods[m], format_number(failed ? NAN : v), failed ? "1" : "0"});
    }
  write_csv(path, {"repetition", "method", "value", "error_flag"}, rows);
}

ScenarioResult read_dump(const std::filesystem::path& path, const ScenarioSpec& spec) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows.front() != std::vector<std::string>{"repetition", "method", "value", "error_flag"})
    throw ConfigError("malformed dump " + path.string());
  ScenarioResult r;
  r.spec = spec;
  int max_rep = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4) throw ConfigError("malformed dump row in " + path.string());
    max_rep = std::max(max_rep, std::stoi(rows[i][0]));
    if (std::find(r.methods.begin(), r.methods.end(), rows[i][1]) == r.methods.end()) r.methods.push_back(rows[i][1]);
  }
  r.reps = max_rep + 1;
  r.values.assign(static_cast<std::size_t>(r.reps), std::vector<double>(r.methods.size(), NAN));
  r.errors.assign(static_cast<std::size_t>(r.reps), std::vector<std::string>(r.methods.size(), "missing"));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto rep = static_cast<std::size_t>(std::stoi(rows[i][0]));
    const auto m = static_cast<std::size_t>(std::find(r.methods.begin(), r.methods.end(), rows[i][1]) - r.methods.begin());
    if (rows[i][3] == "0" && rows[i][2] != "NA") {
      r.values[rep][m] = std::stod(rows[i][2]);
      r.errors[rep][m].clear();
    } else {
      r.errors[rep][m] = "error";
    }
  }
  return r;
}

}  // namespace dsim
