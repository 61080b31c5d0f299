#include "qfric/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace qfric {
namespace {

using nlohmann::json;

constexpr const char* kReportHeader =
    "z_a,w,v,f_int,f_rad,f_int_add,f_rad_add,eta_int,eta_rad,rad_sigma_term,"
    "rad_spin_term";
constexpr const char* kFig3Header = "z_a_over_w,eta_rad,lorentz_model";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_field(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ReportIOError("csv line " + std::to_string(line) +
                        ": cannot parse field '" + s + "'");
  return v;
}

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           const char* header,
                                           std::size_t n_cols) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw ReportIOError("csv: missing or unexpected header row");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      row.push_back(parse_field(
          line.substr(pos, comma == std::string::npos ? comma : comma - pos),
          lineno));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (row.size() != n_cols)
      throw ReportIOError("csv line " + std::to_string(lineno) + ": expected " +
                          std::to_string(n_cols) + " fields, got " +
                          std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

// NaN (undefined eta) round-trips as JSON null.
json num(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

double from_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ReportIOError("json: expected number or null");
  return j.get<double>();
}

}  // namespace

std::string reports_to_csv(const std::vector<ForceReport>& rows) {
  std::string out = kReportHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt(r.z_a) + ',' + fmt(r.w) + ',' + fmt(r.v) + ',' + fmt(r.f_int) +
           ',' + fmt(r.f_rad) + ',' + fmt(r.f_int_additive) + ',' +
           fmt(r.f_rad_additive) + ',' + fmt(r.eta_int) + ',' +
           fmt(r.eta_rad) + ',' + fmt(r.rad_sigma_term) + ',' +
           fmt(r.rad_spin_term) + '\n';
  }
  return out;
}

std::vector<ForceReport> reports_from_csv(const std::string& text) {
  std::vector<ForceReport> out;
  for (const auto& f : parse_csv(text, kReportHeader, 11)) {
    ForceReport r;
    r.z_a = f[0];
    r.w = f[1];
    r.v = f[2];
    r.f_int = f[3];
    r.f_rad = f[4];
    r.f_int_additive = f[5];
    r.f_rad_additive = f[6];
    r.eta_int = f[7];
    r.eta_rad = f[8];
    r.rad_sigma_term = f[9];
    r.rad_spin_term = f[10];
    out.push_back(r);
  }
  return out;
}

std::string reports_to_json(const std::vector<ForceReport>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back(json{{"z_a", num(r.z_a)},
                       {"w", num(r.w)},
                       {"v", num(r.v)},
                       {"f_int", num(r.f_int)},
                       {"f_rad", num(r.f_rad)},
                       {"f_int_add", num(r.f_int_additive)},
                       {"f_rad_add", num(r.f_rad_additive)},
                       {"eta_int", num(r.eta_int)},
                       {"eta_rad", num(r.eta_rad)},
                       {"rad_sigma_term", num(r.rad_sigma_term)},
                       {"rad_spin_term", num(r.rad_spin_term)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<ForceReport> reports_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw ReportIOError("json: expected a top-level array");
  std::vector<ForceReport> out;
  for (const auto& j : arr) {
    ForceReport r;
    r.z_a = from_num(j.at("z_a"));
    r.w = from_num(j.at("w"));
    r.v = from_num(j.at("v"));
    r.f_int = from_num(j.at("f_int"));
    r.f_rad = from_num(j.at("f_rad"));
    r.f_int_additive = from_num(j.at("f_int_add"));
    r.f_rad_additive = from_num(j.at("f_rad_add"));
    r.eta_int = from_num(j.at("eta_int"));
    r.eta_rad = from_num(j.at("eta_rad"));
    r.rad_sigma_term = from_num(j.at("rad_sigma_term"));
    r.rad_spin_term = from_num(j.at("rad_spin_term"));
    out.push_back(r);
  }
  return out;
}

std::string fig3_to_csv(const std::vector<Fig3Row>& rows) {
  std::string out = kFig3Header;
  out += '\n';
  for (const auto& r : rows)
    out += fmt(r.z_a_over_w) + ',' + fmt(r.eta_rad) + ',' +
           fmt(r.lorentz_model) + '\n';
  return out;
}

std::vector<Fig3Row> fig3_from_csv(const std::string& text) {
  std::vector<Fig3Row> out;
  for (const auto& f : parse_csv(text, kFig3Header, 3))
    out.push_back(Fig3Row{f[0], f[1], f[2]});
  return out;
}

std::string fig3_to_json(const std::vector<Fig3Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back(json{{"z_a_over_w", num(r.z_a_over_w)},
                       {"eta_rad", num(r.eta_rad)},
                       {"lorentz_model", num(r.lorentz_model)}});
  return arr.dump(2) + "\n";
}

std::vector<Fig3Row> fig3_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw ReportIOError("json: expected a top-level array");
  std::vector<Fig3Row> out;
  for (const auto& j : arr)
    out.push_back(Fig3Row{from_num(j.at("z_a_over_w")),
                          from_num(j.at("eta_rad")),
                          from_num(j.at("lorentz_model"))});
  return out;
}

}  // namespace qfric
