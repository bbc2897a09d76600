#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gaussdev/cli.hpp"

namespace gaussdev::cli {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  if (v == 0.0) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

json probability(double v, double log10_value) {
  if (std::fabs(v) < 1e-300 && std::isfinite(log10_value)) return json{{"log10_value", number(log10_value)}};
  return number(v);
}

std::string dump_json(const Report& report) {
  json doc{{"payload", report.payload}, {"meta", report.meta}};
  return doc.dump(2) + "\n";
}

namespace {

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_' || ch == '-')) ch = '_';
  return s;
}

}  // namespace

void emit(const Report& report, const std::string& format, const std::string& path) {
  if (format == "json") {
    if (path.empty() || path == "-") {
      const auto text = dump_json(report);
      std::fwrite(text.data(), 1, text.size(), stdout);
      return;
    }
    write_file(path, dump_json(report));
    return;
  }
  if (format != "csv") throw std::invalid_argument("unknown output format '" + format + "'");
  if (path.empty() || path == "-") throw std::invalid_argument("csv output needs --out <stem>");
  std::filesystem::path stem(path);
  if (stem.extension() == ".csv" || stem.extension() == ".json") stem.replace_extension();
  for (const auto& c : report.curves) {
    std::ostringstream os;
    os << "threshold,p_hat,ci_low,ci_high,bound,margin\n";
    for (std::size_t i = 0; i < c.threshold.size(); ++i)
      os << csv_number(c.threshold[i]) << ',' << csv_number(c.p_hat[i]) << ',' << csv_number(c.ci_low[i])
         << ',' << csv_number(c.ci_high[i]) << ',' << csv_number(c.bound[i]) << ',' << csv_number(c.margin[i])
         << '\n';
    write_file(stem.string() + "." + sanitize(c.name) + ".csv", os.str());
  }
}

}  // namespace gaussdev::cli
