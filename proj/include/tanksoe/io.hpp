#ifndef TANKSOE_IO_HPP
#define TANKSOE_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "params.hpp"

namespace tanksoe {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run settings that may appear in a config file next to model parameters.
struct RunSettings {
  std::uint64_t seed = 12345;
  int order = 1;
  std::string shock = "eps_R";
  double size = 1.0;
  int horizon = 20;
  int periods = 20000;
  int burn_in = 1000;
  std::vector<double> grid_tau;
  std::vector<double> grid_phis;
  bool conditional = false;
  bool refine = false;
};

inline std::string trim(const std::string& s)
{
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v)
{
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

// Applies one key=value pair. Unknown keys are an error.
inline void apply_setting(ModelParameters& p, RunSettings& r, const std::string& key, const std::string& val)
{
  for (const auto& f : param_fields()) {
    if (key == f.name) {
      p.*(f.ptr) = parse_double(key, val);
      return;
    }
  }
  if (key == "fiscal_scale") {
    if (val == "level") p.fiscal_scale = FiscalScale::level;
    else if (val == "revenue") p.fiscal_scale = FiscalScale::revenue;
    else throw ConfigError("fiscal_scale must be 'level' or 'revenue'");
  } else if (key == "seed") {
    try {
      size_t pos = 0;
      r.seed = std::stoull(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw ConfigError("bad seed: " + val);
    }
  } else if (key == "order") {
    r.order = static_cast<int>(parse_double(key, val));
  } else if (key == "shock") {
    r.shock = val;
  } else if (key == "size") {
    r.size = parse_double(key, val);
  } else if (key == "horizon") {
    r.horizon = static_cast<int>(parse_double(key, val));
  } else if (key == "periods") {
    r.periods = static_cast<int>(parse_double(key, val));
  } else if (key == "burn_in") {
    r.burn_in = static_cast<int>(parse_double(key, val));
  } else if (key == "grid_tau") {
    r.grid_tau = parse_list(key, val);
  } else if (key == "grid_phis") {
    r.grid_phis = parse_list(key, val);
  } else if (key == "welfare") {
    if (val == "conditional") r.conditional = true;
    else if (val == "unconditional") r.conditional = false;
    else throw ConfigError("welfare must be 'conditional' or 'unconditional'");
  } else if (key == "refine") {
    r.refine = parse_double(key, val) != 0.0;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline void load_config(std::istream& in, ModelParameters& p, RunSettings& r)
{
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(p, r, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(const std::string& path, ModelParameters& p, RunSettings& r)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  load_config(in, p, r);
}

inline std::string fmt12(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt17(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_list(const std::vector<double>& v)
{
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

// Full parameter set plus run settings in config syntax; reading it back
// reproduces the run.
inline void write_config(std::ostream& out, const ModelParameters& p, const RunSettings& r)
{
  for (const auto& f : param_fields()) out << f.name << " = " << fmt17(p.*(f.ptr)) << "\n";
  out << "fiscal_scale = " << (p.fiscal_scale == FiscalScale::level ? "level" : "revenue") << "\n";
  out << "seed = " << r.seed << "\n";
  out << "order = " << r.order << "\n";
  out << "shock = " << r.shock << "\n";
  out << "size = " << fmt17(r.size) << "\n";
  out << "horizon = " << r.horizon << "\n";
  out << "periods = " << r.periods << "\n";
  out << "burn_in = " << r.burn_in << "\n";
  if (!r.grid_tau.empty()) out << "grid_tau = " << join_list(r.grid_tau) << "\n";
  if (!r.grid_phis.empty()) out << "grid_phis = " << join_list(r.grid_phis) << "\n";
  out << "welfare = " << (r.conditional ? "conditional" : "unconditional") << "\n";
  out << "refine = " << (r.refine ? 1 : 0) << "\n";
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path)
  {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }
  void comment(const std::string& text) { out_ << "# " << text << "\n"; }
  void header(const std::vector<std::string>& cols) { row_strings(cols); }
  void row_strings(const std::vector<std::string>& cols)
  {
    for (size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& vals)
  {
    for (size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << fmt12(vals[i]);
    out_ << "\n";
  }
  void labeled_row(const std::string& label, const std::vector<double>& vals)
  {
    out_ << label;
    for (double v : vals) out_ << "," << fmt12(v);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace tanksoe

#endif
