#include "holo/io.hpp"

#include <sstream>

namespace holo {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : f_(path) {}

void CsvWriter::comment(const std::string& line) { f_ << "# " << line << "\n"; }

void CsvWriter::columns(const std::vector<std::string>& names) {
  f_ << "# columns:";
  for (const auto& n : names) f_ << " " << n;
  f_ << "\n";
  for (size_t i = 0; i < names.size(); ++i) f_ << (i ? "," : "") << names[i];
  f_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) f_ << (i ? "," : "") << format_g17(values[i]);
  f_ << "\n";
}

void CsvWriter::raw(const std::string& line) { f_ << line << "\n"; }

std::string RunConfig::to_kv() const {
  std::ostringstream os;
  os << "command=" << command << "\n";
  os << holo::to_kv(spec);
  os << "theta_min=" << format_g17(theta_min) << "\n";
  os << "theta_max=" << format_g17(theta_max) << "\n";
  os << "grid=" << grid << "\n";
  os << "taus=";
  for (size_t i = 0; i < taus.size(); ++i) os << (i ? " " : "") << format_g17(taus[i]);
  os << "\n";
  os << "eps=" << format_g17(eps) << "\n";
  os << "out=" << out_dir << "\n";
  os << "jobs=" << jobs << "\n";
  os << "only=" << only << "\n";
  os << "plot_script=" << (plot_script ? 1 : 0) << "\n";
  return os.str();
}

RunConfig RunConfig::from_kv(const std::string& text) {
  RunConfig cfg;
  cfg.spec = spec_from_kv(text);  // consumes the model keys, ignores the rest
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "command") cfg.command = val;
    else if (key == "theta_min") cfg.theta_min = std::stod(val);
    else if (key == "theta_max") cfg.theta_max = std::stod(val);
    else if (key == "grid") cfg.grid = std::stoi(val);
    else if (key == "taus") {
      std::istringstream ts(val);
      double x;
      cfg.taus.clear();
      while (ts >> x) cfg.taus.push_back(x);
    } else if (key == "eps") cfg.eps = std::stod(val);
    else if (key == "out") cfg.out_dir = val;
    else if (key == "jobs") cfg.jobs = std::stoi(val);
    else if (key == "only") cfg.only = val;
    else if (key == "plot_script") cfg.plot_script = (val == "1");
  }
  return cfg;
}

}  // namespace holo
