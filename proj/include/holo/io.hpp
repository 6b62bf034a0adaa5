// CSV emission with '#' metadata headers, and the canonical key=value run
// configuration used by the command-line tool.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "holo/models.hpp"

namespace holo {

std::string format_g17(double x);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  bool ok() const { return static_cast<bool>(f_); }

  void comment(const std::string& line);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw(const std::string& line);

 private:
  std::ofstream f_;
};

struct RunConfig {
  std::string command;
  ModelSpec spec;
  double theta_min = -2.0 * M_PI;
  double theta_max = 6.0 * M_PI;
  int grid = 1024;
  std::vector<double> taus;
  double eps = 0.0;
  std::string out_dir = ".";
  int jobs = 1;
  std::string only;
  bool plot_script = false;

  // canonical text form; parsing it back yields an identical canonical form
  std::string to_kv() const;
  static RunConfig from_kv(const std::string& text);
};

}  // namespace holo
