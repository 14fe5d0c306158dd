#include "betax/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace betax::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string convergence_csv(const std::vector<theory::ConvergenceRow>& rows) {
  std::string out = "n,x,S_exact,S_low,S_high,G,ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.x);
    out += ',';
    out += format_double(r.s_exact);
    out += ',';
    out += format_double(r.s_low);
    out += ',';
    out += format_double(r.s_high);
    out += ',';
    out += format_double(r.g_limit);
    out += ',';
    out += format_double(r.ratio);
    out += '\n';
  }
  return out;
}

std::string counts_csv(const pp::IntervalCountMatrix& matrix) {
  std::string out = "replica,bin_index,count\n";
  for (std::size_t r = 0; r < matrix.counts.size(); ++r) {
    for (std::size_t l = 0; l < matrix.counts[r].size(); ++l) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(l);
      out += ',';
      out += std::to_string(matrix.counts[r][l]);
      out += '\n';
    }
  }
  return out;
}

std::string maxima_csv(
    const std::vector<std::pair<std::uint64_t, double>>& maxima) {
  std::string out = "replica,max_value\n";
  for (const auto& [rep, value] : maxima) {
    out += std::to_string(rep);
    out += ',';
    out += format_double(value);
    out += '\n';
  }
  return out;
}

std::string eigen_csv(const std::vector<eigen::EigenExperimentRecord>& records) {
  std::string out = "n,replica,lambda_max,lower,upper,ratio\n";
  for (const auto& r : records) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.replica);
    out += ',';
    out += format_double(r.lambda_max);
    out += ',';
    out += format_double(r.rayleigh_lower);
    out += ',';
    out += format_double(r.gershgorin_upper);
    out += ',';
    out += format_double(r.ratio);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw std::runtime_error("short write to " + path);
}

}  // namespace betax::io
