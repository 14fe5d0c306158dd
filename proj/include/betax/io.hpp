#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betax/eigen.hpp"
#include "betax/point_process.hpp"
#include "betax/theory.hpp"

namespace betax::io {

/// Fixed "%.17g" rendering so reruns are byte-identical.
std::string format_double(double v);

std::string convergence_csv(const std::vector<theory::ConvergenceRow>& rows);
std::string counts_csv(const pp::IntervalCountMatrix& matrix);
std::string maxima_csv(const std::vector<std::pair<std::uint64_t, double>>& maxima);
std::string eigen_csv(const std::vector<eigen::EigenExperimentRecord>& records);

void write_file(const std::string& path, const std::string& contents);

}  // namespace betax::io
