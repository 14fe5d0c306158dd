#pragma once

#include <cmath>
#include <limits>

namespace betax {

// Neumaier-compensated accumulator.  The error stays O(eps) independent of
// the number of addends, and summing a fixed chunk layout is bit-stable.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  void add(const NeumaierSum& o) {
    add(o.sum);
    comp += o.comp;
  }

  double value() const { return sum + comp; }
};

// Streaming log-sum-exp; value_log() = log(sum_i exp(x_i)).
struct LogSumExp {
  double max_log = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;

  void add(double lx) {
    if (lx == -std::numeric_limits<double>::infinity()) return;
    if (lx <= max_log) {
      scaled += std::exp(lx - max_log);
    } else {
      scaled = scaled * std::exp(max_log - lx) + 1.0;
      max_log = lx;
    }
  }

  void add(const LogSumExp& o) {
    if (o.scaled == 0.0) return;
    if (o.max_log <= max_log) {
      scaled += o.scaled * std::exp(o.max_log - max_log);
    } else {
      scaled = scaled * std::exp(max_log - o.max_log) + o.scaled;
      max_log = o.max_log;
    }
  }

  double value_log() const {
    if (scaled <= 0.0) return -std::numeric_limits<double>::infinity();
    return max_log + std::log(scaled);
  }
};

}  // namespace betax
