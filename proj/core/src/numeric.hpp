#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace inar::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_sum_exp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  CompensatedSum acc;
  for (double t : terms) acc.add(std::exp(t - top));
  return top + std::log(acc.value());
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace inar::detail
