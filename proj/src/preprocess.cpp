#include "latitude/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latitude/errors.hpp"

namespace latitude {

DenseMatrix preprocess(const DenseMatrix& A, const PreprocessSpec& spec) {
  DenseMatrix out = A;
  if (out.empty()) return out;
  const std::size_t n = out.rows();
  for (std::size_t j = 0; j < out.cols(); ++j) {
    std::vector<double> col = out.column(j);
    if (spec.column_mean_center_first) {
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(n);
      for (double& v : col) v -= mean;
    }
    if (spec.column_min_subtract) {
      const double lo = *std::min_element(col.begin(), col.end());
      for (double& v : col) v -= lo;
    }
    if (spec.column_std_divide) {
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (double v : col) ss += (v - mean) * (v - mean);
      const double denom = spec.sample_std && n > 1 ? static_cast<double>(n - 1)
                                                    : static_cast<double>(n);
      const double sd = std::sqrt(ss / denom);
      if (sd > 0.0) {
        for (double& v : col) v /= sd;
      }
    }
    out.set_column(j, col);
  }
  return out;
}

PreprocessSpec parse_preprocess(std::string_view steps) {
  PreprocessSpec spec;
  while (!steps.empty()) {
    const auto comma = steps.find(',');
    const std::string_view step = steps.substr(0, comma);
    if (step == "meancenter") {
      spec.column_mean_center_first = true;
    } else if (step == "minsub") {
      spec.column_min_subtract = true;
    } else if (step == "stddiv") {
      spec.column_std_divide = true;
    } else if (step == "stddiv-sample") {
      spec.column_std_divide = true;
      spec.sample_std = true;
    } else if (step != "none" && !step.empty()) {
      throw InvalidInput("unknown preprocessing step '" + std::string(step) + "'");
    }
    if (comma == std::string_view::npos) break;
    steps.remove_prefix(comma + 1);
  }
  return spec;
}

}  // namespace latitude
