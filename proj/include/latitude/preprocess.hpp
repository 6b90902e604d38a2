#pragma once

#include <string_view>

#include "latitude/matrix.hpp"

namespace latitude {

struct PreprocessSpec {
  bool column_mean_center_first = false;
  bool column_min_subtract = false;
  bool column_std_divide = false;
  /// Divide by the sample (n - 1) rather than population (n) deviation.
  bool sample_std = false;
};

/// Applied per column in the fixed order: mean-centre, subtract the
/// minimum, divide by the standard deviation. Zero-deviation columns are
/// left undivided.
DenseMatrix preprocess(const DenseMatrix& A, const PreprocessSpec& spec);

/// Comma-separated steps: meancenter, minsub, stddiv, stddiv-sample. Order
/// in the string does not matter. "none" or empty disables everything.
PreprocessSpec parse_preprocess(std::string_view steps);

}  // namespace latitude
