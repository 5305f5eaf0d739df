#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace vog {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

// Additive score mask; avoids NaNs from arithmetic on true infinities.
inline constexpr double kNegInf = -1e30;

/// Error with a stable one-word category, used verbatim by the CLI
/// ("error: <category>: <detail>").
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& detail)
      : std::runtime_error(detail), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

inline Error parse_error(const std::string& d) { return Error("parse", d); }
inline Error io_error(const std::string& d) { return Error("io", d); }
inline Error config_error(const std::string& d) { return Error("config", d); }
inline Error geometry_error(const std::string& d) { return Error("geometry", d); }
inline Error shape_error(const std::string& d) { return Error("shape", d); }

// Fixed-precision float formatting for summary lines and reports.
inline std::string fmt_fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace vog
