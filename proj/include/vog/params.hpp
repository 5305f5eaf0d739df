#pragma once

#include <map>
#include <string>
#include <vector>

#include "vog/common.hpp"
#include "vog/rng.hpp"

namespace vog {

/// One named trainable array with its gradient and optimizer moments.
struct Param {
  Matrix value;
  Matrix grad;
  Matrix m;  // Adam first moment, allocated lazily
  Matrix v;  // Adam second moment
};

/// Name -> parameter map. Iteration order is the sorted name order, which
/// makes optimizer sweeps and serialization deterministic.
class ParamStore {
 public:
  Matrix& add(const std::string& name, int rows, int cols);
  bool has(const std::string& name) const { return items_.count(name) != 0; }

  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  Matrix& value(const std::string& name) { return at(name).value; }
  const Matrix& value(const std::string& name) const { return at(name).value; }
  Matrix& grad(const std::string& name) { return at(name).grad; }

  void zero_grads();
  std::size_t parameter_count() const;

  std::map<std::string, Param>& items() { return items_; }
  const std::map<std::string, Param>& items() const { return items_; }

 private:
  std::map<std::string, Param> items_;
};

// Initialization helpers; all draw from the caller's RNG in entry order.
void init_normal(Matrix& m, Rng& rng, double stddev);
void init_constant(Matrix& m, double value);

}  // namespace vog
