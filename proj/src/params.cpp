#include "vog/params.hpp"

namespace vog {

Matrix& ParamStore::add(const std::string& name, int rows, int cols) {
  if (items_.count(name)) throw Error("internal", "duplicate parameter " + name);
  Param& p = items_[name];
  p.value = Matrix::Zero(rows, cols);
  p.grad = Matrix::Zero(rows, cols);
  return p.value;
}

Param& ParamStore::at(const std::string& name) {
  auto it = items_.find(name);
  if (it == items_.end()) throw Error("internal", "unknown parameter " + name);
  return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw Error("internal", "unknown parameter " + name);
  return it->second;
}

void ParamStore::zero_grads() {
  for (auto& [name, p] : items_) p.grad.setZero();
}

std::size_t ParamStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, p] : items_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void init_normal(Matrix& m, Rng& rng, double stddev) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = stddev * rng.next_normal();
}

void init_constant(Matrix& m, double value) { m.setConstant(value); }

}  // namespace vog
