#include "nfg/tensor.hpp"

#include <string>
#include <utility>

#include "nfg/errors.hpp"

namespace nfg {

std::size_t volume(std::span<const Alphabet> axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

bool next_index(std::vector<std::size_t>& index, std::span<const std::size_t> shape) {
  for (std::size_t pos = index.size(); pos-- > 0;) {
    if (++index[pos] < shape[pos]) return true;
    index[pos] = 0;
  }
  return false;
}

Tensor::Tensor(std::vector<Alphabet> axes, std::vector<Complex> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  const std::size_t expected = volume(axes_);
  if (values_.size() != expected) {
    throw ContractViolation("tensor has " + std::to_string(values_.size()) +
                            " values, shape requires " + std::to_string(expected));
  }
}

Tensor Tensor::filled(std::vector<Alphabet> axes, Complex value) {
  const std::size_t n = volume(axes);
  return Tensor(std::move(axes), std::vector<Complex>(n, value));
}

std::vector<std::size_t> Tensor::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes_.size());
  for (const auto& a : axes_) s.push_back(a.size());
  return s;
}

std::size_t Tensor::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t i = axes_.size(); i-- > axis + 1;) s *= axes_[i].size();
  return s;
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw ContractViolation("multi-index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= axes_[i].size()) throw ContractViolation("multi-index out of range");
    flat = flat * axes_[i].size() + index[i];
  }
  return flat;
}

std::vector<std::size_t> Tensor::multi_index(std::size_t flat) const {
  if (flat >= values_.size()) throw ContractViolation("flat index out of range");
  std::vector<std::size_t> index(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    index[i] = flat % axes_[i].size();
    flat /= axes_[i].size();
  }
  return index;
}

Tensor Tensor::permuted(std::span<const std::size_t> order) const {
  if (order.size() != axes_.size()) throw ContractViolation("permutation has wrong rank");
  std::vector<bool> seen(axes_.size(), false);
  std::vector<Alphabet> axes;
  axes.reserve(order.size());
  for (auto o : order) {
    if (o >= axes_.size() || seen[o]) throw ContractViolation("not a permutation");
    seen[o] = true;
    axes.push_back(axes_[o]);
  }
  Tensor out(std::move(axes), std::vector<Complex>(values_.size()));
  const auto shape = out.shape();
  std::vector<std::size_t> idx(order.size(), 0);
  std::vector<std::size_t> src(order.size(), 0);
  std::size_t flat = 0;
  do {
    for (std::size_t i = 0; i < order.size(); ++i) src[order[i]] = idx[i];
    out.values_[flat++] = at(src);
  } while (next_index(idx, shape));
  return out;
}

}  // namespace nfg
