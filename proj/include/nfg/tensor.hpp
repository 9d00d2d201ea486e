#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nfg/alphabet.hpp"
#include "nfg/semiring.hpp"

namespace nfg {

/// Dense array of semiring values indexed by one alphabet per axis.
/// Layout is row-major with the last axis varying fastest. A rank-0 tensor
/// holds exactly one value.
class Tensor {
 public:
  Tensor() : values_(1, Complex(0.0)) {}
  Tensor(std::vector<Alphabet> axes, std::vector<Complex> values);

  static Tensor filled(std::vector<Alphabet> axes, Complex value);
  static Tensor scalar(Complex value) { return Tensor({}, {value}); }

  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<Alphabet>& axes() const { return axes_; }
  std::vector<std::size_t> shape() const;

  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& mutable_values() { return values_; }

  Complex operator[](std::size_t flat) const { return values_[flat]; }
  Complex& operator[](std::size_t flat) { return values_[flat]; }
  Complex at(std::span<const std::size_t> index) const { return values_[flat_index(index)]; }

  /// Stride of `axis` in the flat layout.
  std::size_t stride(std::size_t axis) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;

  /// Tensor with axes reordered: result axis i is this tensor's axis order[i].
  Tensor permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<Alphabet> axes_;
  std::vector<Complex> values_;
};

/// Product of alphabet sizes; 1 for an empty list.
std::size_t volume(std::span<const Alphabet> axes);

/// Advances a row-major multi-index (last position fastest). Returns false
/// after wrapping past the final index.
bool next_index(std::vector<std::size_t>& index, std::span<const std::size_t> shape);

}  // namespace nfg
