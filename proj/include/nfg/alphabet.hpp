#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nfg {

/// F_p^k structure of an alphabet; elements are base-p digit vectors of
/// length k, least-significant digit first.
struct FieldStructure {
  int p = 2;
  int k = 1;
  friend bool operator==(const FieldStructure&, const FieldStructure&) = default;
};

/// Finite value domain {0, ..., size-1}, optionally a vector space over a
/// prime field. The dual alphabet of a vector-space alphabet is identified
/// with the alphabet itself through the digit coordinates.
class Alphabet {
 public:
  Alphabet(std::string id, std::size_t size);
  Alphabet(std::string id, FieldStructure field);

  const std::string& id() const { return id_; }
  std::size_t size() const { return size_; }
  bool is_vector_space() const { return field_.has_value(); }
  const std::optional<FieldStructure>& field() const { return field_; }

  // The members below require a vector-space alphabet.
  int characteristic() const;
  int dimension() const;
  std::vector<int> digits(std::size_t value) const;
  std::size_t from_digits(std::span<const int> digits) const;
  /// Additive inverse, digitwise mod p.
  std::size_t negate(std::size_t value) const;
  /// <a, b> = sum_t a_t * b_t mod p.
  int inner_product(std::size_t a, std::size_t b) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  const FieldStructure& require_field() const;

  std::string id_;
  std::size_t size_;
  std::optional<FieldStructure> field_;
};

bool is_prime(int n);

}  // namespace nfg
