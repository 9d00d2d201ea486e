#include "nfg/alphabet.hpp"

#include <limits>

#include "nfg/errors.hpp"

namespace nfg {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Alphabet::Alphabet(std::string id, std::size_t size) : id_(std::move(id)), size_(size) {
  if (size_ == 0) throw ContractViolation("alphabet '" + id_ + "' must have size >= 1");
}

Alphabet::Alphabet(std::string id, FieldStructure field) : id_(std::move(id)), size_(1) {
  if (!is_prime(field.p)) {
    throw ContractViolation("alphabet '" + id_ + "': characteristic " + std::to_string(field.p) +
                            " is not prime");
  }
  if (field.k < 1) throw ContractViolation("alphabet '" + id_ + "': dimension must be >= 1");
  for (int t = 0; t < field.k; ++t) {
    if (size_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(field.p)) {
      throw ContractViolation("alphabet '" + id_ + "': p^k overflows");
    }
    size_ *= static_cast<std::size_t>(field.p);
  }
  field_ = field;
}

const FieldStructure& Alphabet::require_field() const {
  if (!field_) throw ContractViolation("alphabet '" + id_ + "' has no vector-space structure");
  return *field_;
}

int Alphabet::characteristic() const { return require_field().p; }

int Alphabet::dimension() const { return require_field().k; }

std::vector<int> Alphabet::digits(std::size_t value) const {
  const auto& f = require_field();
  std::vector<int> out(static_cast<std::size_t>(f.k));
  for (auto& d : out) {
    d = static_cast<int>(value % static_cast<std::size_t>(f.p));
    value /= static_cast<std::size_t>(f.p);
  }
  return out;
}

std::size_t Alphabet::from_digits(std::span<const int> digits) const {
  const auto& f = require_field();
  if (digits.size() != static_cast<std::size_t>(f.k)) {
    throw ContractViolation("alphabet '" + id_ + "': digit vector has wrong length");
  }
  std::size_t value = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    value = value * static_cast<std::size_t>(f.p) + static_cast<std::size_t>(*it);
  }
  return value;
}

std::size_t Alphabet::negate(std::size_t value) const {
  const auto& f = require_field();
  std::size_t out = 0;
  std::size_t place = 1;
  const auto p = static_cast<std::size_t>(f.p);
  for (int t = 0; t < f.k; ++t) {
    const std::size_t d = value % p;
    value /= p;
    out += ((p - d) % p) * place;
    place *= p;
  }
  return out;
}

int Alphabet::inner_product(std::size_t a, std::size_t b) const {
  const auto& f = require_field();
  const auto p = static_cast<std::size_t>(f.p);
  std::size_t acc = 0;
  for (int t = 0; t < f.k; ++t) {
    acc = (acc + (a % p) * (b % p)) % p;
    a /= p;
    b /= p;
  }
  return static_cast<int>(acc);
}

}  // namespace nfg
