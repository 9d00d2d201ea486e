#include "nfg/builtin_factors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "nfg/errors.hpp"

namespace nfg {

namespace {

void require_vector_space(const Alphabet& a, std::string_view what) {
  if (!a.is_vector_space()) {
    throw ContractViolation(std::string(what) + " requires a vector-space alphabet, '" + a.id() +
                            "' is plain");
  }
}

}  // namespace

Tensor equality_indicator(const Alphabet& alphabet, std::size_t degree) {
  if (degree < 2) throw ContractViolation("equality indicator needs degree >= 2");
  std::vector<Alphabet> axes(degree, alphabet);
  Tensor t = Tensor::filled(std::move(axes), Complex(0.0));
  // Diagonal entries (a, a, ..., a) sit at a * (1 + q + ... + q^(d-1)).
  std::size_t step = 0;
  std::size_t place = 1;
  for (std::size_t i = 0; i < degree; ++i) {
    step += place;
    place *= alphabet.size();
  }
  for (std::size_t a = 0; a < alphabet.size(); ++a) t[a * step] = Complex(1.0);
  return t;
}

Tensor kronecker_delta(const Alphabet& alphabet) { return equality_indicator(alphabet, 2); }

Tensor sign_inverter(const Alphabet& alphabet) {
  require_vector_space(alphabet, "sign inverter");
  const std::size_t q = alphabet.size();
  Tensor t = Tensor::filled({alphabet, alphabet}, Complex(0.0));
  for (std::size_t a = 0; a < q; ++a) t[a * q + alphabet.negate(a)] = Complex(1.0);
  return t;
}

Tensor levi_civita(const Alphabet& alphabet) {
  if (alphabet.size() != 3) {
    throw ContractViolation("Levi-Civita symbol needs an alphabet of size 3, '" + alphabet.id() +
                            "' has size " + std::to_string(alphabet.size()));
  }
  Tensor t = Tensor::filled({alphabet, alphabet, alphabet}, Complex(0.0));
  constexpr std::array<std::array<std::size_t, 3>, 3> even{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
  for (const auto& [i, j, k] : even) {
    t[(i * 3 + j) * 3 + k] = Complex(1.0);
    t[(j * 3 + i) * 3 + k] = Complex(-1.0);
  }
  return t;
}

Complex root_of_unity(int p, long long exponent) {
  if (p < 1) throw ContractViolation("root of unity needs p >= 1");
  long long e = exponent % p;
  if (e < 0) e += p;
  if (e == 0) return Complex(1.0, 0.0);
  if (2 * e == p) return Complex(-1.0, 0.0);
  if (4 * e == p) return Complex(0.0, 1.0);
  if (4 * e == 3LL * p) return Complex(0.0, -1.0);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(p);
  return Complex(std::cos(angle), std::sin(angle));
}

Tensor fourier_factor(const Alphabet& alphabet) {
  require_vector_space(alphabet, "Fourier factor");
  const std::size_t q = alphabet.size();
  const int p = alphabet.characteristic();
  Tensor t = Tensor::filled({alphabet, alphabet}, Complex(0.0));
  for (std::size_t ah = 0; ah < q; ++ah) {
    for (std::size_t a = 0; a < q; ++a) t[ah * q + a] = root_of_unity(p, alphabet.inner_product(ah, a));
  }
  return t;
}

Tensor dense_vector(const Alphabet& alphabet, std::vector<Complex> values) {
  return Tensor({alphabet}, std::move(values));
}

Tensor dense_matrix(const Alphabet& rows, const Alphabet& cols, std::vector<Complex> values) {
  return Tensor({rows, cols}, std::move(values));
}

Tensor ones_vector(const Alphabet& alphabet) { return Tensor::filled({alphabet}, Complex(1.0)); }

Tensor diagonal_matrix(const Alphabet& alphabet, std::span<const Complex> diagonal) {
  if (diagonal.size() != alphabet.size()) throw ContractViolation("diagonal has wrong length");
  Tensor t = Tensor::filled({alphabet, alphabet}, Complex(0.0));
  for (std::size_t a = 0; a < diagonal.size(); ++a) t[a * alphabet.size() + a] = diagonal[a];
  return t;
}

std::span<const std::string_view> builtin_kinds() {
  static constexpr std::array<std::string_view, 6> kinds{
      "equality", "delta", "sign_inverter", "levi_civita", "fourier", "ones"};
  return kinds;
}

Tensor make_builtin(std::string_view kind, std::span<const Alphabet> ports) {
  auto arity = [&](std::size_t expected) {
    if (ports.size() != expected) {
      throw ContractViolation("builtin '" + std::string(kind) + "' takes " +
                              std::to_string(expected) + " ports, got " +
                              std::to_string(ports.size()));
    }
  };
  auto same_alphabet = [&] {
    for (const auto& a : ports) {
      if (!(a == ports[0])) {
        throw ContractViolation("builtin '" + std::string(kind) +
                                "' requires all ports over one alphabet");
      }
    }
  };
  if (kind == "equality") {
    if (ports.size() < 2) {
      throw ContractViolation("builtin 'equality' takes at least 2 ports, got " +
                              std::to_string(ports.size()));
    }
    same_alphabet();
    return equality_indicator(ports[0], ports.size());
  }
  if (kind == "delta") {
    arity(2);
    same_alphabet();
    return kronecker_delta(ports[0]);
  }
  if (kind == "sign_inverter") {
    arity(2);
    same_alphabet();
    return sign_inverter(ports[0]);
  }
  if (kind == "levi_civita") {
    arity(3);
    same_alphabet();
    return levi_civita(ports[0]);
  }
  if (kind == "fourier") {
    arity(2);
    same_alphabet();
    return fourier_factor(ports[0]);
  }
  if (kind == "ones") {
    arity(1);
    return ones_vector(ports[0]);
  }
  throw ContractViolation("unknown builtin kind '" + std::string(kind) + "'");
}

}  // namespace nfg
