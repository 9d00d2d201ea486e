#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nfg/alphabet.hpp"
#include "nfg/tensor.hpp"

namespace nfg {

/// Phi_=: 1 where all `degree` indices agree, 0 elsewhere. degree >= 2.
Tensor equality_indicator(const Alphabet& alphabet, std::size_t degree);

/// Kronecker delta, i.e. the degree-2 equality indicator.
Tensor kronecker_delta(const Alphabet& alphabet);

/// Phi_~(a, a') = 1 iff a = -a' in the vector space.
Tensor sign_inverter(const Alphabet& alphabet);

/// Totally antisymmetric symbol on {0,1,2}^3; `alphabet` must have size 3.
Tensor levi_civita(const Alphabet& alphabet);

/// Unnormalized Fourier kernel omega^<a_hat, a> with omega = exp(2 pi i / p).
/// Ports are (a_hat, a); the matrix is symmetric.
Tensor fourier_factor(const Alphabet& alphabet);

/// omega^e for the primitive p-th root of unity. The exponent is reduced
/// mod p in integer arithmetic before conversion, so equal exponents always
/// give bit-identical values.
Complex root_of_unity(int p, long long exponent);

Tensor dense_vector(const Alphabet& alphabet, std::vector<Complex> values);
Tensor dense_matrix(const Alphabet& rows, const Alphabet& cols, std::vector<Complex> values);

/// All-ones vector; attaching it to a half-edge sums that variable out.
Tensor ones_vector(const Alphabet& alphabet);

/// Diagonal matrix with `diagonal` on its diagonal.
Tensor diagonal_matrix(const Alphabet& alphabet, std::span<const Complex> diagonal);

/// Names of the builtin kinds accepted by `make_builtin`.
std::span<const std::string_view> builtin_kinds();

/// Builds a builtin factor table for the given port alphabets, enforcing the
/// kind's arity rules. Throws ContractViolation on unknown kinds, wrong arity
/// or unsuitable alphabets.
Tensor make_builtin(std::string_view kind, std::span<const Alphabet> ports);

}  // namespace nfg
