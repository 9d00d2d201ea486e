#pragma once

#include <span>
#include <string>
#include <vector>

#include "nfg/graph.hpp"
#include "nfg/semiring.hpp"
#include "nfg/tensor.hpp"

namespace nfg {

/// Partition function as a function of the external variables. Axis i of
/// `table` belongs to `variables[i]`; externals appear in declaration order.
struct ExternalFunction {
  std::vector<std::string> variables;
  Tensor table;

  /// Same function with axes reordered to follow `order` (a permutation of
  /// `variables`).
  ExternalFunction aligned_to(std::span<const std::string> order) const;
};

/// Brute-force partition function: for every external assignment, the
/// semiring sum over all internal configurations of the product of factor
/// values, times the prefactor. This is the reference every other algorithm
/// is checked against.
ExternalFunction eval_external(const Nfg& nfg, Semiring semiring = Semiring::sum_product());

/// eval_external for a graph without external variables.
Complex eval_scalar(const Nfg& nfg, Semiring semiring = Semiring::sum_product());

struct LinearTerm {
  Complex coefficient;
  Nfg graph;
};

/// Sum of coefficient * Z(term) over sum-product terms sharing one external
/// signature (same ids and alphabets, any order). The result follows the
/// first term's external order.
ExternalFunction eval_linear_combination(std::span<const LinearTerm> terms);

}  // namespace nfg
