#pragma once

#include <array>
#include <span>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nfg/graph.hpp"
#include "nfg/sum_product.hpp"

namespace nfg {

enum class TermKind { kZeroOrder, kLooseEnd, kGeneralizedLoop };

std::string_view to_string(TermKind kind);

/// One component of the loop expansion. Bit j of `subset` is the selector of
/// the j-th internal edge in declaration order.
struct LoopTerm {
  std::uint64_t subset = 0;
  Complex value;
  TermKind kind = TermKind::kZeroOrder;
};

/// Per-edge matrices of the binary loop expansion, built from the forward
/// message mu> (emitted by endpoint 0) and backward message mu< (emitted by
/// endpoint 1):
///
///   U = [ mu<(0)  -mu>(1) ]   V = [  mu>(0)  mu>(1) ]   S = I / delta
///       [ mu<(1)   mu>(0) ]       [ -mu<(1)  mu<(0) ]
///
/// with delta = mu>(0) mu<(0) + mu>(1) mu<(1), so U S V = I. U sits on the
/// endpoint-0 side. Row-major 2x2 arrays.
struct LoopEdge {
  std::array<Complex, 4> u;
  std::array<Complex, 4> v;
  Complex delta;
};

/// Throws SingularEdge if |delta| <= 1e-12.
LoopEdge loop_edge(std::string_view edge, std::span<const Complex> forward,
                   std::span<const Complex> backward);

/// Classification from the selector-1 edges alone: a vertex's effective
/// degree counts its slots on selected edges (a selected self-loop counts
/// twice).
TermKind classify_subset(const Nfg& nfg, std::uint64_t subset);

/// All 2^n terms, ordered by subset. Requires binary alphabets throughout,
/// no externals, n <= 30 and a message in each direction on every edge.
/// Terms sum to the partition function for any such messages.
std::vector<LoopTerm> loop_series(const Nfg& nfg, const MessageState& state);

/// The component graph of one subset as an explicit NFG: every edge becomes
/// U - e_s e_s^T / delta - V. eval_scalar of it equals that term's value.
Nfg loop_component(const Nfg& nfg, const MessageState& state, std::uint64_t subset);

}  // namespace nfg
