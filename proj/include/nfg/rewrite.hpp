#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nfg/graph.hpp"

namespace nfg {

/// Converts an arbitrary realization into an equivalent normal one.
///
/// An external variable in p > 1 factors keeps its id, gets p internal
/// replicas (one per slot, in slot order) and a degree-(p+1) equality
/// indicator with ports (X, X.1, ..., X.p). An internal variable in q > 2
/// slots is replaced by q replicas tied by a degree-q equality indicator.
/// Degree-2 internals and degree-1 externals are kept as they are; internal
/// variables of degree 0 or 1 and unused externals are rejected.
Nfg normalize(const GeneralRealization& realization);

/// Result of splitting an internal edge. `forward` is attached to the
/// edge's endpoint 0 (its first slot in factor/port order), `backward` to
/// endpoint 1.
struct EdgeSplit {
  Nfg graph;
  std::string forward;
  std::string backward;
};

/// Cuts internal edge `variable` into two external half-edges.
EdgeSplit cut_edge(const Nfg& nfg, std::string_view variable);

/// Joins two external half-edges over one alphabet into internal edge
/// `joined` (which may reuse either half's id). Inverse of cut_edge.
Nfg join_edges(const Nfg& nfg, std::string_view first, std::string_view second,
               std::string_view joined);

/// Replaces internal edge `variable` by forward -- Phi_=(3) -- backward and
/// exposes the original id as an external half-edge on the equality
/// indicator, whose ports are (forward, backward, variable).
EdgeSplit insert_tap(const Nfg& nfg, std::string_view variable);

/// Turns external `variable` internal by attaching an all-ones leaf.
Nfg sum_out_external(const Nfg& nfg, std::string_view variable);

/// Connected components (factors linked by internal edges), each with its
/// variables and factors in original order. Components are ordered by their
/// first factor; the prefactor stays with the first one.
std::vector<Nfg> components(const Nfg& nfg);

}  // namespace nfg
