#include "nfg/loop_series.hpp"

#include <cmath>

#include "nfg/errors.hpp"
#include "nfg/holographic.hpp"
#include "nfg/parallel.hpp"

namespace nfg {

namespace {

constexpr std::size_t kMaxEdges = 30;

struct Port {
  std::size_t edge;
  bool first;  // endpoint 0 of its edge
};

// Binary graph seen edge by edge: for every factor, which edge each port is
// on and whether it is that edge's endpoint 0.
struct Layout {
  std::vector<std::string> edges;
  std::vector<std::vector<Port>> ports;
};

Layout layout_of(const Nfg& nfg) {
  require_valid(nfg);
  for (const auto& var : nfg.variables()) {
    if (var.is_external()) {
      throw ContractViolation("loop expansion needs a graph without externals, found '" + var.id +
                              "'");
    }
    if (nfg.alphabet_of(var.id).size() != 2) {
      throw ContractViolation("loop expansion needs binary alphabets, '" + var.id + "' has size " +
                              std::to_string(nfg.alphabet_of(var.id).size()));
    }
  }
  Layout out;
  out.edges = nfg.internal_ids();
  if (out.edges.size() > kMaxEdges) {
    throw ContractViolation("loop expansion supports at most " + std::to_string(kMaxEdges) +
                            " edges, got " + std::to_string(out.edges.size()));
  }
  const Incidence inc(nfg);
  out.ports.resize(nfg.factors().size());
  for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
    out.ports[f].resize(nfg.factors()[f].ports.size());
  }
  for (std::size_t j = 0; j < out.edges.size(); ++j) {
    const auto& slots = inc.slots(*nfg.variable_index(out.edges[j]));
    out.ports[slots[0].factor][slots[0].port] = Port{j, true};
    out.ports[slots[1].factor][slots[1].port] = Port{j, false};
  }
  return out;
}

std::vector<LoopEdge> loop_edges(const Layout& layout, const MessageState& state) {
  if (!state.semiring().is_sum_product()) {
    throw ContractViolation("loop expansion needs sum-product messages");
  }
  std::vector<LoopEdge> out;
  out.reserve(layout.edges.size());
  for (const auto& e : layout.edges) {
    if (!state.has_edge(e)) {
      throw ContractViolation("message state has no edge '" + e + "'");
    }
    out.push_back(loop_edge(e, state.get(e, Direction::kForward), state.get(e, Direction::kBackward)));
  }
  return out;
}

// Port vector for selector s: column s of U at endpoint 0, row s of V at
// endpoint 1.
Complex port_entry(const LoopEdge& e, bool first, unsigned s, std::size_t x) {
  return first ? e.u[x * 2 + s] : e.v[s * 2 + x];
}

// table[p] for every selector pattern p over the factor's ports (row-major,
// last port fastest): the factor contracted with the selected port vectors.
std::vector<Complex> pattern_table(const Factor& factor, const std::vector<Port>& ports,
                                   const std::vector<LoopEdge>& edges) {
  std::vector<Complex> values = factor.table.values();
  const std::size_t d = ports.size();
  for (std::size_t axis = 0; axis < d; ++axis) {
    const std::size_t inner = std::size_t{1} << (d - axis - 1);
    const std::size_t outer = values.size() / (2 * inner);
    const auto& e = edges[ports[axis].edge];
    const bool first = ports[axis].first;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = o * 2 * inner + in;
        const Complex x0 = values[base];
        const Complex x1 = values[base + inner];
        for (unsigned s = 0; s < 2; ++s) {
          values[base + s * inner] = port_entry(e, first, s, 0) * x0 + port_entry(e, first, s, 1) * x1;
        }
      }
    }
  }
  return values;
}

TermKind classify(const Layout& layout, std::uint64_t subset) {
  if (subset == 0) return TermKind::kZeroOrder;
  for (const auto& ports : layout.ports) {
    int degree = 0;
    for (const auto& p : ports) degree += (subset >> p.edge) & 1U;
    if (degree == 1) return TermKind::kLooseEnd;
  }
  return TermKind::kGeneralizedLoop;
}

}  // namespace

std::string_view to_string(TermKind kind) {
  switch (kind) {
    case TermKind::kZeroOrder: return "zero_order";
    case TermKind::kLooseEnd: return "loose_end";
    case TermKind::kGeneralizedLoop: return "generalized_loop";
  }
  return "?";
}

LoopEdge loop_edge(std::string_view edge, std::span<const Complex> forward,
                   std::span<const Complex> backward) {
  if (forward.size() != 2 || backward.size() != 2) {
    throw ContractViolation("loop edge '" + std::string(edge) + "' needs binary messages");
  }
  LoopEdge e;
  e.delta = forward[0] * backward[0] + forward[1] * backward[1];
  if (std::abs(e.delta) <= 1e-12) {
    throw SingularEdge(std::string(edge), "messages on '" + std::string(edge) +
                                              "' are orthogonal (delta = 0)");
  }
  e.u = {backward[0], -forward[1], backward[1], forward[0]};
  e.v = {forward[0], forward[1], -backward[1], backward[0]};
  return e;
}

TermKind classify_subset(const Nfg& nfg, std::uint64_t subset) {
  return classify(layout_of(nfg), subset);
}

std::vector<LoopTerm> loop_series(const Nfg& nfg, const MessageState& state) {
  const Layout layout = layout_of(nfg);
  const auto edges = loop_edges(layout, state);
  const std::size_t n = edges.size();

  Complex scale = nfg.prefactor().value_or(Complex(1.0));
  for (const auto& e : edges) scale /= e.delta;

  std::vector<std::vector<Complex>> tables;
  tables.reserve(nfg.factors().size());
  for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
    tables.push_back(pattern_table(nfg.factors()[f], layout.ports[f], edges));
  }

  std::vector<LoopTerm> terms(std::size_t{1} << n);
  parallel_for(terms.size(), 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t subset = begin; subset < end; ++subset) {
      Complex value = scale;
      for (std::size_t f = 0; f < tables.size(); ++f) {
        std::size_t pattern = 0;
        for (const auto& p : layout.ports[f]) pattern = pattern * 2 + ((subset >> p.edge) & 1U);
        value *= tables[f][pattern];
      }
      terms[subset] = LoopTerm{subset, value, classify(layout, subset)};
    }
  });
  return terms;
}

Nfg loop_component(const Nfg& nfg, const MessageState& state, std::uint64_t subset) {
  const Layout layout = layout_of(nfg);
  const auto edges = loop_edges(layout, state);
  Nfg out = nfg;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const auto& alphabet = nfg.alphabet_of(layout.edges[j]);
    const unsigned s = (subset >> j) & 1U;
    std::vector<Complex> middle(4, Complex(0.0));
    middle[s * 2 + s] = Complex(1.0) / edges[j].delta;
    out = splice_chain(out, layout.edges[j],
                       Tensor({alphabet, alphabet}, std::vector<Complex>(edges[j].u.begin(), edges[j].u.end())),
                       Tensor({alphabet, alphabet}, std::move(middle)),
                       Tensor({alphabet, alphabet}, std::vector<Complex>(edges[j].v.begin(), edges[j].v.end())));
  }
  return out;
}

}  // namespace nfg
