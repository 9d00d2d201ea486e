#include "nfg/rewrite.hpp"

#include <numeric>

#include "nfg/builtin_factors.hpp"
#include "nfg/errors.hpp"
#include "id_allocator.hpp"

namespace nfg {

namespace {

using detail::IdAllocator;


std::vector<std::vector<std::string>> port_lists(const GraphData& g) {
  std::vector<std::vector<std::string>> out;
  out.reserve(g.factors().size());
  for (const auto& f : g.factors()) out.push_back(f.ports);
  return out;
}

void copy_alphabets(const GraphData& from, GraphData& to) {
  for (const auto& a : from.alphabets()) to.add_alphabet(a);
}

void copy_factors(const GraphData& from, const std::vector<std::vector<std::string>>& ports,
                  GraphData& to) {
  for (std::size_t f = 0; f < from.factors().size(); ++f) {
    const auto& src = from.factors()[f];
    to.add_factor(src.id, ports[f], src.table);
  }
}

std::size_t require_kind(const Nfg& nfg, std::string_view id, VariableKind kind,
                         std::string_view op) {
  const auto idx = nfg.variable_index(id);
  if (!idx) throw ContractViolation(std::string(op) + ": no variable '" + std::string(id) + "'");
  if (nfg.variables()[*idx].kind != kind) {
    throw ContractViolation(std::string(op) + ": variable '" + std::string(id) + "' is not " +
                            std::string(to_string(kind)));
  }
  return *idx;
}

}  // namespace

Nfg normalize(const GeneralRealization& realization) {
  const auto report = validate(realization);
  if (!report.ok()) throw ContractViolation("malformed realization: " + report.summary());

  const Incidence inc(realization);
  IdAllocator ids(realization);
  auto ports = port_lists(realization);
  Nfg out;
  copy_alphabets(realization, out);
  out.set_prefactor(realization.prefactor());

  std::vector<Factor> equalities;
  const auto& vars = realization.variables();
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& var = vars[v];
    const auto& slots = inc.slots(v);
    const auto& alphabet = realization.alphabet_of(var.id);

    if (var.is_external()) {
      if (slots.empty()) {
        throw ContractViolation("normalize: external variable '" + var.id + "' is in no factor");
      }
      out.add_variable(var.id, var.alphabet, VariableKind::kExternal);
      if (slots.size() == 1) continue;
    } else {
      if (slots.size() < 2) {
        throw ContractViolation("normalize: internal variable '" + var.id + "' has degree " +
                                std::to_string(slots.size()) + ", needs at least 2");
      }
      if (slots.size() == 2) {
        out.add_variable(var.id, var.alphabet, VariableKind::kInternal);
        continue;
      }
    }

    std::vector<std::string> eq_ports;
    if (var.is_external()) eq_ports.push_back(var.id);
    for (std::size_t l = 0; l < slots.size(); ++l) {
      std::string replica = ids.take(var.id + "." + std::to_string(l + 1));
      out.add_variable(replica, var.alphabet, VariableKind::kInternal);
      ports[slots[l].factor][slots[l].port] = replica;
      eq_ports.push_back(std::move(replica));
    }
    const auto degree = eq_ports.size();
    equalities.push_back(
        Factor{ids.take("=" + var.id), std::move(eq_ports), equality_indicator(alphabet, degree)});
  }

  copy_factors(realization, ports, out);
  for (auto& f : equalities) out.add_factor(std::move(f));
  return out;
}

EdgeSplit cut_edge(const Nfg& nfg, std::string_view variable) {
  require_valid(nfg);
  const std::size_t target = require_kind(nfg, variable, VariableKind::kInternal, "cut_edge");
  const Incidence inc(nfg);
  IdAllocator ids(nfg);
  EdgeSplit split;
  split.forward = ids.take(std::string(variable) + ">");
  split.backward = ids.take(std::string(variable) + "<");

  auto ports = port_lists(nfg);
  const auto& slots = inc.slots(target);
  ports[slots[0].factor][slots[0].port] = split.forward;
  ports[slots[1].factor][slots[1].port] = split.backward;

  Nfg& out = split.graph;
  copy_alphabets(nfg, out);
  out.set_prefactor(nfg.prefactor());
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& var = nfg.variables()[v];
    if (v == target) {
      out.add_variable(split.forward, var.alphabet, VariableKind::kExternal);
      out.add_variable(split.backward, var.alphabet, VariableKind::kExternal);
    } else {
      out.add_variable(var.id, var.alphabet, var.kind);
    }
  }
  copy_factors(nfg, ports, out);
  return split;
}

Nfg join_edges(const Nfg& nfg, std::string_view first, std::string_view second,
               std::string_view joined) {
  require_valid(nfg);
  const std::size_t a = require_kind(nfg, first, VariableKind::kExternal, "join_edges");
  const std::size_t b = require_kind(nfg, second, VariableKind::kExternal, "join_edges");
  if (a == b) throw ContractViolation("join_edges: cannot join a half-edge with itself");
  if (nfg.variables()[a].alphabet != nfg.variables()[b].alphabet) {
    throw ContractViolation("join_edges: half-edges have different alphabets");
  }
  if (joined != first && joined != second && nfg.has_id(joined)) {
    throw ContractViolation("join_edges: id '" + std::string(joined) + "' already in use");
  }

  const Incidence inc(nfg);
  auto ports = port_lists(nfg);
  for (auto v : {a, b}) {
    const auto& s = inc.slots(v)[0];
    ports[s.factor][s.port] = std::string(joined);
  }
  Nfg out;
  copy_alphabets(nfg, out);
  out.set_prefactor(nfg.prefactor());
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& var = nfg.variables()[v];
    if (v == a) {
      out.add_variable(std::string(joined), var.alphabet, VariableKind::kInternal);
    } else if (v != b) {
      out.add_variable(var.id, var.alphabet, var.kind);
    }
  }
  copy_factors(nfg, ports, out);
  return out;
}

EdgeSplit insert_tap(const Nfg& nfg, std::string_view variable) {
  require_valid(nfg);
  const std::size_t target = require_kind(nfg, variable, VariableKind::kInternal, "insert_tap");
  const Incidence inc(nfg);
  IdAllocator ids(nfg);
  EdgeSplit split;
  split.forward = ids.take(std::string(variable) + ">");
  split.backward = ids.take(std::string(variable) + "<");
  const std::string tap_id = ids.take("=" + std::string(variable));

  auto ports = port_lists(nfg);
  const auto& slots = inc.slots(target);
  ports[slots[0].factor][slots[0].port] = split.forward;
  ports[slots[1].factor][slots[1].port] = split.backward;

  Nfg& out = split.graph;
  copy_alphabets(nfg, out);
  out.set_prefactor(nfg.prefactor());
  const auto& var = nfg.variables()[target];
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& w = nfg.variables()[v];
    if (v == target) {
      out.add_variable(w.id, w.alphabet, VariableKind::kExternal);
      out.add_variable(split.forward, w.alphabet, VariableKind::kInternal);
      out.add_variable(split.backward, w.alphabet, VariableKind::kInternal);
    } else {
      out.add_variable(w.id, w.alphabet, w.kind);
    }
  }
  copy_factors(nfg, ports, out);
  out.add_factor(tap_id, {split.forward, split.backward, var.id},
                 equality_indicator(nfg.alphabet_of(var.id), 3));
  return split;
}

Nfg sum_out_external(const Nfg& nfg, std::string_view variable) {
  require_valid(nfg);
  const std::size_t target =
      require_kind(nfg, variable, VariableKind::kExternal, "sum_out_external");
  IdAllocator ids(nfg);
  Nfg out;
  copy_alphabets(nfg, out);
  out.set_prefactor(nfg.prefactor());
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& w = nfg.variables()[v];
    out.add_variable(w.id, w.alphabet, v == target ? VariableKind::kInternal : w.kind);
  }
  copy_factors(nfg, port_lists(nfg), out);
  out.add_factor(ids.take(std::string(variable) + ".sum"), {std::string(variable)},
                 ones_vector(nfg.alphabet_of(variable)));
  return out;
}

std::vector<Nfg> components(const Nfg& nfg) {
  require_valid(nfg);
  const Incidence inc(nfg);
  const std::size_t nf = nfg.factors().size();
  std::vector<std::size_t> parent(nf);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& slots = inc.slots(v);
    if (slots.size() == 2) parent[find(slots[0].factor)] = find(slots[1].factor);
  }

  std::vector<std::size_t> which(nf);
  std::vector<std::size_t> root_to_component(nf, nf);
  std::vector<Nfg> out;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t r = find(f);
    if (root_to_component[r] == nf) {
      root_to_component[r] = out.size();
      out.emplace_back();
      copy_alphabets(nfg, out.back());
    }
    which[f] = root_to_component[r];
  }
  for (std::size_t v = 0; v < nfg.variables().size(); ++v) {
    const auto& var = nfg.variables()[v];
    out[which[inc.slots(v)[0].factor]].add_variable(var.id, var.alphabet, var.kind);
  }
  for (std::size_t f = 0; f < nf; ++f) out[which[f]].add_factor(nfg.factors()[f]);
  if (!out.empty()) out.front().set_prefactor(nfg.prefactor());
  return out;
}

}  // namespace nfg
