#include "nfg/sum_product.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "nfg/errors.hpp"

namespace nfg {

std::string_view to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

std::size_t Schedule::message_count() const {
  std::size_t n = 0;
  for (const auto& r : rounds) n += r.size();
  return n;
}

MessageState::MessageState(const Nfg& nfg, Semiring semiring)
    : semiring_(semiring), prefactor_(nfg.prefactor_in(semiring)) {
  for (const auto& v : nfg.variables()) {
    if (v.is_external()) continue;
    index_.emplace(v.id, edges_.size());
    edges_.push_back(v.id);
    sizes_.push_back(nfg.alphabet_of(v.id).size());
  }
  messages_.resize(2 * edges_.size());
}

std::size_t MessageState::slot(std::string_view edge, Direction d) const {
  auto it = index_.find(std::string(edge));
  if (it == index_.end()) throw ContractViolation("no internal edge '" + std::string(edge) + "'");
  return 2 * it->second + (d == Direction::kForward ? 0 : 1);
}

bool MessageState::has(std::string_view edge, Direction d) const {
  auto it = index_.find(std::string(edge));
  return it != index_.end() && messages_[2 * it->second + (d == Direction::kForward ? 0 : 1)];
}

const std::vector<Complex>& MessageState::get(std::string_view edge, Direction d) const {
  const auto& m = messages_[slot(edge, d)];
  if (!m) {
    throw ContractViolation("missing " + std::string(to_string(d)) + " message on edge '" +
                            std::string(edge) + "'");
  }
  return *m;
}

void MessageState::set(std::string_view edge, Direction d, std::vector<Complex> values) {
  const std::size_t s = slot(edge, d);
  if (values.size() != sizes_[s / 2]) {
    throw ContractViolation("message on edge '" + std::string(edge) + "' must have " +
                            std::to_string(sizes_[s / 2]) + " entries");
  }
  messages_[s] = std::move(values);
}

std::vector<Message> MessageState::messages() const {
  std::vector<Message> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    for (auto d : {Direction::kForward, Direction::kBackward}) {
      const auto& m = messages_[2 * e + (d == Direction::kForward ? 0 : 1)];
      if (m) out.push_back(Message{edges_[e], d, *m});
    }
  }
  return out;
}

namespace {

// Index-based view of a graph without external variables: every port of
// every factor is one end of an internal edge.
class EdgeGraph {
 public:
  explicit EdgeGraph(const Nfg& nfg) : nfg_(nfg), inc_(nfg) {
    require_valid(nfg);
    const auto& vars = nfg.variables();
    edge_of_var_.assign(vars.size(), 0);
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (vars[v].is_external()) {
        throw ContractViolation("message passing needs a graph without external variables; '" +
                                vars[v].id + "' is external");
      }
      edge_of_var_[v] = vars_.size();
      vars_.push_back(v);
    }
  }

  const Nfg& nfg() const { return nfg_; }
  std::size_t edge_count() const { return vars_.size(); }
  const std::string& edge_id(std::size_t e) const { return nfg_.variables()[vars_[e]].id; }
  std::size_t edge_of(std::string_view id) const {
    auto v = nfg_.variable_index(id);
    if (!v) throw ContractViolation("no internal edge '" + std::string(id) + "'");
    return edge_of_var_[*v];
  }
  Slot endpoint(std::size_t e, int which) const { return inc_.slots(vars_[e])[which]; }
  std::size_t alphabet_size(std::size_t e) const {
    return nfg_.alphabet_of(edge_id(e)).size();
  }

  // Message index 2e (forward) or 2e + 1 (backward).
  static std::size_t key(std::size_t e, Direction d) {
    return 2 * e + (d == Direction::kForward ? 0 : 1);
  }

  // Message that leaves through `slot`.
  std::size_t outgoing(Slot slot) const {
    const std::size_t e = edge_of_var_[inc_.port_variable(slot.factor, slot.port)];
    return key(e, endpoint(e, 0) == slot ? Direction::kForward : Direction::kBackward);
  }
  // Message that arrives through `slot`.
  std::size_t incoming(Slot slot) const { return outgoing(slot) ^ 1U; }

  Slot source(std::size_t message) const { return endpoint(message / 2, message % 2 == 0 ? 0 : 1); }

  // Update rule for `message`, reading neighbours through `in(key)`.
  std::vector<Complex> update(std::size_t message, Semiring semiring,
                              const std::function<const std::vector<Complex>*(std::size_t)>& in) const {
    const Slot src = source(message);
    const auto& factor = nfg_.factors()[src.factor];
    const std::size_t rank = factor.ports.size();
    std::vector<const std::vector<Complex>*> incoming_msgs(rank, nullptr);
    for (std::size_t p = 0; p < rank; ++p) {
      if (p == src.port) continue;
      incoming_msgs[p] = in(incoming(Slot{src.factor, p}));
      if (incoming_msgs[p] == nullptr) {
        const std::size_t k = incoming(Slot{src.factor, p});
        throw ContractViolation("update of " + std::string(to_string(message % 2 == 0 ? Direction::kForward : Direction::kBackward)) +
                                " message on '" + edge_id(message / 2) + "' needs the " +
                                std::string(to_string(k % 2 == 0 ? Direction::kForward : Direction::kBackward)) +
                                " message on '" + edge_id(k / 2) + "'");
      }
    }
    const auto shape = factor.table.shape();
    std::vector<Complex> out(shape[src.port], semiring.zero());
    std::vector<std::size_t> idx(rank, 0);
    for (std::size_t flat = 0; flat < factor.table.size(); ++flat) {
      Complex w = factor.table[flat];
      for (std::size_t p = 0; p < rank; ++p) {
        if (p != src.port) w = semiring.mul(w, (*incoming_msgs[p])[idx[p]]);
      }
      out[idx[src.port]] = semiring.add(out[idx[src.port]], w);
      next_index(idx, shape);
    }
    return out;
  }

 private:
  const Nfg& nfg_;
  Incidence inc_;
  std::vector<std::size_t> vars_;
  std::vector<std::size_t> edge_of_var_;
};

void require_domain(const Nfg& nfg, Semiring semiring) {
  for (const auto& f : nfg.factors()) {
    for (const auto& v : f.table.values()) {
      if (!semiring.admits(v)) {
        throw ContractViolation("factor '" + f.id + "' has a value outside the " +
                                std::string(semiring.name()) + " domain");
      }
    }
  }
}

Direction direction_of(std::size_t key) {
  return key % 2 == 0 ? Direction::kForward : Direction::kBackward;
}

std::vector<std::vector<std::size_t>> schedule_keys(const EdgeGraph& g) {
  const Nfg& nfg = g.nfg();
  const std::size_t nf = nfg.factors().size();
  const std::size_t ne = g.edge_count();

  // Union-find over factors to count components and detect cycles.
  std::vector<std::size_t> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < ne; ++e) {
    const auto a = find(g.endpoint(e, 0).factor);
    const auto b = find(g.endpoint(e, 1).factor);
    if (a == b) {
      throw CyclicGraph("graph has a cycle through edge '" + g.edge_id(e) +
                        "'; use loopy message passing instead");
    }
    parent[a] = b;
  }
  std::size_t components = 0;
  for (std::size_t f = 0; f < nf; ++f) components += find(f) == f ? 1 : 0;
  if (components > 1) {
    throw Disconnected("graph has " + std::to_string(components) + " connected components");
  }

  std::vector<std::size_t> depth(2 * ne, 0);
  std::function<std::size_t(std::size_t)> depth_of = [&](std::size_t key) -> std::size_t {
    if (depth[key] != 0) return depth[key];
    const Slot src = g.source(key);
    std::size_t d = 0;
    for (std::size_t p = 0; p < nfg.factors()[src.factor].ports.size(); ++p) {
      if (p != src.port) d = std::max(d, depth_of(g.incoming(Slot{src.factor, p})));
    }
    return depth[key] = d + 1;
  };
  std::size_t max_depth = 0;
  for (std::size_t k = 0; k < 2 * ne; ++k) max_depth = std::max(max_depth, depth_of(k));

  std::vector<std::vector<std::size_t>> rounds(max_depth);
  for (std::size_t k = 0; k < 2 * ne; ++k) rounds[depth[k] - 1].push_back(k);
  return rounds;
}

}  // namespace

Schedule build_schedule(const Nfg& nfg) {
  const EdgeGraph g(nfg);
  Schedule schedule;
  for (const auto& round : schedule_keys(g)) {
    auto& out = schedule.rounds.emplace_back();
    for (auto k : round) out.push_back(ScheduledMessage{g.edge_id(k / 2), direction_of(k)});
  }
  return schedule;
}

std::vector<Complex> update_message(const Nfg& nfg, std::string_view edge, Direction direction,
                                    const MessageState& incoming) {
  const EdgeGraph g(nfg);
  const std::size_t key = EdgeGraph::key(g.edge_of(edge), direction);
  return g.update(key, incoming.semiring(), [&](std::size_t k) -> const std::vector<Complex>* {
    const auto& id = g.edge_id(k / 2);
    return incoming.has(id, direction_of(k)) ? &incoming.get(id, direction_of(k)) : nullptr;
  });
}

MessageState run_tree(const Nfg& nfg, Semiring semiring) {
  const EdgeGraph g(nfg);
  require_domain(nfg, semiring);
  const auto rounds = schedule_keys(g);
  std::vector<std::vector<Complex>> msgs(2 * g.edge_count());
  std::vector<bool> ready(msgs.size(), false);
  for (const auto& round : rounds) {
    for (auto k : round) {
      msgs[k] = g.update(k, semiring, [&](std::size_t j) -> const std::vector<Complex>* {
        return ready[j] ? &msgs[j] : nullptr;
      });
    }
    for (auto k : round) ready[k] = true;
  }
  MessageState state(nfg, semiring);
  for (std::size_t k = 0; k < msgs.size(); ++k) state.set(g.edge_id(k / 2), direction_of(k), std::move(msgs[k]));
  state.iterations = rounds.size();
  state.converged = true;
  return state;
}

std::vector<Complex> marginal(const MessageState& state, std::string_view edge) {
  const auto& fwd = state.get(edge, Direction::kForward);
  const auto& bwd = state.get(edge, Direction::kBackward);
  const Semiring s = state.semiring();
  std::vector<Complex> out(fwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i) out[i] = s.mul(state.prefactor(), s.mul(fwd[i], bwd[i]));
  return out;
}

Complex global_z(const MessageState& state, std::string_view edge) {
  const Semiring s = state.semiring();
  Complex z = s.zero();
  for (const auto& v : marginal(state, edge)) z = s.add(z, v);
  return z;
}

namespace {

double l1_normalize(std::vector<Complex>& m) {
  double norm = 0.0;
  for (const auto& x : m) norm += std::abs(x);
  if (norm > 0.0 && std::isfinite(norm)) {
    for (auto& x : m) x /= norm;
  }
  return norm;
}

}  // namespace

MessageState run_loopy(const Nfg& nfg, const LoopyOptions& options) {
  if (!(options.damping >= 0.0 && options.damping < 1.0)) {
    throw ContractViolation("damping must lie in [0, 1)");
  }
  if (!(options.tol > 0.0)) throw ContractViolation("tolerance must be positive");
  if (options.max_iters == 0) throw ContractViolation("max_iters must be at least 1");

  const EdgeGraph g(nfg);
  const Semiring semiring = Semiring::sum_product();
  require_domain(nfg, semiring);

  const std::size_t n = 2 * g.edge_count();
  std::vector<std::vector<Complex>> current(n), next(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = g.alphabet_size(k / 2);
    current[k].assign(q, Complex(1.0 / static_cast<double>(q)));
  }

  MessageState state(nfg, semiring);
  auto read = [&](std::size_t j) -> const std::vector<Complex>* { return &current[j]; };
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      next[k] = g.update(k, semiring, read);
      const double norm = l1_normalize(next[k]);
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ZeroMessage(g.edge_id(k / 2), std::string(to_string(direction_of(k))) +
                                                 " message on edge '" + g.edge_id(k / 2) +
                                                 "' vanished");
      }
      if (options.damping > 0.0) {
        for (std::size_t i = 0; i < next[k].size(); ++i) {
          next[k][i] = (1.0 - options.damping) * next[k][i] + options.damping * current[k][i];
        }
        l1_normalize(next[k]);
      }
      for (std::size_t i = 0; i < next[k].size(); ++i) {
        residual = std::max(residual, std::abs(next[k][i] - current[k][i]));
      }
    }
    std::swap(current, next);
    state.iterations = it + 1;
    state.residual = residual;
    if (residual < options.tol) {
      state.converged = true;
      break;
    }
  }
  for (std::size_t k = 0; k < n; ++k) state.set(g.edge_id(k / 2), direction_of(k), current[k]);
  return state;
}

double fixed_point_residual(const Nfg& nfg, const MessageState& state) {
  const EdgeGraph g(nfg);
  double residual = 0.0;
  for (std::size_t k = 0; k < 2 * g.edge_count(); ++k) {
    auto updated = update_message(nfg, g.edge_id(k / 2), direction_of(k), state);
    l1_normalize(updated);
    auto old = state.get(g.edge_id(k / 2), direction_of(k));
    l1_normalize(old);
    for (std::size_t i = 0; i < old.size(); ++i) residual = std::max(residual, std::abs(updated[i] - old[i]));
  }
  return residual;
}

}  // namespace nfg
