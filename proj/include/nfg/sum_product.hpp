#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nfg/graph.hpp"
#include "nfg/semiring.hpp"

namespace nfg {

/// Orientation of a message on an internal edge. Forward messages are
/// emitted by the edge's endpoint 0 (its first slot in factor/port order)
/// and travel toward endpoint 1; backward messages go the other way.
enum class Direction { kForward, kBackward };

std::string_view to_string(Direction d);

struct Message {
  std::string edge;
  Direction direction = Direction::kForward;
  std::vector<Complex> values;
};

struct ScheduledMessage {
  std::string edge;
  Direction direction = Direction::kForward;
  friend bool operator==(const ScheduledMessage&, const ScheduledMessage&) = default;
};

/// Leaf-to-root order: round d holds the messages of depth d + 1, sorted by
/// edge declaration order, forward before backward.
struct Schedule {
  std::vector<std::vector<ScheduledMessage>> rounds;
  std::size_t message_count() const;
};

/// Directed messages over the internal edges of one graph, together with the
/// semiring and prefactor they were computed for.
class MessageState {
 public:
  MessageState() = default;
  MessageState(const Nfg& nfg, Semiring semiring);

  Semiring semiring() const { return semiring_; }
  Complex prefactor() const { return prefactor_; }

  /// Internal edges in declaration order.
  const std::vector<std::string>& edges() const { return edges_; }
  bool has_edge(std::string_view edge) const { return index_.count(std::string(edge)) != 0; }

  bool has(std::string_view edge, Direction d) const;
  /// Throws ContractViolation if the message is absent.
  const std::vector<Complex>& get(std::string_view edge, Direction d) const;
  void set(std::string_view edge, Direction d, std::vector<Complex> values);

  /// Every message present, edge-major, forward first.
  std::vector<Message> messages() const;

  std::size_t iterations = 0;
  /// Largest absolute entry change in the last loopy round; 0 for trees.
  double residual = 0.0;
  bool converged = false;

 private:
  std::size_t slot(std::string_view edge, Direction d) const;

  Semiring semiring_ = Semiring::sum_product();
  Complex prefactor_{1.0};
  std::vector<std::string> edges_;
  std::vector<std::size_t> sizes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::optional<std::vector<Complex>>> messages_;
};

/// Message schedule of a connected, cycle-free graph without externals.
/// Throws CyclicGraph (including self-loops) or Disconnected.
Schedule build_schedule(const Nfg& nfg);

/// One application of the update rule: the semiring sum, over the source
/// factor's other ports, of the factor value times the incoming messages.
/// A degree-1 source factor returns its own values.
std::vector<Complex> update_message(const Nfg& nfg, std::string_view edge, Direction direction,
                                    const MessageState& incoming);

/// All 2 * #edges messages of a cycle-free graph, unnormalized. Each message
/// is the partition function of the subgraph on its source side of the cut.
MessageState run_tree(const Nfg& nfg, Semiring semiring = Semiring::sum_product());

/// Componentwise product of the two messages on `edge`, times the prefactor.
std::vector<Complex> marginal(const MessageState& state, std::string_view edge);

/// Semiring sum of marginal(state, edge).
Complex global_z(const MessageState& state, std::string_view edge);

struct LoopyOptions {
  std::size_t max_iters = 10000;
  double damping = 0.0;
  double tol = 1e-10;
};

/// Synchronous sum-product iteration on an arbitrary graph without externals.
/// Messages start uniform and are L1-normalized after every round; damping
/// mixes the previous message back in before renormalizing. Stops when the
/// residual drops below `tol` (converged = true) or after max_iters rounds.
/// Throws ZeroMessage if an update vanishes.
MessageState run_loopy(const Nfg& nfg, const LoopyOptions& options = {});

/// Largest change of any L1-normalized message under one more synchronous
/// update of `state`.
double fixed_point_residual(const Nfg& nfg, const MessageState& state);

}  // namespace nfg
