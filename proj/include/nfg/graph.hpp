#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nfg/alphabet.hpp"
#include "nfg/semiring.hpp"
#include "nfg/tensor.hpp"

namespace nfg {

enum class VariableKind { kInternal, kExternal };

std::string_view to_string(VariableKind kind);

struct Variable {
  std::string id;
  std::string alphabet;
  VariableKind kind = VariableKind::kInternal;

  bool is_external() const { return kind == VariableKind::kExternal; }
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// A factor vertex. `ports` names one variable per table axis, in order;
/// port order is significant.
struct Factor {
  std::string id;
  std::vector<std::string> ports;
  Tensor table;
};

/// Shared storage of a sum-of-products realization: alphabets, variables,
/// factors and a scalar prefactor. Builders only record; structural checks
/// are the business of `validate`.
class GraphData {
 public:
  /// Adding an alphabet whose id is already present is a no-op when the two
  /// are identical and a ContractViolation otherwise.
  void add_alphabet(const Alphabet& alphabet);
  void add_variable(std::string id, std::string alphabet, VariableKind kind);
  void add_factor(std::string id, std::vector<std::string> ports, Tensor table);
  /// Builds the table from the port variables' alphabets, which must exist.
  void add_factor(std::string id, std::vector<std::string> ports, std::vector<Complex> values);
  void add_factor(Factor factor);

  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Unset means the multiplicative identity of whatever semiring evaluates
  /// the graph.
  const std::optional<Complex>& prefactor() const { return prefactor_; }
  Complex prefactor_in(Semiring semiring) const { return prefactor_.value_or(semiring.one()); }
  void set_prefactor(std::optional<Complex> value) { prefactor_ = value; }

  const Alphabet* find_alphabet(std::string_view id) const;
  const Variable* find_variable(std::string_view id) const;
  const Factor* find_factor(std::string_view id) const;
  std::optional<std::size_t> variable_index(std::string_view id) const;
  std::optional<std::size_t> factor_index(std::string_view id) const;

  const Variable& variable(std::string_view id) const;
  const Alphabet& alphabet_of(std::string_view variable_id) const;

  std::vector<std::string> external_ids() const;
  std::vector<std::string> internal_ids() const;

  bool has_id(std::string_view id) const;
  /// `base` if no variable, factor or alphabet uses it, else the first free
  /// `base#n` for n = 1, 2, ...
  std::string fresh_id(std::string_view base) const;

 private:
  std::vector<Alphabet> alphabets_;
  std::vector<Variable> variables_;
  std::vector<Factor> factors_;
  std::optional<Complex> prefactor_;
  std::unordered_map<std::string, std::size_t> alphabet_index_;
  std::unordered_map<std::string, std::size_t> variable_index_;
  std::unordered_map<std::string, std::size_t> factor_index_;
};

/// Normal factor graph: externals have degree 1, internals degree 2. A
/// variable occurring twice in the same factor is a self-loop edge.
class Nfg : public GraphData {
 public:
  Nfg() = default;
  explicit Nfg(GraphData data) : GraphData(std::move(data)) {}
};

/// Arbitrary sum-of-products realization, prior to normalization.
class GeneralRealization : public GraphData {
 public:
  GeneralRealization() = default;
  explicit GeneralRealization(GraphData data) : GraphData(std::move(data)) {}
};

/// One factor port.
struct Slot {
  std::size_t factor = 0;
  std::size_t port = 0;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Variable-to-slot incidence of a graph whose references all resolve.
/// Slots of each variable are listed in (factor, port) order, so the first
/// slot of an internal edge is its endpoint 0.
class Incidence {
 public:
  explicit Incidence(const GraphData& graph);

  std::size_t variable_count() const { return slots_.size(); }
  const std::vector<Slot>& slots(std::size_t variable) const { return slots_[variable]; }
  std::size_t port_variable(std::size_t factor, std::size_t port) const {
    return port_variables_[factor][port];
  }
  const std::vector<std::size_t>& port_variables(std::size_t factor) const {
    return port_variables_[factor];
  }

 private:
  std::vector<std::vector<Slot>> slots_;
  std::vector<std::vector<std::size_t>> port_variables_;
};

struct Violation {
  std::string subject;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const Nfg& nfg);
ValidationReport validate(const GeneralRealization& realization);

/// Throws ContractViolation carrying the report summary if `nfg` is invalid.
void require_valid(const Nfg& nfg);

}  // namespace nfg
