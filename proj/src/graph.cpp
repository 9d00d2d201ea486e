#include "nfg/graph.hpp"

#include <sstream>
#include <unordered_set>

#include "nfg/errors.hpp"

namespace nfg {

std::string_view to_string(VariableKind kind) {
  return kind == VariableKind::kExternal ? "external" : "internal";
}

void GraphData::add_alphabet(const Alphabet& alphabet) {
  if (const auto* existing = find_alphabet(alphabet.id())) {
    if (!(*existing == alphabet)) {
      throw ContractViolation("alphabet '" + alphabet.id() + "' redeclared with a different definition");
    }
    return;
  }
  alphabet_index_.emplace(alphabet.id(), alphabets_.size());
  alphabets_.push_back(alphabet);
}

void GraphData::add_variable(std::string id, std::string alphabet, VariableKind kind) {
  variable_index_.emplace(id, variables_.size());
  variables_.push_back(Variable{std::move(id), std::move(alphabet), kind});
}

void GraphData::add_factor(std::string id, std::vector<std::string> ports, Tensor table) {
  add_factor(Factor{std::move(id), std::move(ports), std::move(table)});
}

void GraphData::add_factor(std::string id, std::vector<std::string> ports,
                           std::vector<Complex> values) {
  std::vector<Alphabet> axes;
  axes.reserve(ports.size());
  for (const auto& p : ports) axes.push_back(alphabet_of(p));
  add_factor(std::move(id), std::move(ports), Tensor(std::move(axes), std::move(values)));
}

void GraphData::add_factor(Factor factor) {
  factor_index_.emplace(factor.id, factors_.size());
  factors_.push_back(std::move(factor));
}

const Alphabet* GraphData::find_alphabet(std::string_view id) const {
  auto it = alphabet_index_.find(std::string(id));
  return it == alphabet_index_.end() ? nullptr : &alphabets_[it->second];
}

const Variable* GraphData::find_variable(std::string_view id) const {
  auto it = variable_index_.find(std::string(id));
  return it == variable_index_.end() ? nullptr : &variables_[it->second];
}

const Factor* GraphData::find_factor(std::string_view id) const {
  auto it = factor_index_.find(std::string(id));
  return it == factor_index_.end() ? nullptr : &factors_[it->second];
}

std::optional<std::size_t> GraphData::variable_index(std::string_view id) const {
  auto it = variable_index_.find(std::string(id));
  if (it == variable_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> GraphData::factor_index(std::string_view id) const {
  auto it = factor_index_.find(std::string(id));
  if (it == factor_index_.end()) return std::nullopt;
  return it->second;
}

const Variable& GraphData::variable(std::string_view id) const {
  const auto* v = find_variable(id);
  if (v == nullptr) throw ContractViolation("undeclared variable '" + std::string(id) + "'");
  return *v;
}

const Alphabet& GraphData::alphabet_of(std::string_view variable_id) const {
  const auto& v = variable(variable_id);
  const auto* a = find_alphabet(v.alphabet);
  if (a == nullptr) {
    throw ContractViolation("variable '" + v.id + "' uses undeclared alphabet '" + v.alphabet + "'");
  }
  return *a;
}

std::vector<std::string> GraphData::external_ids() const {
  std::vector<std::string> out;
  for (const auto& v : variables_) {
    if (v.is_external()) out.push_back(v.id);
  }
  return out;
}

std::vector<std::string> GraphData::internal_ids() const {
  std::vector<std::string> out;
  for (const auto& v : variables_) {
    if (!v.is_external()) out.push_back(v.id);
  }
  return out;
}

bool GraphData::has_id(std::string_view id) const {
  const std::string key(id);
  return variable_index_.count(key) != 0 || factor_index_.count(key) != 0 ||
         alphabet_index_.count(key) != 0;
}

std::string GraphData::fresh_id(std::string_view base) const {
  if (!has_id(base)) return std::string(base);
  for (std::size_t n = 1;; ++n) {
    std::string candidate = std::string(base) + "#" + std::to_string(n);
    if (!has_id(candidate)) return candidate;
  }
}

Incidence::Incidence(const GraphData& graph)
    : slots_(graph.variables().size()), port_variables_(graph.factors().size()) {
  const auto& factors = graph.factors();
  for (std::size_t f = 0; f < factors.size(); ++f) {
    auto& pv = port_variables_[f];
    pv.reserve(factors[f].ports.size());
    for (std::size_t p = 0; p < factors[f].ports.size(); ++p) {
      auto idx = graph.variable_index(factors[f].ports[p]);
      if (!idx) {
        throw ContractViolation("factor '" + factors[f].id + "' references undeclared variable '" +
                                factors[f].ports[p] + "'");
      }
      pv.push_back(*idx);
      slots_[*idx].push_back(Slot{f, p});
    }
  }
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].subject << " [" << violations[i].rule << "]: " << violations[i].message;
  }
  return os.str();
}

namespace {

// Checks shared by normal graphs and general realizations. Fills `degree`
// with the number of slots referencing each variable.
void check_common(const GraphData& g, ValidationReport& report, std::vector<std::size_t>& degree) {
  auto add = [&](std::string subject, std::string rule, std::string message) {
    report.violations.push_back({std::move(subject), std::move(rule), std::move(message)});
  };

  std::unordered_set<std::string> seen;
  for (const auto& a : g.alphabets()) {
    if (!seen.insert(a.id()).second) add(a.id(), "unique-id", "alphabet id declared twice");
  }
  seen.clear();
  for (const auto& v : g.variables()) {
    if (!seen.insert(v.id).second) add(v.id, "unique-id", "variable id declared twice");
    if (g.find_alphabet(v.alphabet) == nullptr) {
      add(v.id, "alphabet-reference", "undeclared alphabet '" + v.alphabet + "'");
    }
  }
  seen.clear();
  for (const auto& f : g.factors()) {
    if (!seen.insert(f.id).second) add(f.id, "unique-id", "factor id declared twice");
  }

  degree.assign(g.variables().size(), 0);
  for (const auto& f : g.factors()) {
    bool resolvable = true;
    for (std::size_t p = 0; p < f.ports.size(); ++p) {
      auto idx = g.variable_index(f.ports[p]);
      if (!idx) {
        add(f.id, "port-reference", "port " + std::to_string(p) + " names undeclared variable '" +
                                        f.ports[p] + "'");
        resolvable = false;
        continue;
      }
      ++degree[*idx];
    }
    if (f.table.rank() != f.ports.size()) {
      add(f.id, "table-shape", "table rank " + std::to_string(f.table.rank()) + " but " +
                                   std::to_string(f.ports.size()) + " ports");
      continue;
    }
    if (!resolvable) continue;
    for (std::size_t p = 0; p < f.ports.size(); ++p) {
      const auto* var = g.find_variable(f.ports[p]);
      const auto* alph = g.find_alphabet(var->alphabet);
      if (alph != nullptr && !(f.table.axes()[p] == *alph)) {
        add(f.id, "table-shape", "axis " + std::to_string(p) + " is over alphabet '" +
                                     f.table.axes()[p].id() + "' but port variable '" + var->id +
                                     "' is over '" + alph->id() + "'");
      }
    }
  }
}

}  // namespace

ValidationReport validate(const Nfg& nfg) {
  ValidationReport report;
  std::vector<std::size_t> degree;
  check_common(nfg, report, degree);
  const auto& vars = nfg.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    if (degree[i] == 0) {
      report.violations.push_back({v.id, "unreferenced", "variable is not a port of any factor"});
    } else if (v.is_external() && degree[i] != 1) {
      report.violations.push_back({v.id, "external-degree",
                                   "external variable has degree " + std::to_string(degree[i]) +
                                       ", must be 1"});
    } else if (!v.is_external() && degree[i] != 2) {
      report.violations.push_back({v.id, "internal-degree",
                                   "internal variable has degree " + std::to_string(degree[i]) +
                                       ", must be 2"});
    }
  }
  return report;
}

ValidationReport validate(const GeneralRealization& realization) {
  ValidationReport report;
  std::vector<std::size_t> degree;
  check_common(realization, report, degree);
  return report;
}

void require_valid(const Nfg& nfg) {
  auto report = validate(nfg);
  if (!report.ok()) throw ContractViolation("invalid normal factor graph: " + report.summary());
}

}  // namespace nfg
