#include "nfg/evaluate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "nfg/errors.hpp"
#include "nfg/parallel.hpp"

namespace nfg {

namespace {

struct SumProductOps {
  using Value = Complex;
  static Value lift(Complex v) { return v; }
  static Value zero() { return Complex(0.0); }
  static Value one() { return Complex(1.0); }
  static Value add(Value a, Value b) { return a + b; }
  static Value mul(Value a, Value b) { return a * b; }
  static Complex lower(Value v) { return v; }
};

struct MinSumOps {
  using Value = double;
  static Value lift(Complex v) { return v.real(); }
  static Value zero() { return std::numeric_limits<double>::infinity(); }
  static Value one() { return 0.0; }
  static Value add(Value a, Value b) { return a < b ? a : b; }
  static Value mul(Value a, Value b) { return a + b; }
  static Complex lower(Value v) { return Complex(v); }
};

// (factor, stride) pairs through which a variable's value moves factor offsets.
using Contributions = std::vector<std::pair<std::size_t, std::size_t>>;

template <class Ops>
std::vector<Complex> contract(const Nfg& nfg, Semiring semiring) {
  using Value = typename Ops::Value;
  const Incidence inc(nfg);
  const auto& factors = nfg.factors();
  const auto& vars = nfg.variables();

  std::vector<std::vector<Value>> tables(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& vals = factors[f].table.values();
    tables[f].reserve(vals.size());
    for (const auto& v : vals) {
      if (!semiring.admits(v)) {
        throw ContractViolation("factor '" + factors[f].id + "' has a value outside the " +
                                std::string(semiring.name()) + " domain");
      }
      tables[f].push_back(Ops::lift(v));
    }
  }

  // Factors are multiplied in id order, so the result does not depend on
  // where a factor sits in the list.
  std::vector<std::size_t> order(factors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return factors[a].id < factors[b].id; });

  std::vector<std::size_t> ext, in;
  for (std::size_t v = 0; v < vars.size(); ++v) (vars[v].is_external() ? ext : in).push_back(v);

  std::vector<Contributions> contrib(vars.size());
  std::vector<std::size_t> sizes(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    sizes[v] = nfg.alphabet_of(vars[v].id).size();
    for (const auto& s : inc.slots(v)) {
      contrib[v].emplace_back(s.factor, factors[s.factor].table.stride(s.port));
    }
  }

  std::size_t out_size = 1;
  for (auto v : ext) out_size *= sizes[v];
  std::size_t inner_size = 1;
  for (auto v : in) inner_size *= sizes[v];

  std::vector<Complex> out(out_size);
  const Value prefactor = Ops::lift(nfg.prefactor_in(semiring));

  auto body = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> offset(factors.size());
    std::vector<std::size_t> digit(in.size());
    for (std::size_t e = begin; e < end; ++e) {
      std::fill(offset.begin(), offset.end(), 0);
      std::size_t rest = e;
      for (std::size_t i = ext.size(); i-- > 0;) {
        const std::size_t v = ext[i];
        const std::size_t value = rest % sizes[v];
        rest /= sizes[v];
        for (const auto& [f, stride] : contrib[v]) offset[f] += value * stride;
      }
      std::fill(digit.begin(), digit.end(), 0);
      Value total = Ops::zero();
      for (std::size_t n = 0; n < inner_size; ++n) {
        Value prod = Ops::one();
        for (auto f : order) prod = Ops::mul(prod, tables[f][offset[f]]);
        total = Ops::add(total, prod);
        // Odometer step over internal variables, last one fastest.
        for (std::size_t i = in.size(); i-- > 0;) {
          const std::size_t v = in[i];
          if (++digit[i] < sizes[v]) {
            for (const auto& [f, stride] : contrib[v]) offset[f] += stride;
            break;
          }
          for (const auto& [f, stride] : contrib[v]) offset[f] -= (sizes[v] - 1) * stride;
          digit[i] = 0;
        }
      }
      out[e] = Ops::lower(Ops::mul(prefactor, total));
    }
  };
  const std::size_t work = std::max<std::size_t>(1, inner_size * std::max<std::size_t>(1, factors.size()));
  parallel_for(out_size, std::max<std::size_t>(1, (1u << 16) / work), body);
  return out;
}

}  // namespace

ExternalFunction ExternalFunction::aligned_to(std::span<const std::string> order) const {
  if (order.size() != variables.size()) {
    throw ContractViolation("external signature mismatch: different number of variables");
  }
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  for (const auto& id : order) {
    auto it = std::find(variables.begin(), variables.end(), id);
    if (it == variables.end()) {
      throw ContractViolation("external signature mismatch: no variable '" + id + "'");
    }
    perm.push_back(static_cast<std::size_t>(it - variables.begin()));
  }
  return ExternalFunction{std::vector<std::string>(order.begin(), order.end()), table.permuted(perm)};
}

ExternalFunction eval_external(const Nfg& nfg, Semiring semiring) {
  require_valid(nfg);
  if (!semiring.admits(nfg.prefactor_in(semiring))) {
    throw ContractViolation("prefactor is outside the " + std::string(semiring.name()) + " domain");
  }
  auto values = semiring.is_sum_product() ? contract<SumProductOps>(nfg, semiring)
                                          : contract<MinSumOps>(nfg, semiring);
  ExternalFunction result;
  std::vector<Alphabet> axes;
  for (const auto& v : nfg.variables()) {
    if (!v.is_external()) continue;
    result.variables.push_back(v.id);
    axes.push_back(nfg.alphabet_of(v.id));
  }
  result.table = Tensor(std::move(axes), std::move(values));
  return result;
}

Complex eval_scalar(const Nfg& nfg, Semiring semiring) {
  for (const auto& v : nfg.variables()) {
    if (v.is_external()) {
      throw ContractViolation("eval_scalar: graph has external variable '" + v.id + "'");
    }
  }
  return eval_external(nfg, semiring).table[0];
}

ExternalFunction eval_linear_combination(std::span<const LinearTerm> terms) {
  if (terms.empty()) throw ContractViolation("linear combination needs at least one term");
  ExternalFunction result = eval_external(terms[0].graph);
  for (auto& v : result.table.mutable_values()) v *= terms[0].coefficient;
  for (std::size_t t = 1; t < terms.size(); ++t) {
    const auto term = eval_external(terms[t].graph).aligned_to(result.variables);
    if (term.table.axes() != result.table.axes()) {
      throw ContractViolation("external signature mismatch: term " + std::to_string(t) +
                              " uses different alphabets");
    }
    for (std::size_t i = 0; i < term.table.size(); ++i) {
      result.table[i] += terms[t].coefficient * term.table[i];
    }
  }
  return result;
}

}  // namespace nfg
