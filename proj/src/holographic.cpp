#include "nfg/holographic.hpp"

#include <algorithm>
#include <cmath>

#include "nfg/builtin_factors.hpp"
#include "nfg/errors.hpp"
#include "id_allocator.hpp"

namespace nfg {

namespace {

using detail::IdAllocator;

std::vector<Complex> matmul(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.axes()[0].size();
  const std::size_t m = a.axes()[1].size();
  const std::size_t k = b.axes()[1].size();
  std::vector<Complex> out(n * k, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Complex aij = a[i * m + j];
      if (aij == Complex(0.0)) continue;
      for (std::size_t l = 0; l < k; ++l) out[i * k + l] += aij * b[j * k + l];
    }
  }
  return out;
}

void require_matrix(const Tensor& t, std::string_view name) {
  if (t.rank() != 2) throw ContractViolation(std::string(name) + " must be a degree-2 factor");
}


std::size_t require_internal(const Nfg& nfg, std::string_view edge, std::string_view op) {
  const auto idx = nfg.variable_index(edge);
  if (!idx || nfg.variables()[*idx].is_external()) {
    throw ContractViolation(std::string(op) + ": '" + std::string(edge) + "' is not an internal edge");
  }
  return *idx;
}

std::vector<Complex> positive_diagonal(std::span<const double> m, std::size_t size,
                                       std::string_view what) {
  if (m.size() != size) {
    throw ContractViolation(std::string(what) + " has " + std::to_string(m.size()) +
                            " entries, alphabet has " + std::to_string(size));
  }
  std::vector<Complex> out;
  out.reserve(size);
  for (double x : m) {
    if (x == 0.0) throw DivisionByZero(std::string(what) + " has a zero entry");
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ContractViolation(std::string(what) + " must be strictly positive and finite");
    }
    out.emplace_back(x);
  }
  return out;
}

// Applies the Fourier kernel of `alphabet` along `axis` in place.
void transform_axis(std::vector<Complex>& values, const std::vector<std::size_t>& shape,
                    std::size_t axis, const Alphabet& alphabet) {
  const std::size_t q = shape[axis];
  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
  const std::size_t outer = values.size() / (q * inner);
  const Tensor kernel = fourier_factor(alphabet);
  std::vector<Complex> line(q);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * q * inner + in;
      for (std::size_t ah = 0; ah < q; ++ah) {
        Complex acc(0.0);
        for (std::size_t a = 0; a < q; ++a) acc += kernel[ah * q + a] * values[base + a * inner];
        line[ah] = acc;
      }
      for (std::size_t ah = 0; ah < q; ++ah) values[base + ah * inner] = line[ah];
    }
  }
}

}  // namespace

HoloTriple make_triple(Tensor u, Tensor s, Tensor v) {
  require_matrix(u, "U");
  require_matrix(s, "S");
  require_matrix(v, "V");
  const auto& a = u.axes()[0];
  const auto& b = u.axes()[1];
  if (!(s.axes()[0] == b) || !(s.axes()[1] == v.axes()[0]) || !(v.axes()[1] == a)) {
    throw ContractViolation("triple alphabets do not chain as A-B, B-B', B'-A");
  }
  Tensor us({a, s.axes()[1]}, matmul(u, s));
  const auto prod = matmul(us, v);
  const std::size_t n = a.size();
  const Complex c = prod[0];
  if (std::abs(c) <= 1e-12) throw NotIdentity("U*S*V has a vanishing diagonal");
  const double tol = 1e-9 * std::max(1.0, std::abs(c));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex expected = i == j ? c : Complex(0.0);
      if (std::abs(prod[i * n + j] - expected) > tol) {
        throw NotIdentity("U*S*V is not a multiple of the identity (entry " + std::to_string(i) +
                          "," + std::to_string(j) + " off by " +
                          std::to_string(std::abs(prod[i * n + j] - expected)) + ")");
      }
    }
  }
  return HoloTriple(std::move(u), std::move(s), std::move(v), c);
}

HoloTriple fourier_triple(const Alphabet& alphabet) {
  return make_triple(fourier_factor(alphabet), sign_inverter(alphabet), fourier_factor(alphabet));
}

HoloTriple transformer_triple(Tensor u, Tensor v) {
  require_matrix(u, "U");
  auto s = kronecker_delta(u.axes()[1]);
  return make_triple(std::move(u), std::move(s), std::move(v));
}

Nfg splice_chain(const Nfg& nfg, std::string_view edge, const Tensor& u, const Tensor& s,
                 const Tensor& v) {
  require_valid(nfg);
  const std::size_t target = require_internal(nfg, edge, "splice_chain");
  require_matrix(u, "U");
  require_matrix(s, "S");
  require_matrix(v, "V");
  const auto& alphabet = nfg.alphabet_of(edge);
  if (!(u.axes()[0] == alphabet) || !(v.axes()[1] == alphabet)) {
    throw ContractViolation("chain end alphabets do not match edge '" + std::string(edge) + "'");
  }
  if (!(u.axes()[1] == s.axes()[0]) || !(s.axes()[1] == v.axes()[0])) {
    throw ContractViolation("chain inner alphabets do not match");
  }

  const Incidence inc(nfg);
  IdAllocator ids(nfg);
  const std::string id(edge);
  const std::string b1 = ids.take(id + "/b1");
  const std::string b2 = ids.take(id + "/b2");
  const std::string a2 = ids.take(id + "/a");

  Nfg out;
  for (const auto& a : nfg.alphabets()) out.add_alphabet(a);
  out.add_alphabet(u.axes()[1]);
  out.add_alphabet(s.axes()[1]);
  out.set_prefactor(nfg.prefactor());
  for (std::size_t i = 0; i < nfg.variables().size(); ++i) {
    const auto& var = nfg.variables()[i];
    out.add_variable(var.id, var.alphabet, var.kind);
    if (i == target) {
      out.add_variable(b1, u.axes()[1].id(), VariableKind::kInternal);
      out.add_variable(b2, s.axes()[1].id(), VariableKind::kInternal);
      out.add_variable(a2, var.alphabet, VariableKind::kInternal);
    }
  }
  const Slot end1 = inc.slots(target)[1];
  for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
    auto factor = nfg.factors()[f];
    if (f == end1.factor) factor.ports[end1.port] = a2;
    out.add_factor(std::move(factor));
  }
  out.add_factor(ids.take(id + "/U"), {id, b1}, u);
  out.add_factor(ids.take(id + "/S"), {b1, b2}, s);
  out.add_factor(ids.take(id + "/V"), {b2, a2}, v);
  return out;
}

Nfg insert_triple(const Nfg& nfg, std::string_view edge, const HoloTriple& triple) {
  Nfg out = splice_chain(nfg, edge, triple.u(), triple.s(), triple.v());
  out.set_prefactor(nfg.prefactor().value_or(Complex(1.0)) / triple.scale());
  return out;
}

Nfg transform_external(const Nfg& nfg, std::string_view variable, const Tensor& w,
                       std::string_view new_id) {
  require_valid(nfg);
  const auto idx = nfg.variable_index(variable);
  if (!idx || !nfg.variables()[*idx].is_external()) {
    throw ContractViolation("transform_external: '" + std::string(variable) +
                            "' is not an external variable");
  }
  require_matrix(w, "W");
  if (!(w.axes()[0] == nfg.alphabet_of(variable))) {
    throw ContractViolation("transform_external: W's first alphabet must be that of '" +
                            std::string(variable) + "'");
  }
  if (nfg.has_id(new_id)) {
    throw ContractViolation("transform_external: id '" + std::string(new_id) + "' already in use");
  }
  IdAllocator ids(nfg);
  ids.take(new_id);

  Nfg out;
  for (const auto& a : nfg.alphabets()) out.add_alphabet(a);
  out.add_alphabet(w.axes()[1]);
  out.set_prefactor(nfg.prefactor());
  for (std::size_t i = 0; i < nfg.variables().size(); ++i) {
    const auto& var = nfg.variables()[i];
    if (i == *idx) {
      out.add_variable(std::string(new_id), w.axes()[1].id(), VariableKind::kExternal);
      out.add_variable(var.id, var.alphabet, VariableKind::kInternal);
    } else {
      out.add_variable(var.id, var.alphabet, var.kind);
    }
  }
  for (const auto& f : nfg.factors()) out.add_factor(f);
  out.add_factor(ids.take(std::string(variable) + "/W"), {std::string(variable), std::string(new_id)}, w);
  return out;
}

Tensor fourier_transform_factor(const Tensor& f) {
  for (const auto& a : f.axes()) {
    if (!a.is_vector_space()) {
      throw ContractViolation("Fourier transform needs vector-space alphabets; '" + a.id() +
                              "' is plain");
    }
  }
  auto values = f.values();
  const auto shape = f.shape();
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    transform_axis(values, shape, axis, f.axes()[axis]);
  }
  return Tensor(f.axes(), std::move(values));
}

DualGraph fourier_dual(const Nfg& nfg) {
  require_valid(nfg);
  for (const auto& a : nfg.alphabets()) {
    if (!a.is_vector_space()) {
      throw ContractViolation("fourier_dual: alphabet '" + a.id() + "' is not a vector space");
    }
  }
  const Incidence inc(nfg);
  IdAllocator ids(nfg);

  DualGraph dual;
  Nfg& out = dual.graph;
  for (const auto& a : nfg.alphabets()) out.add_alphabet(a);
  out.set_prefactor(nfg.prefactor());

  std::vector<std::vector<std::string>> ports;
  for (const auto& f : nfg.factors()) ports.push_back(f.ports);
  std::vector<Factor> inverters;
  for (std::size_t i = 0; i < nfg.variables().size(); ++i) {
    const auto& var = nfg.variables()[i];
    out.add_variable(var.id, var.alphabet, var.kind);
    if (var.is_external()) continue;
    dual.scale *= static_cast<double>(nfg.alphabet_of(var.id).size());
    std::string far = ids.take(var.id + "~");
    out.add_variable(far, var.alphabet, VariableKind::kInternal);
    const Slot end1 = inc.slots(i)[1];
    ports[end1.factor][end1.port] = far;
    inverters.push_back(Factor{ids.take("~" + var.id), {var.id, std::move(far)},
                               sign_inverter(nfg.alphabet_of(var.id))});
  }
  for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
    const auto& src = nfg.factors()[f];
    out.add_factor(src.id, ports[f], fourier_transform_factor(src.table));
  }
  for (auto& f : inverters) out.add_factor(std::move(f));
  return dual;
}

Nfg reparameterize_edge(const Nfg& nfg, std::string_view edge, std::span<const double> toward_first,
                        std::span<const double> toward_second) {
  require_valid(nfg);
  require_internal(nfg, edge, "reparameterize_edge");
  const auto& alphabet = nfg.alphabet_of(edge);
  const auto first = positive_diagonal(toward_first, alphabet.size(), "message toward endpoint 0");
  const auto second = positive_diagonal(toward_second, alphabet.size(), "message toward endpoint 1");
  std::vector<Complex> middle(alphabet.size());
  for (std::size_t i = 0; i < middle.size(); ++i) middle[i] = 1.0 / (first[i] * second[i]);
  auto triple = make_triple(diagonal_matrix(alphabet, first), diagonal_matrix(alphabet, middle),
                            diagonal_matrix(alphabet, second));
  return insert_triple(nfg, edge, triple);
}

Nfg reparameterize_factor(const Nfg& nfg, std::string_view factor,
                          std::span<const double> out_first, std::span<const double> out_second) {
  require_valid(nfg);
  const auto fidx = nfg.factor_index(factor);
  if (!fidx) throw ContractViolation("reparameterize_factor: no factor '" + std::string(factor) + "'");
  const Factor& psi = nfg.factors()[*fidx];
  if (psi.ports.size() != 2) {
    throw ContractViolation("reparameterize_factor: factor '" + psi.id + "' is not degree 2");
  }
  const auto& ax = psi.table.axes();
  const auto first = positive_diagonal(out_first, ax[0].size(), "message through port 0");
  const auto second = positive_diagonal(out_second, ax[1].size(), "message through port 1");

  std::vector<Complex> scaled(psi.table.size());
  for (std::size_t i = 0; i < ax[0].size(); ++i) {
    for (std::size_t j = 0; j < ax[1].size(); ++j) {
      scaled[i * ax[1].size() + j] = psi.table[i * ax[1].size() + j] / (first[i] * second[j]);
    }
  }

  IdAllocator ids(nfg);
  const std::string left = ids.take(psi.id + "/a");
  const std::string right = ids.take(psi.id + "/b");
  Nfg out;
  for (const auto& a : nfg.alphabets()) out.add_alphabet(a);
  out.set_prefactor(nfg.prefactor());
  for (const auto& v : nfg.variables()) out.add_variable(v.id, v.alphabet, v.kind);
  out.add_variable(left, nfg.variable(psi.ports[0]).alphabet, VariableKind::kInternal);
  out.add_variable(right, nfg.variable(psi.ports[1]).alphabet, VariableKind::kInternal);
  for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
    if (f == *fidx) {
      out.add_factor(ids.take(psi.id + "/U"), {psi.ports[0], left}, diagonal_matrix(ax[0], first));
      out.add_factor(psi.id, {left, right}, Tensor(ax, std::move(scaled)));
      out.add_factor(ids.take(psi.id + "/V"), {right, psi.ports[1]}, diagonal_matrix(ax[1], second));
    } else {
      out.add_factor(nfg.factors()[f]);
    }
  }
  return out;
}

}  // namespace nfg
