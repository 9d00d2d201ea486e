#pragma once

// Random graph generators and reference computations shared by the unit
// tests and the acceptance suite. The oracles here deliberately avoid the
// library's evaluators: they enumerate every variable assignment directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nfg/evaluate.hpp"
#include "nfg/graph.hpp"
#include "nfg/rewrite.hpp"

namespace nfg::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Complex random_complex(Rng& rng) {
  return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
}

inline std::vector<Complex> random_values(Rng& rng, std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& x : v) x = random_complex(rng);
  return v;
}

inline std::vector<Complex> positive_values(Rng& rng, std::size_t n, double lo = 0.5,
                                            double hi = 1.5) {
  std::vector<Complex> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline bool close(Complex a, Complex b, double rel = 1e-9, double abs = 1e-12) {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

/// Largest entry difference, relative to max(1, largest entry of `ref`).
inline double deviation(std::span<const Complex> got, std::span<const Complex> ref) {
  double scale = 1.0;
  for (const auto& x : ref) scale = std::max(scale, std::abs(x));
  double worst = got.size() == ref.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(got.size(), ref.size()); ++i) {
    worst = std::max(worst, std::abs(got[i] - ref[i]));
  }
  return worst / scale;
}

inline double deviation(const ExternalFunction& got, const ExternalFunction& ref) {
  return deviation(got.aligned_to(ref.variables).table.values(), ref.table.values());
}

/// Partition function by enumerating every assignment of every variable.
/// Output is indexed by the externals in declaration order, row-major.
inline std::vector<Complex> brute_force(const Nfg& nfg, Semiring semiring = Semiring::sum_product()) {
  const auto& vars = nfg.variables();
  std::vector<std::size_t> shape;
  for (const auto& v : vars) shape.push_back(nfg.alphabet_of(v.id).size());
  std::vector<std::vector<std::size_t>> port_index;
  for (const auto& f : nfg.factors()) {
    std::vector<std::size_t> idx;
    for (const auto& p : f.ports) idx.push_back(*nfg.variable_index(p));
    port_index.push_back(idx);
  }
  std::size_t out_size = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].is_external()) out_size *= shape[i];
  }
  std::vector<Complex> out(out_size, semiring.zero());
  std::vector<std::size_t> x(vars.size(), 0);
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rest = n;
    for (std::size_t i = vars.size(); i-- > 0;) {
      x[i] = rest % shape[i];
      rest /= shape[i];
    }
    Complex term = nfg.prefactor_in(semiring);
    for (std::size_t f = 0; f < nfg.factors().size(); ++f) {
      std::vector<std::size_t> idx;
      for (auto v : port_index[f]) idx.push_back(x[v]);
      term = semiring.mul(term, nfg.factors()[f].table.at(idx));
    }
    std::size_t slot = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].is_external()) slot = slot * shape[i] + x[i];
    }
    out[slot] = semiring.add(out[slot], term);
  }
  return out;
}

/// Semiring sum over every assignment with variable `id` held fixed, as a
/// function of that variable. Works on graphs without externals.
inline std::vector<Complex> brute_force_marginal(const Nfg& nfg, std::string_view id,
                                                 Semiring semiring = Semiring::sum_product()) {
  GraphData copy;
  for (const auto& a : nfg.alphabets()) copy.add_alphabet(a);
  for (const auto& v : nfg.variables()) {
    copy.add_variable(v.id, v.alphabet, v.id == id ? VariableKind::kExternal : v.kind);
  }
  for (const auto& f : nfg.factors()) copy.add_factor(f);
  copy.set_prefactor(nfg.prefactor());
  // brute_force only reads the graph, so the degree rule may be broken here.
  return brute_force(Nfg(copy), semiring);
}

/// Brute-force discrete Fourier transform of a function over vector-space
/// axes: F(y) = sum_x f(x) prod_i exp(2 pi i <y_i, x_i> / p).
inline std::vector<Complex> brute_dft(const Tensor& f) {
  const auto& axes = f.axes();
  std::vector<Complex> out(f.size(), Complex(0.0));
  for (std::size_t y = 0; y < f.size(); ++y) {
    const auto yi = f.multi_index(y);
    for (std::size_t x = 0; x < f.size(); ++x) {
      const auto xi = f.multi_index(x);
      double phase = 0.0;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const int p = axes[a].characteristic();
        const auto yd = axes[a].digits(yi[a]);
        const auto xd = axes[a].digits(xi[a]);
        long long dot = 0;
        for (std::size_t t = 0; t < yd.size(); ++t) dot += static_cast<long long>(yd[t]) * xd[t];
        phase += 2.0 * std::numbers::pi * static_cast<double>(dot % p) / p;
      }
      out[y] += f[x] * std::polar(1.0, phase);
    }
  }
  return out;
}

/// Dense n x m times m x k.
inline std::vector<Complex> matmul(const std::vector<Complex>& a, const std::vector<Complex>& b,
                                   std::size_t n, std::size_t m, std::size_t k) {
  std::vector<Complex> c(n * k, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) c[i * k + l] += a[i * m + j] * b[j * k + l];
  return c;
}

/// Gauss-Jordan inverse with partial pivoting.
inline std::vector<Complex> inverse(std::vector<Complex> a, std::size_t n) {
  std::vector<Complex> inv(n * n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(inv[c * n + j], inv[piv * n + j]);
    }
    const Complex d = a[c * n + c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c * n + j] /= d;
      inv[c * n + j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Complex m = a[r * n + c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= m * a[c * n + j];
        inv[r * n + j] -= m * inv[c * n + j];
      }
    }
  }
  return inv;
}

/// Random matrix far from singular: identity plus a perturbation of norm
/// below one half.
inline std::vector<Complex> well_conditioned(Rng& rng, std::size_t n) {
  std::vector<Complex> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i * n + j] = (i == j ? Complex(1.0) : Complex(0.0)) + 0.4 / n * random_complex(rng);
  return m;
}

struct GraphShape {
  std::size_t max_variables = 6;
  std::size_t max_alphabet = 4;
  std::size_t max_factors = 4;
  std::size_t max_externals = 2;
  std::size_t min_internals = 0;
  std::size_t max_internals = 6;
  /// When nonzero every alphabet is F_p.
  int field = 0;
  bool positive = false;
};

/// Random valid NFG. Slots are dealt to factors at random, so self-loops
/// and multi-edges between the same pair of factors occur.
inline Nfg random_nfg(Rng& rng, const GraphShape& shape = {}) {
  Nfg g;
  std::size_t internals = pick(rng, shape.min_internals, shape.max_internals);
  std::size_t externals = pick(rng, 0, shape.max_externals);
  while (internals + externals > shape.max_variables) {
    if (externals > 0 && (internals <= shape.min_internals || pick(rng, 0, 1))) --externals;
    else --internals;
  }
  if (internals + externals == 0) externals = 1;

  auto alphabet_for = [&](std::size_t size) {
    if (shape.field) return Alphabet("F" + std::to_string(shape.field), FieldStructure{shape.field, 1});
    return Alphabet("A" + std::to_string(size), size);
  };

  std::vector<std::string> slots;
  const std::size_t n = internals + externals;
  for (std::size_t i = 0; i < n; ++i) {
    const bool external = i >= internals;
    const std::string id = (external ? "x" : "y") + std::to_string(external ? i - internals : i);
    const auto alphabet = alphabet_for(pick(rng, 1, shape.max_alphabet));
    g.add_alphabet(alphabet);
    g.add_variable(id, alphabet.id(), external ? VariableKind::kExternal : VariableKind::kInternal);
    slots.push_back(id);
    if (!external) slots.push_back(id);
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  const std::size_t nf = std::min(pick(rng, 1, shape.max_factors), slots.size());
  std::vector<std::vector<std::string>> ports(nf);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    ports[s < nf ? s : pick(rng, 0, nf - 1)].push_back(slots[s]);
  }
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t size = 1;
    for (const auto& p : ports[f]) size *= g.alphabet_of(p).size();
    g.add_factor("f" + std::to_string(f), ports[f],
                 shape.positive ? positive_values(rng, size) : random_values(rng, size));
  }
  return g;
}

/// Random tree of `factors` vertices; each tree edge is an internal
/// variable over an alphabet of size 2 or 3, capped so the brute-force
/// oracle stays below `max_configs` internal configurations.
inline Nfg random_tree(Rng& rng, std::size_t factors, std::size_t max_configs = 20000,
                       bool integer_costs = false) {
  Nfg g;
  g.add_alphabet(Alphabet("A2", 2));
  g.add_alphabet(Alphabet("A3", 3));
  std::vector<std::vector<std::string>> ports(factors);
  std::size_t configs = 1;
  for (std::size_t v = 1; v < factors; ++v) {
    const std::size_t parent = pick(rng, 0, v - 1);
    std::size_t size = pick(rng, 2, 3);
    if (configs * size > max_configs) size = 2;
    configs *= size;
    const std::string id = "e" + std::to_string(v - 1);
    g.add_variable(id, "A" + std::to_string(size), VariableKind::kInternal);
    // Random port position keeps endpoint order independent of tree shape.
    auto& a = ports[parent];
    a.insert(a.begin() + static_cast<std::ptrdiff_t>(pick(rng, 0, a.size())), id);
    ports[v].push_back(id);
  }
  for (std::size_t f = 0; f < factors; ++f) {
    std::size_t size = 1;
    for (const auto& p : ports[f]) size *= g.alphabet_of(p).size();
    std::vector<Complex> values;
    if (integer_costs) {
      for (std::size_t i = 0; i < size; ++i) values.emplace_back(static_cast<double>(pick(rng, 0, 9)));
    } else {
      values = random_values(rng, size);
    }
    g.add_factor("v" + std::to_string(f), ports[f], std::move(values));
  }
  return g;
}

/// Random connected binary graph with `edges` internal edges among
/// `vertices` factors (a random spanning tree plus extra edges, which may
/// be self-loops when `self_loops` is set).
inline Nfg random_binary_graph(Rng& rng, std::size_t vertices, std::size_t edges, bool positive,
                               bool self_loops = false) {
  Nfg g;
  g.add_alphabet(Alphabet("B", 2));
  std::vector<std::vector<std::string>> ports(vertices);
  auto connect = [&](std::size_t a, std::size_t b, std::size_t j) {
    const std::string id = "e" + std::to_string(j);
    g.add_variable(id, "B", VariableKind::kInternal);
    ports[a].push_back(id);
    ports[b].push_back(id);
  };
  std::size_t j = 0;
  for (std::size_t v = 1; v < vertices && j < edges; ++v, ++j) connect(pick(rng, 0, v - 1), v, j);
  for (; j < edges; ++j) {
    const std::size_t a = pick(rng, 0, vertices - 1);
    std::size_t b = pick(rng, 0, vertices - 1);
    if (!self_loops && vertices > 1) {
      while (b == a) b = pick(rng, 0, vertices - 1);
    }
    connect(a, b, j);
  }
  for (std::size_t f = 0; f < vertices; ++f) {
    const std::size_t size = std::size_t{1} << ports[f].size();
    g.add_factor("v" + std::to_string(f), ports[f],
                 positive ? positive_values(rng, size) : random_values(rng, size));
  }
  return g;
}

/// Same graph with every alphabet of size p or p^2 (p prime, p <= 7)
/// replaced by the matching vector space, ids kept.
inline Nfg as_vector_spaces(const Nfg& nfg) {
  auto lift = [](const Alphabet& a) {
    for (int p : {2, 3, 5, 7}) {
      if (a.size() == static_cast<std::size_t>(p)) return Alphabet(a.id(), FieldStructure{p, 1});
      if (a.size() == static_cast<std::size_t>(p * p)) return Alphabet(a.id(), FieldStructure{p, 2});
    }
    return a;
  };
  Nfg out;
  for (const auto& a : nfg.alphabets()) out.add_alphabet(lift(a));
  for (const auto& v : nfg.variables()) out.add_variable(v.id, v.alphabet, v.kind);
  for (const auto& f : nfg.factors()) {
    std::vector<Alphabet> axes;
    for (const auto& a : f.table.axes()) axes.push_back(lift(a));
    out.add_factor(f.id, f.ports, Tensor(std::move(axes), f.table.values()));
  }
  out.set_prefactor(nfg.prefactor());
  return out;
}

/// The component of `nfg` containing variable `id`.
inline Nfg component_with(const Nfg& nfg, std::string_view id) {
  for (auto& c : components(nfg)) {
    if (c.variable_index(id)) return c;
  }
  return {};
}

}  // namespace nfg::test
