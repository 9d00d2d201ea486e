#include "nfg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "nfg/builtin_factors.hpp"
#include "nfg/evaluate.hpp"

namespace nfg {

namespace {

const Alphabet kSpace("R3", 3);

Nfg space_graph(std::initializer_list<std::pair<const char*, VariableKind>> variables) {
  Nfg g;
  g.add_alphabet(kSpace);
  for (const auto& [id, kind] : variables) g.add_variable(id, kSpace.id(), kind);
  return g;
}

std::vector<Complex> real_values(const Vec3& v) { return {v[0], v[1], v[2]}; }

void add_vector(Nfg& g, const std::string& id, const std::string& port, const Vec3& v) {
  g.add_factor(id, {port}, real_values(v));
}

void add_epsilon(Nfg& g, const std::string& id, std::vector<std::string> ports) {
  g.add_factor(id, std::move(ports), levi_civita(kSpace));
}

long long cofactor_determinant(const std::array<std::array<long long, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double max_deviation(const ExternalFunction& a, const ExternalFunction& b) {
  const auto aligned = b.aligned_to(a.variables);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    worst = std::max(worst, std::abs(a.table[i] - aligned.table[i]));
  }
  return worst;
}

Vec3 draw_vector(Lcg& rng) { return {rng.symmetric(), rng.symmetric(), rng.symmetric()}; }

}  // namespace

Nfg trace_chain(std::span<const std::vector<Complex>> matrices, std::size_t dim) {
  Nfg g;
  const Alphabet a("N", dim);
  g.add_alphabet(a);
  const std::size_t n = matrices.size();
  for (std::size_t i = 0; i < n; ++i) {
    g.add_variable("x" + std::to_string(i), a.id(), VariableKind::kInternal);
  }
  // Factor i carries M_{i+1}(x_i, x_{i+1}); the last one closes the loop.
  for (std::size_t i = 0; i < n; ++i) {
    g.add_factor("M" + std::to_string(i + 1),
                 {"x" + std::to_string(i), "x" + std::to_string((i + 1) % n)}, matrices[i]);
  }
  return g;
}

Nfg determinant_graph(const Mat3& rows) {
  auto g = space_graph({{"I", VariableKind::kInternal},
                        {"J", VariableKind::kInternal},
                        {"K", VariableKind::kInternal}});
  add_epsilon(g, "eps", {"I", "J", "K"});
  add_vector(g, "M1", "I", rows[0]);
  add_vector(g, "M2", "J", rows[1]);
  add_vector(g, "M3", "K", rows[2]);
  return g;
}

Nfg contracted_epsilon_lhs() {
  auto g = space_graph({{"I", VariableKind::kExternal},
                        {"J", VariableKind::kExternal},
                        {"K", VariableKind::kInternal},
                        {"L", VariableKind::kExternal},
                        {"M", VariableKind::kExternal}});
  add_epsilon(g, "eps1", {"I", "J", "K"});
  add_epsilon(g, "eps2", {"K", "L", "M"});
  return g;
}

Nfg delta_pair(bool crossed) {
  auto g = space_graph({{"I", VariableKind::kExternal},
                        {"J", VariableKind::kExternal},
                        {"L", VariableKind::kExternal},
                        {"M", VariableKind::kExternal}});
  g.add_factor("delta1", {"I", crossed ? "M" : "L"}, kronecker_delta(kSpace));
  g.add_factor("delta2", {"J", crossed ? "L" : "M"}, kronecker_delta(kSpace));
  return g;
}

Nfg double_cross_graph(const Vec3& u, const Vec3& v, const Vec3& w) {
  auto g = space_graph({{"A", VariableKind::kInternal},
                        {"U", VariableKind::kInternal},
                        {"V", VariableKind::kInternal},
                        {"W", VariableKind::kInternal},
                        {"L", VariableKind::kExternal}});
  add_epsilon(g, "eps1", {"A", "U", "V"});
  add_epsilon(g, "eps2", {"L", "A", "W"});
  add_vector(g, "u", "U", u);
  add_vector(g, "v", "V", v);
  add_vector(g, "w", "W", w);
  return g;
}

Nfg scaled_vector_graph(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto g = space_graph({{"X", VariableKind::kInternal}, {"L", VariableKind::kExternal}});
  add_vector(g, "a", "X", a);
  add_vector(g, "b", "X", b);
  add_vector(g, "c", "L", c);
  return g;
}

Nfg cross_dot_graph(const Vec3& u, const Vec3& v, const Vec3& w, const Vec3& x) {
  auto g = space_graph({{"K", VariableKind::kInternal},
                        {"U", VariableKind::kInternal},
                        {"V", VariableKind::kInternal},
                        {"W", VariableKind::kInternal},
                        {"X", VariableKind::kInternal}});
  add_epsilon(g, "eps1", {"K", "U", "V"});
  add_epsilon(g, "eps2", {"K", "W", "X"});
  add_vector(g, "u", "U", u);
  add_vector(g, "v", "V", v);
  add_vector(g, "w", "W", w);
  add_vector(g, "x", "X", x);
  return g;
}

Nfg dot_pair_graph(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  auto g = space_graph({{"P", VariableKind::kInternal}, {"Q", VariableKind::kInternal}});
  add_vector(g, "a", "P", a);
  add_vector(g, "b", "P", b);
  add_vector(g, "c", "Q", c);
  add_vector(g, "d", "Q", d);
  return g;
}

std::vector<IdentityResult> verify_corpus(std::uint64_t seed, int trials) {
  Lcg rng(seed);
  std::vector<IdentityResult> results;
  auto finish = [&](IdentityResult r) {
    r.trials = trials;
    r.passed = r.deviation <= r.tolerance;
    results.push_back(std::move(r));
  };

  {
    IdentityResult r{"trace_cyclicity", false, 0.0, 1e-9};
    constexpr std::size_t dim = 4;
    for (int t = 0; t < trials; ++t) {
      std::vector<std::vector<Complex>> m(3, std::vector<Complex>(dim * dim));
      for (auto& matrix : m) {
        for (auto& x : matrix) {
          const double re = rng.symmetric();
          x = Complex(re, rng.symmetric());
        }
      }
      const std::vector<std::vector<Complex>> rotated{m[1], m[2], m[0]};
      const Complex abc = eval_scalar(trace_chain(m, dim));
      const Complex bca = eval_scalar(trace_chain(rotated, dim));
      r.deviation = std::max(r.deviation, std::abs(abc - bca));
    }
    finish(r);
  }

  {
    IdentityResult r{"determinant", false, 0.0, 0.0};
    for (int t = 0; t < trials; ++t) {
      std::array<std::array<long long, 3>, 3> m{};
      Mat3 rows{};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          m[i][j] = rng.integer(-9, 9);
          rows[i][j] = static_cast<double>(m[i][j]);
        }
      }
      const auto expected = static_cast<double>(cofactor_determinant(m));
      for (int shift = 0; shift < 3; ++shift) {
        const Mat3 rotated{rows[shift], rows[(shift + 1) % 3], rows[(shift + 2) % 3]};
        const Complex det = eval_scalar(determinant_graph(rotated));
        r.deviation = std::max(r.deviation, std::abs(det - Complex(expected)));
      }
    }
    finish(r);
  }

  {
    IdentityResult r{"contracted_epsilon", false, 0.0, 0.0};
    const auto lhs = eval_external(contracted_epsilon_lhs());
    const std::vector<LinearTerm> rhs{{Complex(1.0), delta_pair(false)},
                                      {Complex(-1.0), delta_pair(true)}};
    r.deviation = max_deviation(lhs, eval_linear_combination(rhs));
    finish(r);
    results.back().trials = 1;
  }

  {
    IdentityResult r{"cross_product_triple", false, 0.0, 1e-9};
    for (int t = 0; t < trials; ++t) {
      const Vec3 u = draw_vector(rng), v = draw_vector(rng), w = draw_vector(rng);
      const auto lhs = eval_external(double_cross_graph(u, v, w));
      const std::vector<LinearTerm> rhs{{Complex(1.0), scaled_vector_graph(u, w, v)},
                                        {Complex(-1.0), scaled_vector_graph(v, w, u)}};
      r.deviation = std::max(r.deviation, max_deviation(lhs, eval_linear_combination(rhs)));
    }
    finish(r);
  }

  {
    IdentityResult r{"cross_product_dot", false, 0.0, 1e-9};
    for (int t = 0; t < trials; ++t) {
      const Vec3 u = draw_vector(rng), v = draw_vector(rng), w = draw_vector(rng),
                 x = draw_vector(rng);
      const auto lhs = eval_external(cross_dot_graph(u, v, w, x));
      const std::vector<LinearTerm> rhs{{Complex(1.0), dot_pair_graph(u, w, v, x)},
                                        {Complex(-1.0), dot_pair_graph(u, x, v, w)}};
      r.deviation = std::max(r.deviation, max_deviation(lhs, eval_linear_combination(rhs)));
    }
    finish(r);
  }

  return results;
}

}  // namespace nfg
