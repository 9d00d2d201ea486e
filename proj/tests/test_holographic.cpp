#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfg/builtin_factors.hpp"
#include "nfg/errors.hpp"
#include "nfg/evaluate.hpp"
#include "nfg/holographic.hpp"
#include "nfg/sum_product.hpp"
#include "support.hpp"

using namespace nfg;
using test::Rng;

namespace {

const Alphabet kF2("F2", FieldStructure{2, 1});
const Alphabet kF3("F3", FieldStructure{3, 1});

// Rows 0..n-1 of M and columns 0..n-1 of M^-1, so U * V = I on the outer
// alphabet while the coupling alphabet is larger.
HoloTriple widening_triple(Rng& rng, const Alphabet& outer, const Alphabet& coupling) {
  const std::size_t n = outer.size(), m = coupling.size();
  const auto full = test::well_conditioned(rng, m);
  const auto inv = test::inverse(full, m);
  std::vector<Complex> u(n * m), v(m * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      u[i * m + j] = full[i * m + j];
      v[j * n + i] = inv[j * m + i];
    }
  return transformer_triple(Tensor({outer, coupling}, u), Tensor({coupling, outer}, v));
}

HoloTriple random_square_triple(Rng& rng, const Alphabet& a, Complex scale) {
  const std::size_t n = a.size();
  const auto u = test::well_conditioned(rng, n);
  auto v = test::inverse(u, n);
  for (auto& x : v) x *= scale;
  return transformer_triple(Tensor({a, a}, u), Tensor({a, a}, v));
}

Nfg cycle(std::size_t length, const Alphabet& a, Rng& rng) {
  Nfg g;
  g.add_alphabet(a);
  for (std::size_t i = 0; i < length; ++i) g.add_variable("e" + std::to_string(i), a.id(), VariableKind::kInternal);
  for (std::size_t i = 0; i < length; ++i) {
    g.add_factor("v" + std::to_string(i), {"e" + std::to_string(i), "e" + std::to_string((i + 1) % length)},
                 test::random_values(rng, a.size() * a.size()));
  }
  return g;
}

std::vector<Complex> real_parts_as_complex(const std::vector<Complex>& v) {
  std::vector<Complex> out;
  for (const auto& x : v) out.emplace_back(x.real());
  return out;
}

std::vector<double> reals(const std::vector<Complex>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.real());
  return out;
}

}  // namespace

TEST_CASE("make_triple computes the scale") {
  for (const auto& a : {kF2, kF3, Alphabet("F4", FieldStructure{2, 2}), Alphabet("F5", FieldStructure{5, 1})}) {
    const auto t = fourier_triple(a);
    CHECK(test::close(t.scale(), Complex(double(a.size()))));
  }
  Rng rng(11);
  const Alphabet a("A3", 3);
  CHECK(test::close(random_square_triple(rng, a, 1.0).scale(), Complex(1.0)));
  CHECK(test::close(random_square_triple(rng, a, Complex(0.5, 2.0)).scale(), Complex(0.5, 2.0)));

  const auto id = kronecker_delta(a);
  std::vector<Complex> two(9, Complex(0.0));
  for (std::size_t i = 0; i < 3; ++i) two[i * 4] = 2.0;
  CHECK(make_triple(id, Tensor({a, a}, two), id).scale() == Complex(2.0));

  auto skewed = two;
  skewed[4] = 2.5;
  CHECK_THROWS_AS(make_triple(id, Tensor({a, a}, skewed), id), NotIdentity);
  CHECK_THROWS_AS(make_triple(id, Tensor({a, a}, std::vector<Complex>(9, 0.0)), id), NotIdentity);
  auto offdiag = two;
  offdiag[1] = 1e-6;
  CHECK_THROWS_AS(make_triple(id, Tensor({a, a}, offdiag), id), NotIdentity);
  offdiag[1] = 1e-10;
  CHECK_NOTHROW(make_triple(id, Tensor({a, a}, offdiag), id));

  const Alphabet b("B", 2);
  CHECK_THROWS_AS(make_triple(id, kronecker_delta(b), id), ContractViolation);
  CHECK_THROWS_AS(make_triple(ones_vector(a), id, id), ContractViolation);

  CHECK(widening_triple(rng, Alphabet("A2", 2), a).coupling().size() == 3);
}

TEST_CASE("insert_triple preserves the partition function") {
  Rng rng(12);
  SUBCASE("trees, every edge") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = test::random_tree(rng, test::pick(rng, 2, 6));
      const Complex z = test::brute_force(g)[0];
      for (const auto& v : g.variables()) {
        const auto& a = g.alphabet_of(v.id);
        const auto h = insert_triple(g, v.id, random_square_triple(rng, a, test::random_complex(rng)));
        CHECK(test::close(eval_scalar(h), z));
        CHECK(h.factors().size() == g.factors().size() + 3);
        CHECK(h.variables().size() == g.variables().size() + 3);
      }
    }
  }
  SUBCASE("cycles with a mix of triples on every edge") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto& a = trial % 2 ? kF3 : kF2;
      auto g = cycle(test::pick(rng, 1, trial % 2 ? 2 : 4), a, rng);
      const Complex z = eval_scalar(g);
      const Alphabet wide("W", a.size() + 1);
      const auto edges = g.variables();
      for (std::size_t i = 0; i < edges.size(); ++i) {
        switch ((trial + i) % 3) {
          case 0: g = insert_triple(g, edges[i].id, fourier_triple(a)); break;
          case 1: g = insert_triple(g, edges[i].id, random_square_triple(rng, a, 3.0)); break;
          default: g = insert_triple(g, edges[i].id, widening_triple(rng, a, wide)); break;
        }
      }
      CHECK(test::close(eval_scalar(g), z));
    }
  }
  SUBCASE("graphs with externals") {
    test::GraphShape shape;
    shape.field = 3;
    shape.max_variables = 5;
    shape.min_internals = 1;
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = test::random_nfg(rng, shape);
      const auto before = eval_external(g);
      for (const auto& v : g.variables()) {
        if (v.is_external()) continue;
        const auto h = insert_triple(g, v.id, fourier_triple(kF3));
        CHECK(test::deviation(eval_external(h), before) <= 1e-9);
        CHECK(h.prefactor().has_value());
      }
    }
  }
  SUBCASE("rejections") {
    const auto g = test::random_tree(rng, 3);
    CHECK_THROWS_AS(insert_triple(g, "nope", fourier_triple(kF2)), ContractViolation);
    CHECK_THROWS_AS(insert_triple(g, "e0", fourier_triple(Alphabet("F7", FieldStructure{7, 1}))),
                    ContractViolation);
  }
}

TEST_CASE("splice_chain places U at endpoint 0 and keeps the id there") {
  const Alphabet a("A2", 2);
  Nfg g;
  g.add_alphabet(a);
  g.add_variable("e", "A2", VariableKind::kInternal);
  g.add_factor("left", {"e"}, std::vector<Complex>{1, 2});
  g.add_factor("right", {"e"}, std::vector<Complex>{3, 5});
  // U swaps; S and V are identities: Z = left(0) right(1) + left(1) right(0).
  const auto h = splice_chain(g, "e", Tensor({a, a}, {0, 1, 1, 0}), kronecker_delta(a), kronecker_delta(a));
  CHECK(eval_scalar(h) == Complex(1 * 5 + 2 * 3));
  CHECK(h.factor_index("e/U"));
  CHECK(h.factors()[*h.factor_index("e/U")].ports == std::vector<std::string>{"e", "e/b1"});
  CHECK(h.factors()[*h.factor_index("right")].ports == std::vector<std::string>{"e/a"});
  CHECK(!h.prefactor());
}

TEST_CASE("transform_external") {
  Rng rng(13);
  const Alphabet i3("I3", 3);
  const Alphabet f4("J4", FieldStructure{2, 2});
  Nfg g;
  g.add_alphabet(i3);
  g.add_alphabet(f4);
  g.add_variable("I", "I3", VariableKind::kInternal);
  g.add_variable("J", "J4", VariableKind::kExternal);
  g.add_factor("w", {"I"}, std::vector<Complex>{1, 2, 3});
  g.add_factor("M", {"I", "J"}, std::vector<Complex>{1, 0, 2, 0, 0, 1, 0, -1, 3, 0, 1, 1});
  const auto v = eval_external(g);
  CHECK(v.table.values() == std::vector<Complex>{10, 2, 5, 1});

  CHECK(eval_external(transform_external(g, "J", kronecker_delta(f4), "K")).table.values() ==
        v.table.values());

  const auto hat = eval_external(transform_external(g, "J", fourier_factor(f4), "K"));
  CHECK(hat.variables == std::vector<std::string>{"K"});
  CHECK(test::deviation(hat.table.values(), test::brute_dft(v.table)) <= 1e-12);

  const auto w = test::well_conditioned(rng, 4);
  const auto there = transform_external(g, "J", Tensor({f4, f4}, w), "K");
  const auto back = transform_external(there, "K", Tensor({f4, f4}, test::inverse(w, 4)), "L");
  CHECK(test::deviation(eval_external(back).table.values(), v.table.values()) <= 1e-12);

  // A non-square W changes the external alphabet.
  const Alphabet two("T2", 2);
  const auto narrowed = eval_external(transform_external(g, "J", Tensor({f4, two}, {1, 0, 0, 1, 1, 0, 0, 1}), "K"));
  CHECK(narrowed.table.values() == std::vector<Complex>{15, 3});

  // External order is kept.
  test::GraphShape shape;
  shape.min_internals = 1;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = test::random_nfg(rng, shape);
    const auto before = eval_external(r);
    for (const auto& x : before.variables) {
      const auto& a = r.alphabet_of(x);
      const auto t = transform_external(r, x, kronecker_delta(a), "new");
      auto expected = before.variables;
      std::replace(expected.begin(), expected.end(), x, std::string("new"));
      const auto after = eval_external(t);
      CHECK(after.variables == expected);
      CHECK(after.table.values() == before.table.values());
    }
  }

  CHECK_THROWS_AS(transform_external(g, "I", kronecker_delta(i3), "K"), ContractViolation);
  CHECK_THROWS_AS(transform_external(g, "J", kronecker_delta(i3), "K"), ContractViolation);
  CHECK_THROWS_AS(transform_external(g, "J", kronecker_delta(f4), "w"), ContractViolation);
}

TEST_CASE("Fourier transform of factors") {
  const auto delta = fourier_transform_factor(kronecker_delta(kF2));
  CHECK(delta.values() == std::vector<Complex>{2, 0, 0, 2});

  const auto ones = fourier_transform_factor(ones_vector(kF3));
  CHECK(test::deviation(ones.values(), std::vector<Complex>{3, 0, 0}) <= 1e-15);

  // The equality indicator on three F2 ports becomes 2 * parity check.
  const auto eq = fourier_transform_factor(equality_indicator(kF2, 3));
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t parity = (i ^ (i >> 1) ^ (i >> 2)) & 1;
    CHECK(eq[i] == Complex(parity ? 0.0 : 2.0));
  }

  // Over F3 the equality indicator becomes 3 * [a + b + c = 0].
  const auto eq3 = fourier_transform_factor(equality_indicator(kF3, 3));
  for (std::size_t i = 0; i < 27; ++i) {
    const bool zero_sum = (i / 9 + i / 3 % 3 + i % 3) % 3 == 0;
    CHECK(std::abs(eq3[i] - Complex(zero_sum ? 3.0 : 0.0)) <= 1e-12);
  }

  Rng rng(14);
  const Alphabet f4("F4", FieldStructure{2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Alphabet> axes;
    const std::size_t rank = test::pick(rng, 1, 3);
    std::size_t size = 1;
    for (std::size_t r = 0; r < rank; ++r) {
      const std::size_t which = test::pick(rng, 0, 2);
      axes.push_back(which == 0 ? kF2 : which == 1 ? kF3 : f4);
      size *= axes.back().size();
    }
    const Tensor f(axes, test::random_values(rng, size));
    const auto hat = fourier_transform_factor(f);
    CHECK(test::deviation(hat.values(), test::brute_dft(f)) <= 1e-12);

    // Transforming twice gives |A| f(-a).
    const auto twice = fourier_transform_factor(hat);
    for (std::size_t i = 0; i < size; ++i) {
      auto idx = f.multi_index(i);
      for (std::size_t r = 0; r < rank; ++r) {
        const int p = axes[r].characteristic();
        auto d = axes[r].digits(idx[r]);
        std::size_t neg = 0, place = 1;
        for (auto digit : d) {
          neg += static_cast<std::size_t>((p - digit) % p) * place;
          place *= static_cast<std::size_t>(p);
        }
        idx[r] = neg;
      }
      CHECK(std::abs(twice[i] - double(size) * f.at(idx)) <= 1e-10 * double(size));
    }
  }
  CHECK_THROWS_AS(fourier_transform_factor(ones_vector(Alphabet("plain", 2))), ContractViolation);
}

TEST_CASE("Fourier dual") {
  Rng rng(15);
  SUBCASE("no internal edges: the dual is the transformed factor") {
    Nfg g;
    g.add_alphabet(kF3);
    g.add_variable("x", "F3", VariableKind::kExternal);
    g.add_variable("y", "F3", VariableKind::kExternal);
    g.add_factor("f", {"x", "y"}, test::random_values(rng, 9));
    const auto d = fourier_dual(g);
    CHECK(d.scale == 1.0);
    CHECK(test::deviation(eval_external(d.graph).table.values(),
                          test::brute_dft(eval_external(g).table)) <= 1e-12);
  }
  SUBCASE("scale law on a hand-built F2 graph") {
    // Three internal edges, two externals: |Y| = 8.
    Nfg g;
    g.add_alphabet(kF2);
    for (auto id : {"a", "b", "c"}) g.add_variable(id, "F2", VariableKind::kInternal);
    g.add_variable("x1", "F2", VariableKind::kExternal);
    g.add_variable("x2", "F2", VariableKind::kExternal);
    g.add_factor("f", {"a", "b", "x1"}, test::random_values(rng, 8));
    g.add_factor("g", {"a", "c"}, test::random_values(rng, 4));
    g.add_factor("h", {"b", "c", "x2"}, test::random_values(rng, 8));
    const auto d = fourier_dual(g);
    CHECK(d.scale == 8.0);
    CHECK(d.graph.factors().size() == 6);
    const auto expected = test::brute_dft(eval_external(g).table);
    std::vector<Complex> scaled;
    for (const auto& x : expected) scaled.push_back(8.0 * x);
    CHECK(test::deviation(eval_external(d.graph).table.values(), scaled) <= 1e-9);
  }
  SUBCASE("random graphs over F2 and F3, and dual of dual") {
    for (int trial = 0; trial < 30; ++trial) {
      test::GraphShape shape;
      shape.field = trial % 2 ? 3 : 2;
      shape.max_variables = shape.field == 3 ? 4 : 5;
      shape.max_internals = shape.field == 3 ? 2 : 3;
      const auto g = test::random_nfg(rng, shape);
      const auto z = eval_external(g);
      const auto d = fourier_dual(g);
      double expected_scale = 1.0;
      for (const auto& v : g.variables())
        if (!v.is_external()) expected_scale *= double(shape.field);
      CHECK(d.scale == expected_scale);
      auto dz = eval_external(d.graph);
      CHECK(dz.variables == z.variables);
      auto hat = test::brute_dft(z.table);
      for (auto& x : hat) x *= d.scale;
      CHECK(test::deviation(dz.table.values(), hat) <= 1e-9);

      const auto dd = fourier_dual(d.graph);
      CHECK(dd.scale == d.scale * d.scale);
      // FT(FT(Z))(x) = |X| Z(-x).
      const auto ddz = eval_external(dd.graph);
      const double factor = d.scale * dd.scale * double(z.table.size());
      for (std::size_t i = 0; i < z.table.size(); ++i) {
        auto idx = z.table.multi_index(i);
        for (auto& k : idx) k = (shape.field - k) % shape.field;
        CHECK(test::close(ddz.table[i], factor * z.table.at(idx), 1e-8, 1e-9 * factor));
      }
    }
  }
  SUBCASE("plain alphabets are rejected") {
    CHECK_THROWS_AS(fourier_dual(test::random_tree(rng, 3)), ContractViolation);
  }
}

TEST_CASE("edge reparameterization") {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = test::random_tree(rng, test::pick(rng, 2, 7));
    // Positive factors make all tree messages positive.
    Nfg pos;
    for (const auto& a : g.alphabets()) pos.add_alphabet(a);
    for (const auto& v : g.variables()) pos.add_variable(v.id, v.alphabet, v.kind);
    for (const auto& f : g.factors())
      pos.add_factor(f.id, f.ports, test::positive_values(rng, f.table.size()));
    const Complex z = eval_scalar(pos);
    const auto state = run_tree(pos);
    for (const auto& e : state.edges()) {
      const auto fwd = reals(state.get(e, Direction::kForward));
      const auto bwd = reals(state.get(e, Direction::kBackward));
      const auto h = reparameterize_edge(pos, e, bwd, fwd);
      CHECK(test::close(eval_scalar(h), z));
      // U now emits the edge marginal into the middle of the chain.
      const auto rewritten = run_tree(h);
      const auto exposed = rewritten.get(e + "/b1", Direction::kForward);
      CHECK(test::deviation(exposed, marginal(state, e)) <= 1e-9);

      // Any positive vectors keep Z.
      std::vector<double> r1, r2;
      for (std::size_t i = 0; i < fwd.size(); ++i) {
        r1.push_back(test::uniform(rng, 0.1, 3.0));
        r2.push_back(test::uniform(rng, 0.1, 3.0));
      }
      CHECK(test::close(eval_scalar(reparameterize_edge(pos, e, r1, r2)), z));
    }
  }
  const auto g = cycle(3, Alphabet("A2", 2), rng);
  const Complex z = eval_scalar(g);
  const std::vector<double> m1{0.3, 2.0}, m2{1.5, 0.7};
  CHECK(test::close(eval_scalar(reparameterize_edge(g, "e1", m1, m2)), z));
  const std::vector<double> zero{0.0, 1.0};
  CHECK_THROWS_AS(reparameterize_edge(g, "e1", zero, m2), DivisionByZero);
  CHECK_THROWS_AS(reparameterize_edge(g, "e1", m1, zero), DivisionByZero);
  const std::vector<double> negative{-1.0, 1.0}, short_vec{1.0};
  CHECK_THROWS_AS(reparameterize_edge(g, "e1", negative, m2), ContractViolation);
  CHECK_THROWS_AS(reparameterize_edge(g, "e1", short_vec, m2), ContractViolation);
}

TEST_CASE("factor reparameterization") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& a = trial % 2 ? kF3 : Alphabet("A2", 2);
    const auto g = cycle(test::pick(rng, 2, 4), a, rng);
    const Complex z = eval_scalar(g);
    for (const auto& f : g.factors()) {
      std::vector<double> o1, o2;
      for (std::size_t i = 0; i < a.size(); ++i) {
        o1.push_back(test::uniform(rng, 0.2, 2.0));
        o2.push_back(test::uniform(rng, 0.2, 2.0));
      }
      const auto h = reparameterize_factor(g, f.id, o1, o2);
      CHECK(test::close(eval_scalar(h), z));
      const auto& s = h.factors()[*h.factor_index(f.id)];
      CHECK(test::close(s.table[1] * o1[0] * o2[1], f.table[1]));
      CHECK(h.factors().size() == g.factors().size() + 2);
    }
  }

  // On a tree, with the messages the factor really emits, the middle factor
  // of the rewrite has the edge beliefs on its ports.
  Nfg chain;
  const Alphabet b("B", 2);
  chain.add_alphabet(b);
  chain.add_variable("x", "B", VariableKind::kInternal);
  chain.add_variable("y", "B", VariableKind::kInternal);
  chain.add_factor("px", {"x"}, std::vector<Complex>{0.4, 1.1});
  chain.add_factor("psi", {"x", "y"}, std::vector<Complex>{0.9, 0.2, 0.5, 1.3});
  chain.add_factor("py", {"y"}, std::vector<Complex>{2.0, 0.6});
  const auto state = run_tree(chain);
  // psi sits at endpoint 1 of x and endpoint 0 of y.
  const auto out_first = reals(state.get("x", Direction::kBackward));
  const auto out_second = reals(state.get("y", Direction::kForward));
  const auto h = reparameterize_factor(chain, "psi", out_first, out_second);
  CHECK(test::close(eval_scalar(h), eval_scalar(chain)));
  const auto hs = run_tree(h);
  CHECK(test::deviation(hs.get("psi/a", Direction::kForward),
                        real_parts_as_complex(marginal(state, "x"))) <= 1e-12);

  Nfg tri = test::random_tree(rng, 4);
  std::vector<double> ones(3, 1.0);
  for (const auto& f : tri.factors()) {
    if (f.ports.size() != 2) {
      CHECK_THROWS_AS(reparameterize_factor(tri, f.id, ones, ones), ContractViolation);
      break;
    }
  }
  const std::vector<double> zero{0.0, 1.0}, one{1.0, 1.0};
  CHECK_THROWS_AS(reparameterize_factor(chain, "psi", zero, one), DivisionByZero);
  CHECK_THROWS_AS(reparameterize_factor(chain, "nope", one, one), ContractViolation);
}
