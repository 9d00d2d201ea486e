#pragma once

#include <span>
#include <string_view>

#include "nfg/graph.hpp"
#include "nfg/tensor.hpp"

namespace nfg {

/// Chain U(a, b) S(b, b') V(b', a') whose matrix product is `scale` times the
/// identity on A. B is the coupling alphabet. Only constructible through
/// make_triple, so the identity property always holds.
class HoloTriple {
 public:
  const Tensor& u() const { return u_; }
  const Tensor& s() const { return s_; }
  const Tensor& v() const { return v_; }
  Complex scale() const { return scale_; }
  const Alphabet& outer() const { return u_.axes()[0]; }
  const Alphabet& coupling() const { return u_.axes()[1]; }

 private:
  friend HoloTriple make_triple(Tensor u, Tensor s, Tensor v);
  HoloTriple(Tensor u, Tensor s, Tensor v, Complex scale)
      : u_(std::move(u)), s_(std::move(s)), v_(std::move(v)), scale_(scale) {}

  Tensor u_, s_, v_;
  Complex scale_;
};

/// Checks the alphabet chain A-B, B-B, B-A and computes c with U*S*V = c*I.
/// Throws NotIdentity if the product deviates from c*I by more than
/// 1e-9 * max(1, |c|) in any entry, or if c vanishes.
HoloTriple make_triple(Tensor u, Tensor s, Tensor v);

/// U = V = F_A, S = Phi_~; scale |A|.
HoloTriple fourier_triple(const Alphabet& alphabet);

/// U, S = identity on the coupling alphabet, V.
HoloTriple transformer_triple(Tensor u, Tensor v);

/// Replaces internal edge `edge` by endpoint0 - U - S - V - endpoint1 and
/// divides the prefactor by the triple's scale, so the partition function
/// is unchanged. The original id stays on the endpoint-0 link.
Nfg insert_triple(const Nfg& nfg, std::string_view edge, const HoloTriple& triple);

/// Same splice without any identity requirement or prefactor adjustment.
/// u: (A, B), s: (B, C), v: (C, A) with A the edge alphabet.
Nfg splice_chain(const Nfg& nfg, std::string_view edge, const Tensor& u, const Tensor& s,
                 const Tensor& v);

/// Attaches W(x, w) to external `variable`, which becomes internal; the new
/// external `new_id` over W's second alphabet takes its place in the
/// external order. Z'(w) = sum_x Z(x) W(x, w).
Nfg transform_external(const Nfg& nfg, std::string_view variable, const Tensor& w,
                       std::string_view new_id);

/// Multidimensional Fourier transform, one kernel per axis:
/// F(a_hat) = sum_a f(a) prod_i omega^<a_hat_i, a_i>. Every axis must be a
/// vector-space alphabet.
Tensor fourier_transform_factor(const Tensor& f);

struct DualGraph {
  Nfg graph;
  /// |Y|, the product of the internal alphabet sizes of the input.
  double scale = 1.0;
};

/// Dual normal factor graph: each factor replaced by its Fourier transform
/// and a sign inverter placed in the middle of every internal edge (the
/// endpoint-1 half gets a fresh id). Externals keep their ids and are read
/// as dual variables. eval_external(dual) = scale * FT(eval_external(nfg)).
DualGraph fourier_dual(const Nfg& nfg);

/// Rewrites internal `edge` as diag(toward_first) - diag(1 / (toward_first *
/// toward_second)) - diag(toward_second). `toward_first` is the message
/// arriving at endpoint 0, `toward_second` the one arriving at endpoint 1.
/// With sum-product messages, the message emitted by U into the middle is
/// the edge marginal. Throws DivisionByZero on a zero entry.
Nfg reparameterize_edge(const Nfg& nfg, std::string_view edge, std::span<const double> toward_first,
                        std::span<const double> toward_second);

/// Replaces the degree-2 factor psi(x, x') by U = diag(out_first),
/// S = psi / (out_first (x) out_second), V = diag(out_second), where
/// out_first / out_second are the messages psi emits through its ports 0 / 1.
Nfg reparameterize_factor(const Nfg& nfg, std::string_view factor,
                          std::span<const double> out_first, std::span<const double> out_second);

}  // namespace nfg
