#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nfg/graph.hpp"

namespace nfg {

/// x' = (6364136223846793005 x + 1442695040888963407) mod 2^63.
/// Every draw advances the state once.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed & kMask) {}

  std::uint64_t next() {
    state_ = (state_ * 6364136223846793005ULL + 1442695040888963407ULL) & kMask;
    return state_;
  }
  /// Top 53 of the 63 state bits, scaled to [0, 1).
  double uniform() { return static_cast<double>(next() >> 10) * 0x1.0p-53; }
  /// 2 * uniform() - 1, in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }
  /// lo + floor(uniform() * (hi - lo + 1)).
  long long integer(long long lo, long long hi) {
    return lo + static_cast<long long>(uniform() * static_cast<double>(hi - lo + 1));
  }

 private:
  static constexpr std::uint64_t kMask = (std::uint64_t{1} << 63) - 1;
  std::uint64_t state_;
};

inline constexpr std::uint64_t kCorpusSeed = 20100304;
inline constexpr int kCorpusTrials = 25;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Trace-diagram builders. All alphabets are plain; vectors and matrices
// become dense factors.

/// Tr(M_1 M_2 ... M_n) as a closed chain of square complex matrices.
Nfg trace_chain(std::span<const std::vector<Complex>> matrices, std::size_t dim);

/// eps(I, J, K) with row vectors M_1 on I, M_2 on J, M_3 on K.
Nfg determinant_graph(const Mat3& rows);

/// Two Levi-Civita factors joined on K: eps(I, J, K) eps(K, L, M), externals
/// I, J, L, M.
Nfg contracted_epsilon_lhs();

/// delta(I, L) delta(J, M) and delta(I, M) delta(J, L), externals I, J, L, M.
Nfg delta_pair(bool crossed);

/// (u x v) x w with external output L.
Nfg double_cross_graph(const Vec3& u, const Vec3& v, const Vec3& w);

/// (a . b) c as a graph with external output L.
Nfg scaled_vector_graph(const Vec3& a, const Vec3& b, const Vec3& c);

/// (u x v) . (w x x).
Nfg cross_dot_graph(const Vec3& u, const Vec3& v, const Vec3& w, const Vec3& x);

/// (a . b)(c . d).
Nfg dot_pair_graph(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

struct IdentityResult {
  std::string name;
  bool passed = false;
  /// Largest absolute deviation between the two sides over all trials.
  double deviation = 0.0;
  /// 0 for identities that must hold exactly.
  double tolerance = 0.0;
  int trials = 0;
};

/// Trace cyclicity, the determinant against cofactor expansion (three
/// rotations), the contracted epsilon identity and both cross-product
/// identities, each over `trials` draws from Lcg(seed).
std::vector<IdentityResult> verify_corpus(std::uint64_t seed = kCorpusSeed,
                                          int trials = kCorpusTrials);

}  // namespace nfg
