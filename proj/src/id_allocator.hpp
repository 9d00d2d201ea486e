#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

#include "nfg/graph.hpp"

namespace nfg::detail {

// Hands out ids unused by the source graph and by everything handed out so
// far: `base`, else `base#1`, `base#2`, ...
class IdAllocator {
 public:
  explicit IdAllocator(const GraphData& source) : source_(source) {}

  std::string take(std::string_view base) {
    std::string candidate(base);
    for (std::size_t n = 1; source_.has_id(candidate) || taken_.count(candidate); ++n) {
      candidate = std::string(base) + "#" + std::to_string(n);
    }
    taken_.insert(candidate);
    return candidate;
  }

 private:
  const GraphData& source_;
  std::unordered_set<std::string> taken_;
};

}  // namespace nfg::detail
