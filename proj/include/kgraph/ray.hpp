#pragma once

// Graded, eventually periodic presentations of infinite k-graphs whose
// vertices sit on levels 0, 1, 2, ... and whose edges all go from level
// l + 1 (source) to level l (range).

#include "kgraph/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgraph {

class RayPresentation {
 public:
  /// level_sizes lists levels 0 .. prefix_length + period - 1, and
  /// blocks[i][l] is the colour-i block from level l + 1 into level l for the
  /// same range of l. Level prefix_length + period is identified with level
  /// prefix_length. Throws MalformedInput on inconsistent shapes.
  RayPresentation(std::size_t k, std::vector<std::size_t> level_sizes, std::vector<std::vector<IntMatrix>> blocks,
                  std::size_t prefix_length, std::size_t period);

  std::size_t k() const { return k_; }
  std::size_t prefix_length() const { return prefix_; }
  std::size_t period() const { return period_; }
  /// Number of listed levels (prefix + one period).
  std::size_t window() const { return prefix_ + period_; }
  const std::vector<std::size_t>& level_sizes() const { return sizes_; }

  /// Level index folded into the listed window.
  std::size_t fold(std::size_t level) const;
  std::size_t level_size(std::size_t level) const { return sizes_[fold(level)]; }
  const IntMatrix& block(std::size_t colour, std::size_t level) const { return blocks_[colour][fold(level)]; }
  const std::vector<std::vector<IntMatrix>>& blocks() const { return blocks_; }

  friend bool operator==(const RayPresentation& a, const RayPresentation& b);

 private:
  std::size_t k_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<IntMatrix>> blocks_;
  std::size_t prefix_;
  std::size_t period_;
};

struct CommutationFailure {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t level = 0;
};

struct RayValidation {
  bool commuting = true;
  std::optional<CommutationFailure> failure;
  bool no_sources = true;
  /// Yes when every block entry is positive; Unknown otherwise.
  Tristate cofinal = Tristate::Unknown;

  bool valid() const { return commuting && no_sources; }
  std::vector<std::string> diagnostics() const;
};

RayValidation validate_ray(const RayPresentation& r);

/// Bridge family: one vertex per level, b[l] colour-1 and r[l] colour-2
/// edges from level l + 1 to level l, repeating after the prefix.
RayPresentation bridge_ray(const std::vector<long>& b, const std::vector<long>& r, std::size_t prefix_length = 0);

}  // namespace kgraph
