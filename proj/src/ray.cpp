#include "kgraph/ray.hpp"

#include "kgraph/errors.hpp"

#include <sstream>

namespace kgraph {

RayPresentation::RayPresentation(std::size_t k, std::vector<std::size_t> level_sizes,
                                 std::vector<std::vector<IntMatrix>> blocks, std::size_t prefix_length,
                                 std::size_t period)
    : k_(k), sizes_(std::move(level_sizes)), blocks_(std::move(blocks)), prefix_(prefix_length), period_(period) {
  if (k_ == 0) throw MalformedInput("k must be positive");
  if (period_ == 0) throw MalformedInput("period must be at least 1");
  if (sizes_.size() != window())
    throw MalformedInput("level_sizes has " + std::to_string(sizes_.size()) + " entries, expected prefix_length + period = " +
                         std::to_string(window()));
  for (std::size_t s : sizes_)
    if (s == 0) throw MalformedInput("level sizes must be positive");
  if (blocks_.size() != k_)
    throw MalformedInput("blocks lists " + std::to_string(blocks_.size()) + " colours, expected " + std::to_string(k_));
  for (std::size_t i = 0; i < k_; ++i) {
    if (blocks_[i].size() != window())
      throw MalformedInput("colour " + std::to_string(i) + " lists " + std::to_string(blocks_[i].size()) +
                           " blocks, expected " + std::to_string(window()));
    for (std::size_t l = 0; l < window(); ++l) {
      const IntMatrix& b = blocks_[i][l];
      const auto rows = static_cast<Index>(level_size(l));
      const auto cols = static_cast<Index>(level_size(l + 1));
      if (b.rows() != rows || b.cols() != cols) {
        std::ostringstream msg;
        msg << "block (colour " << i << ", level " << l << ") has shape " << b.rows() << "x" << b.cols() << ", expected "
            << rows << "x" << cols;
        throw MalformedInput(msg.str());
      }
      for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
          if (b(r, c) < 0)
            throw MalformedInput("block (colour " + std::to_string(i) + ", level " + std::to_string(l) +
                                 ") has a negative entry");
    }
  }
}

std::size_t RayPresentation::fold(std::size_t level) const {
  if (level < window()) return level;
  return prefix_ + (level - prefix_) % period_;
}

bool operator==(const RayPresentation& a, const RayPresentation& b) {
  if (a.k_ != b.k_ || a.sizes_ != b.sizes_ || a.prefix_ != b.prefix_ || a.period_ != b.period_) return false;
  for (std::size_t i = 0; i < a.k_; ++i)
    for (std::size_t l = 0; l < a.window(); ++l)
      if (a.blocks_[i][l] != b.blocks_[i][l]) return false;
  return true;
}

std::vector<std::string> RayValidation::diagnostics() const {
  std::vector<std::string> out;
  if (failure) {
    std::ostringstream msg;
    msg << "graded commutation fails for colours (" << failure->i << "," << failure->j << ") at level " << failure->level;
    out.push_back(msg.str());
  }
  if (!no_sources) out.push_back("some block has a zero row (source)");
  return out;
}

RayValidation validate_ray(const RayPresentation& r) {
  RayValidation out;
  // Every level index beyond the window folds back into it, so checking l in
  // the window covers all levels.
  for (std::size_t l = 0; l < r.window() && out.commuting; ++l)
    for (std::size_t i = 0; i < r.k() && out.commuting; ++i)
      for (std::size_t j = i + 1; j < r.k(); ++j) {
        const IntMatrix ij = r.block(i, l) * r.block(j, l + 1);
        const IntMatrix ji = r.block(j, l) * r.block(i, l + 1);
        if (ij != ji) {
          out.commuting = false;
          out.failure = CommutationFailure{i, j, l};
          break;
        }
      }

  bool all_positive = true;
  for (std::size_t i = 0; i < r.k(); ++i)
    for (std::size_t l = 0; l < r.window(); ++l) {
      const IntMatrix& b = r.block(i, l);
      for (Index row = 0; row < b.rows(); ++row) {
        bool nonzero = false;
        for (Index c = 0; c < b.cols(); ++c) {
          if (b(row, c) != 0) nonzero = true;
          if (b(row, c) <= 0) all_positive = false;
        }
        if (!nonzero) out.no_sources = false;
      }
    }
  out.cofinal = all_positive ? Tristate::Yes : Tristate::Unknown;
  return out;
}

RayPresentation bridge_ray(const std::vector<long>& b, const std::vector<long>& r, std::size_t prefix_length) {
  if (b.empty() || b.size() != r.size()) throw MalformedInput("bridge needs equally long, nonempty b and r lists");
  if (prefix_length >= b.size()) throw MalformedInput("bridge prefix must be shorter than the listed levels");
  const std::size_t window = b.size();
  std::vector<std::vector<IntMatrix>> blocks(2);
  for (std::size_t l = 0; l < window; ++l) {
    IntMatrix one_b(1, 1), one_r(1, 1);
    one_b(0, 0) = Integer(b[l]);
    one_r(0, 0) = Integer(r[l]);
    blocks[0].push_back(one_b);
    blocks[1].push_back(one_r);
  }
  return RayPresentation(2, std::vector<std::size_t>(window, 1), std::move(blocks), prefix_length, window - prefix_length);
}

}  // namespace kgraph
