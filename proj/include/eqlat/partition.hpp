#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace eqlat {

using Point = std::uint32_t;

class PartitionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A partition of {0..n-1}, stored as a block index per point.
///
/// Block indices are canonical: blocks are numbered in order of their
/// smallest point, so two partitions are equal iff their vectors are.
class Partition {
public:
  static Partition discrete(std::size_t n);
  static Partition trivial(std::size_t n);
  /// Throws PartitionError if blocks overlap, miss a point, or name a point >= n.
  static Partition from_blocks(std::size_t n, const std::vector<std::vector<Point>>& blocks);
  /// Canonicalizes arbitrary block labels.
  static Partition from_labels(std::span<const std::uint32_t> labels);

  std::size_t points() const { return block_of_.size(); }
  std::size_t num_blocks() const { return num_blocks_; }
  std::uint32_t block_of(Point x) const { return block_of_[x]; }
  bool related(Point x, Point y) const { return block_of_[x] == block_of_[y]; }
  bool is_discrete() const { return num_blocks_ == points(); }
  bool is_trivial() const { return num_blocks_ <= 1; }

  std::vector<std::vector<Point>> blocks() const;

  /// Every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;
  /// Common refinement (intersection of the relations).
  Partition meet(const Partition& other) const;
  /// Finest common coarsening (transitive closure of the union).
  Partition join(const Partition& other) const;
  /// Restriction to the listed points, renumbered 0..k-1 in list order.
  Partition restrict(std::span<const Point> subset) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.block_of_ <=> b.block_of_; }

private:
  std::vector<std::uint32_t> block_of_;
  std::size_t num_blocks_ = 0;
};

}  // namespace eqlat
