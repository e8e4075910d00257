#include "eqlat/partition.hpp"

#include <numeric>
#include <string>
#include <unordered_map>

namespace eqlat {

Partition Partition::discrete(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0U);
  return from_labels(labels);
}

Partition Partition::trivial(std::size_t n) {
  std::vector<std::uint32_t> labels(n, 0U);
  return from_labels(labels);
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<Point>>& blocks) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> labels(n, unset);
  for (std::uint32_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw PartitionError("empty block");
    for (Point x : blocks[b]) {
      if (x >= n) throw PartitionError("block names point " + std::to_string(x) + " outside the carrier");
      if (labels[x] != unset) throw PartitionError("point " + std::to_string(x) + " appears in two blocks");
      labels[x] = b;
    }
  }
  for (Point x = 0; x < n; ++x)
    if (labels[x] == unset) throw PartitionError("point " + std::to_string(x) + " is in no block");
  return from_labels(labels);
}

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  Partition p;
  p.block_of_.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = renumber.emplace(labels[i], static_cast<std::uint32_t>(renumber.size()));
    p.block_of_[i] = it->second;
  }
  p.num_blocks_ = renumber.size();
  return p;
}

std::vector<std::vector<Point>> Partition::blocks() const {
  std::vector<std::vector<Point>> out(num_blocks_);
  for (Point x = 0; x < points(); ++x) out[block_of_[x]].push_back(x);
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.points() != points()) return false;
  std::vector<std::uint32_t> image(num_blocks_, static_cast<std::uint32_t>(-1));
  for (Point x = 0; x < points(); ++x) {
    auto& slot = image[block_of_[x]];
    if (slot == static_cast<std::uint32_t>(-1)) slot = coarser.block_of_[x];
    else if (slot != coarser.block_of_[x]) return false;
  }
  return true;
}

Partition Partition::meet(const Partition& other) const {
  if (other.points() != points()) throw PartitionError("meet of partitions over different carriers");
  std::vector<std::uint32_t> labels(points());
  const auto stride = static_cast<std::uint32_t>(other.num_blocks_);
  for (Point x = 0; x < points(); ++x) labels[x] = block_of_[x] * stride + other.block_of_[x];
  return from_labels(labels);
}

Partition Partition::join(const Partition& other) const {
  if (other.points() != points()) throw PartitionError("join of partitions over different carriers");
  std::vector<std::uint32_t> parent(points());
  std::iota(parent.begin(), parent.end(), 0U);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite_blocks = [&](const Partition& p) {
    std::vector<std::uint32_t> first(p.num_blocks_, static_cast<std::uint32_t>(-1));
    for (Point x = 0; x < points(); ++x) {
      auto& f = first[p.block_of_[x]];
      if (f == static_cast<std::uint32_t>(-1)) f = x;
      else parent[find(x)] = find(f);
    }
  };
  unite_blocks(*this);
  unite_blocks(other);
  std::vector<std::uint32_t> labels(points());
  for (Point x = 0; x < points(); ++x) labels[x] = find(x);
  return from_labels(labels);
}

Partition Partition::restrict(std::span<const Point> subset) const {
  std::vector<std::uint32_t> labels;
  labels.reserve(subset.size());
  for (Point x : subset) {
    if (x >= points()) throw PartitionError("restriction names a point outside the carrier");
    labels.push_back(block_of_[x]);
  }
  return from_labels(labels);
}

}  // namespace eqlat
