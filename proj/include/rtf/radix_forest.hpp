#pragma once

// Guide table + radix tree forest for inverse-CDF lookup.
//
// Every interval lower bound C[i] (i < n) is a leaf. Leaves are grouped by
// guide-table cell floor(C[i]*m); each cell that owns leaves gets one radix
// tree over them, built bottom-up with one logical worker per leaf. The tree
// of a cell hangs off an "anchor" node whose index is the cell's lowest leaf
// lo: the anchor's right child is the tree root, its left child the interval
// lo-1 overlapping the cell from the left. Node j always splits at C[j], so
// a lookup never needs a stored split value.

#include <array>
#include <bit>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "rtf/baseline.hpp"
#include "rtf/cell.hpp"
#include "rtf/distribution.hpp"

namespace rtf {

/// 32-bit child reference. Internal nodes are stored as their index (msb 0),
/// leaves as the bitwise complement of the interval index (msb 1).
class NodeRef {
 public:
  constexpr NodeRef() noexcept = default;

  static constexpr NodeRef leaf(std::uint32_t interval) noexcept { return NodeRef(~interval); }
  static constexpr NodeRef internal(std::uint32_t node) noexcept { return NodeRef(node); }
  static constexpr NodeRef from_bits(std::uint32_t bits) noexcept { return NodeRef(bits); }

  constexpr bool is_leaf() const noexcept { return (bits_ >> 31) != 0; }
  constexpr std::uint32_t index() const noexcept { return is_leaf() ? ~bits_ : bits_; }
  constexpr std::uint32_t bits() const noexcept { return bits_; }

  friend constexpr bool operator==(NodeRef, NodeRef) noexcept = default;

 private:
  constexpr explicit NodeRef(std::uint32_t bits) noexcept : bits_(bits) {}
  std::uint32_t bits_ = 0;
};

struct ForestNode {
  /// child[0] is taken for xi < C[node], child[1] otherwise.
  std::array<NodeRef, 2> child{};

  friend constexpr bool operator==(const ForestNode&, const ForestNode&) noexcept = default;
};

static_assert(sizeof(NodeRef) == 4 && sizeof(ForestNode) == 8);

inline constexpr std::uint32_t kMaxLeaves = 0x7FFFFFFFu;

template <std::floating_point Scalar>
using float_bits_t = std::conditional_t<sizeof(Scalar) == 8, std::uint64_t, std::uint32_t>;

/// XOR of the IEEE-754 patterns. For nonnegative floats the bit order equals
/// the numeric order, so a larger result means the two values part ways
/// higher up in the bisection tree of [0,1).
template <std::floating_point Scalar>
constexpr float_bits_t<Scalar> xor_distance(Scalar a, Scalar b) noexcept {
  using Bits = float_bits_t<Scalar>;
  return std::bit_cast<Bits>(a) ^ std::bit_cast<Bits>(b);
}

/// Non-owning view of one forest: n+1 bounds, n nodes, m table entries.
template <std::floating_point Scalar>
struct ForestView {
  std::span<const Scalar> cdf;
  std::span<const ForestNode> nodes;
  std::span<const NodeRef> table;

  std::uint32_t sample(Scalar xi, LoadCounter* counter = nullptr) const noexcept {
    NodeRef j = table[cell_of(xi, static_cast<std::uint32_t>(table.size()))];
    detail::count_load(counter);
    while (!j.is_leaf()) {
      const std::uint32_t node = j.index();
      detail::count_load(counter);
      j = nodes[node].child[xi < cdf[node] ? 0 : 1];
    }
    return j.index();
  }
};

enum class BuildMode { serial, parallel };

/// Per-slot publication tally recorded during construction.
struct PublicationAudit {
  /// Child links written by merging workers, per node slot.
  std::vector<std::uint32_t> merge_links;
  /// Cell-root links written into anchor slots.
  std::vector<std::uint32_t> root_links;
  /// Manual left-child writes into anchor slots.
  std::vector<std::uint32_t> anchor_left_links;
};

struct ForestOptions {
  BuildMode mode = BuildMode::parallel;
  /// Worker count for parallel mode; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Replace the anchor reference by a leaf reference when a cell is covered
  /// by its single owned interval alone.
  bool collapse_single_interval_cells = false;
  /// Cells deeper than ceil(log2 k) + slack are rebuilt balanced after
  /// construction. nullopt keeps the raw radix trees.
  std::optional<std::uint32_t> rebalance_slack = 2;
  PublicationAudit* audit = nullptr;
};

template <std::floating_point Scalar>
class RadixForest {
 public:
  /// Assembles a forest from raw arrays without checking them; run
  /// validate_forest before sampling data of unknown origin.
  RadixForest(Cdf<Scalar> cdf, std::vector<ForestNode> nodes, std::vector<NodeRef> table);

  const Cdf<Scalar>& cdf() const noexcept { return cdf_; }
  std::uint32_t leaves() const noexcept { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t cells() const noexcept { return static_cast<std::uint32_t>(table_.size()); }
  std::span<const ForestNode> nodes() const noexcept { return nodes_; }
  std::span<const NodeRef> table() const noexcept { return table_; }

  ForestView<Scalar> view() const noexcept { return {cdf_.bounds(), nodes_, table_}; }

  std::uint32_t sample(Scalar xi, LoadCounter* counter = nullptr) const noexcept {
    return view().sample(xi, counter);
  }

 private:
  Cdf<Scalar> cdf_;
  std::vector<ForestNode> nodes_;
  std::vector<NodeRef> table_;
};

template <std::floating_point Scalar>
RadixForest<Scalar> build_forest(const Cdf<Scalar>& cdf, std::uint32_t m, const ForestOptions& options = {});

/// A single radix tree over all leaves (one guide-table cell).
template <std::floating_point Scalar>
RadixForest<Scalar> build_tree(const Cdf<Scalar>& cdf, const ForestOptions& options = {}) {
  return build_forest(cdf, 1, options);
}

template <std::floating_point Scalar>
std::uint32_t sample_forest(const RadixForest<Scalar>& forest, Scalar xi, LoadCounter* counter = nullptr) noexcept {
  return forest.sample(xi, counter);
}

/// Node and table arrays of several forests built in one pass.
struct ForestArrays {
  std::vector<ForestNode> nodes;
  std::vector<NodeRef> table;
};

/// Builds one forest per segment in a single data-parallel pass over the
/// concatenated leaves. Segment s owns leaves [leaf_offsets[s],
/// leaf_offsets[s+1]) and the bounds starting at bounds[leaf_offsets[s] + s]
/// (each segment contributes its own n_s + 1 bounds). A neighbor outside the
/// segment is treated like one outside the cell. Child references stay local
/// to the segment, so each segment's slice of `nodes` (and its m table
/// entries) equals what build_forest produces for that segment alone.
template <std::floating_point Scalar>
ForestArrays build_forest_segments(std::span<const Scalar> bounds, std::span<const std::uint32_t> leaf_offsets,
                                   std::uint32_t m, const ForestOptions& options = {});

struct CellDepth {
  /// Leaves owned by the cell's tree (0 for pass-through cells).
  std::uint32_t leaves = 0;
  /// Internal nodes on the longest path from the table entry, anchor included.
  std::uint32_t depth = 0;
};

struct DepthStats {
  std::vector<CellDepth> cells;
  std::uint32_t max_depth = 0;
};

template <std::floating_point Scalar>
DepthStats depth_stats(const RadixForest<Scalar>& forest);

/// Rebuilds every cell whose depth exceeds ceil(log2 k) + slack as a balanced
/// tree over the same leaves (median split, same node slots). The anchor is
/// kept, so rebuilt cells end up with depth ceil(log2 k) + 1.
template <std::floating_point Scalar>
RadixForest<Scalar> rebalance_degenerate(const RadixForest<Scalar>& forest, std::uint32_t slack);

enum class ValidationCheck { Malformed, Reachability, Ordering, OracleMismatch, AnchorStructure };

std::string_view to_string(ValidationCheck check) noexcept;

struct ValidationIssue {
  ValidationCheck check;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  /// Issues beyond the recorded ones are only counted.
  std::size_t suppressed = 0;

  bool ok() const noexcept { return issues.empty(); }
  bool has(ValidationCheck check) const noexcept;
};

/// Structural and behavioral checks; never throws on corrupted input.
/// `random_probes` uniform points are compared against linear search in
/// addition to every bound and every interval midpoint.
template <std::floating_point Scalar>
ValidationReport validate_forest(const RadixForest<Scalar>& forest, std::uint32_t random_probes = 10000,
                                 std::uint64_t seed = 0x5eed);

extern template class RadixForest<float>;
extern template class RadixForest<double>;
extern template RadixForest<float> build_forest(const Cdf<float>&, std::uint32_t, const ForestOptions&);
extern template RadixForest<double> build_forest(const Cdf<double>&, std::uint32_t, const ForestOptions&);
extern template ForestArrays build_forest_segments(std::span<const float>, std::span<const std::uint32_t>,
                                                   std::uint32_t, const ForestOptions&);
extern template ForestArrays build_forest_segments(std::span<const double>, std::span<const std::uint32_t>,
                                                   std::uint32_t, const ForestOptions&);
extern template DepthStats depth_stats(const RadixForest<float>&);
extern template DepthStats depth_stats(const RadixForest<double>&);
extern template RadixForest<float> rebalance_degenerate(const RadixForest<float>&, std::uint32_t);
extern template RadixForest<double> rebalance_degenerate(const RadixForest<double>&, std::uint32_t);
extern template ValidationReport validate_forest(const RadixForest<float>&, std::uint32_t, std::uint64_t);
extern template ValidationReport validate_forest(const RadixForest<double>&, std::uint32_t, std::uint64_t);

}  // namespace rtf
