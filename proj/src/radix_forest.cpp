#include "rtf/radix_forest.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <memory>
#include <thread>

#include "rtf/sequences.hpp"

namespace rtf {

namespace {

constexpr std::uint32_t kUnsetBits = 0x7FFFFFFFu;

std::uint32_t ceil_log2(std::uint32_t k) noexcept {
  return k <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(k - 1));
}

/// One segment of the flattened build input.
template <std::floating_point Scalar>
struct Segment {
  std::span<const Scalar> bounds;  // n + 1 values
  std::uint32_t first_leaf = 0;    // global index of local leaf 0
  std::uint32_t index = 0;

  std::uint32_t leaves() const noexcept { return static_cast<std::uint32_t>(bounds.size() - 1); }
};

/// Shared state of the bottom-up merge. Workers only touch disjoint node
/// slots; the exchange on `other_bounds` decides which of two siblings
/// continues upward.
template <std::floating_point Scalar>
class MergePass {
 public:
  MergePass(std::span<const Scalar> bounds, std::span<const std::uint32_t> leaf_offsets, std::uint32_t m,
            ForestArrays& out, PublicationAudit* audit)
      : bounds_(bounds), leaf_offsets_(leaf_offsets), m_(m), out_(out), audit_(audit) {
    const std::uint32_t total = leaf_offsets.back();
    other_bounds_ = std::make_unique<std::atomic<std::int32_t>[]>(total);
    for (std::uint32_t i = 0; i < total; ++i) other_bounds_[i].store(-1, std::memory_order_relaxed);
    if (audit_) {
      merge_links_ = std::make_unique<std::atomic<std::uint32_t>[]>(total);
      root_links_ = std::make_unique<std::atomic<std::uint32_t>[]>(total);
      left_links_ = std::make_unique<std::atomic<std::uint32_t>[]>(total);
      for (std::uint32_t i = 0; i < total; ++i) {
        merge_links_[i].store(0, std::memory_order_relaxed);
        root_links_[i].store(0, std::memory_order_relaxed);
        left_links_[i].store(0, std::memory_order_relaxed);
      }
    }
  }

  Segment<Scalar> segment(std::uint32_t s) const noexcept {
    const std::uint32_t first = leaf_offsets_[s];
    const std::uint32_t count = leaf_offsets_[s + 1] - first;
    return {bounds_.subspan(first + s, count + 1), first, s};
  }

  /// Runs the merge state machine of every leaf in [begin, end) (global
  /// indices), starting inside segment `s`.
  void run(std::uint32_t begin, std::uint32_t end, std::uint32_t s) {
    while (begin < end) {
      while (leaf_offsets_[s + 1] <= begin) ++s;
      const Segment<Scalar> seg = segment(s);
      const std::uint32_t stop = std::min(end, leaf_offsets_[s + 1]);
      for (std::uint32_t i = begin; i < stop; ++i) merge_leaf(seg, i - seg.first_leaf);
      begin = stop;
    }
  }

  void flush_audit(std::uint32_t total) const {
    if (!audit_) return;
    audit_->merge_links.resize(total);
    audit_->root_links.resize(total);
    audit_->anchor_left_links.resize(total);
    for (std::uint32_t i = 0; i < total; ++i) {
      audit_->merge_links[i] = merge_links_[i].load(std::memory_order_relaxed);
      audit_->root_links[i] = root_links_[i].load(std::memory_order_relaxed);
      audit_->anchor_left_links[i] = left_links_[i].load(std::memory_order_relaxed);
    }
  }

 private:
  void merge_leaf(const Segment<Scalar>& seg, std::uint32_t leaf) {
    using Bits = float_bits_t<Scalar>;
    constexpr Bits kOutside = std::numeric_limits<Bits>::max();
    const std::span<const Scalar> c = seg.bounds;
    const std::uint32_t n = seg.leaves();
    const std::uint32_t cur_cell = cell_of(c[leaf], m_);

    std::uint32_t lo = leaf;
    std::uint32_t hi = leaf;
    NodeRef node_id = NodeRef::leaf(leaf);
    for (;;) {
      const bool low_outside = lo == 0 || cell_of(c[lo - 1], m_) != cur_cell;
      const bool high_outside = hi + 1 == n || cell_of(c[hi + 1], m_) != cur_cell;

      if (low_outside && high_outside) {
        // Cell root: hang it off the anchor slot lo, which no in-cell
        // internal node uses (those live in (lo, hi]).
        ForestNode& anchor = out_.nodes[seg.first_leaf + lo];
        anchor.child[1] = node_id;
        anchor.child[0] = NodeRef::leaf(lo == 0 ? 0 : lo - 1);
        out_.table[std::size_t{seg.index} * m_ + cur_cell] = NodeRef::internal(lo);
        if (audit_) {
          root_links_[seg.first_leaf + lo].fetch_add(1, std::memory_order_relaxed);
          left_links_[seg.first_leaf + lo].fetch_add(1, std::memory_order_relaxed);
        }
        return;
      }

      const Bits dist_low = low_outside ? kOutside : xor_distance(c[lo], c[lo - 1]);
      const Bits dist_high = high_outside ? kOutside : xor_distance(c[hi], c[hi + 1]);
      const int child = dist_low > dist_high ? 0 : 1;
      const std::uint32_t parent = child == 0 ? hi + 1 : lo;
      const std::uint32_t slot = seg.first_leaf + parent;

      out_.nodes[slot].child[child] = node_id;
      if (audit_) merge_links_[slot].fetch_add(1, std::memory_order_relaxed);
      const auto published = static_cast<std::int32_t>(child == 0 ? lo : hi);
      const std::int32_t other = other_bounds_[slot].exchange(published, std::memory_order_acq_rel);
      if (other == -1) return;  // sibling not done yet; it carries on
      if (child == 0) {
        hi = static_cast<std::uint32_t>(other);
      } else {
        lo = static_cast<std::uint32_t>(other);
      }
      node_id = NodeRef::internal(parent);
    }
  }

  std::span<const Scalar> bounds_;
  std::span<const std::uint32_t> leaf_offsets_;
  std::uint32_t m_;
  ForestArrays& out_;
  PublicationAudit* audit_;
  std::unique_ptr<std::atomic<std::int32_t>[]> other_bounds_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> merge_links_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> root_links_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> left_links_;
};

/// Leaf count and height (internal nodes) of the subtree at `root`. Returns
/// nullopt when the structure is not a tree over in-range slots.
std::optional<std::pair<std::uint32_t, std::uint32_t>> measure_tree(std::span<const ForestNode> nodes, NodeRef root) {
  const auto n = static_cast<std::uint32_t>(nodes.size());
  std::uint32_t leaves = 0;
  std::uint32_t height = 0;
  std::uint64_t visited = 0;
  std::vector<std::pair<NodeRef, std::uint32_t>> stack{{root, 0}};
  while (!stack.empty()) {
    const auto [ref, depth] = stack.back();
    stack.pop_back();
    if (ref.is_leaf()) {
      if (ref.index() >= n) return std::nullopt;
      ++leaves;
      height = std::max(height, depth);
      continue;
    }
    if (ref.index() >= n || ++visited > n) return std::nullopt;
    for (const NodeRef child : nodes[ref.index()].child) stack.emplace_back(child, depth + 1);
  }
  return std::pair{leaves, height};
}

NodeRef build_balanced(std::span<ForestNode> nodes, std::uint32_t a, std::uint32_t b) {
  if (a == b) return NodeRef::leaf(a);
  const std::uint32_t split = a + (b - a + 1) / 2;
  nodes[split].child[0] = build_balanced(nodes, a, split - 1);
  nodes[split].child[1] = build_balanced(nodes, split, b);
  return NodeRef::internal(split);
}

void rebalance_cells(std::span<ForestNode> nodes, std::span<const NodeRef> table, std::uint32_t slack) {
  for (const NodeRef entry : table) {
    if (entry.is_leaf()) continue;
    const std::uint32_t anchor = entry.index();
    const auto shape = measure_tree(nodes, nodes[anchor].child[1]);
    if (!shape) throw Error(ErrorCode::InvalidArgument, "cannot rebalance a malformed forest");
    const auto [leaves, height] = *shape;
    if (height + 1 > ceil_log2(leaves) + slack) {
      nodes[anchor].child[1] = build_balanced(nodes, anchor, anchor + leaves - 1);
    }
  }
}

/// Cells that own no leaf are covered by a single interval: the one
/// containing the cell start.
template <std::floating_point Scalar>
void fill_pass_through(std::span<const Scalar> c, std::span<NodeRef> table) {
  const auto m = static_cast<std::uint32_t>(table.size());
  const auto n = static_cast<std::uint32_t>(c.size() - 1);
  for (std::uint32_t g = 0; g < m; ++g) {
    if (table[g].bits() == kUnsetBits) {
      table[g] = NodeRef::leaf(detail::bisect(c, cell_start<Scalar>(g, m), 0u, n - 1, nullptr));
    }
  }
}

/// A cell whose only leaf starts exactly at the cell start is covered by that
/// interval alone and can skip its anchor.
template <std::floating_point Scalar>
void collapse_single_interval_cells(std::span<const Scalar> c, std::span<const ForestNode> nodes,
                                    std::span<NodeRef> table) {
  const auto m = static_cast<std::uint32_t>(table.size());
  for (std::uint32_t g = 0; g < m; ++g) {
    if (table[g].is_leaf()) continue;
    const std::uint32_t anchor = table[g].index();
    if (nodes[anchor].child[1].is_leaf() && c[anchor] == cell_start<Scalar>(g, m)) {
      table[g] = NodeRef::leaf(anchor);
    }
  }
}

template <std::floating_point Scalar>
void check_segment(std::span<const Scalar> c) {
  if (c.size() < 2) throw Error(ErrorCode::InvalidArgument, "segment without intervals");
  if (c.size() - 1 > kMaxLeaves) throw Error(ErrorCode::TooLarge, "too many intervals for 32-bit references");
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!(c[i] < c[i + 1])) {
      throw Error(ErrorCode::NotStrictlyIncreasing, "bounds " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                                        " are not strictly increasing");
    }
  }
}

}  // namespace

template <std::floating_point Scalar>
RadixForest<Scalar>::RadixForest(Cdf<Scalar> cdf, std::vector<ForestNode> nodes, std::vector<NodeRef> table)
    : cdf_(std::move(cdf)), nodes_(std::move(nodes)), table_(std::move(table)) {
  if (nodes_.size() != cdf_.intervals()) {
    throw Error(ErrorCode::LengthMismatch, "forest needs one node per interval");
  }
  if (table_.empty()) throw Error(ErrorCode::InvalidArgument, "forest needs at least one guide-table cell");
}

template <std::floating_point Scalar>
ForestArrays build_forest_segments(std::span<const Scalar> bounds, std::span<const std::uint32_t> leaf_offsets,
                                   std::uint32_t m, const ForestOptions& options) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "guide table needs at least one cell");
  if (leaf_offsets.size() < 2 || leaf_offsets.front() != 0) {
    throw Error(ErrorCode::InvalidArgument, "segment offsets must start at 0 and name at least one segment");
  }
  const auto segments = static_cast<std::uint32_t>(leaf_offsets.size() - 1);
  const std::uint32_t total = leaf_offsets.back();
  if (total > kMaxLeaves) throw Error(ErrorCode::TooLarge, "too many intervals for 32-bit references");
  if (bounds.size() != std::size_t{total} + segments) {
    throw Error(ErrorCode::LengthMismatch, "bounds do not match the segment offsets");
  }

  ForestArrays out;
  out.nodes.resize(total);
  out.table.assign(std::size_t{segments} * m, NodeRef::from_bits(kUnsetBits));
  MergePass<Scalar> pass(bounds, leaf_offsets, m, out, options.audit);
  for (std::uint32_t s = 0; s < segments; ++s) {
    if (leaf_offsets[s + 1] <= leaf_offsets[s]) throw Error(ErrorCode::InvalidArgument, "empty segment");
    check_segment(pass.segment(s).bounds);
  }

  unsigned workers = 1;
  if (options.mode == BuildMode::parallel) {
    workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, total);
  }
  if (workers <= 1) {
    pass.run(0, total, 0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const auto begin = static_cast<std::uint32_t>(std::uint64_t{total} * w / workers);
      const auto end = static_cast<std::uint32_t>(std::uint64_t{total} * (w + 1) / workers);
      const auto first_segment = static_cast<std::uint32_t>(
          std::upper_bound(leaf_offsets.begin(), leaf_offsets.end(), begin) - leaf_offsets.begin() - 1);
      pool.emplace_back([&pass, begin, end, first_segment] { pass.run(begin, end, first_segment); });
    }
  }
  pass.flush_audit(total);

  for (std::uint32_t s = 0; s < segments; ++s) {
    const auto seg = pass.segment(s);
    const std::span<ForestNode> nodes(out.nodes.data() + seg.first_leaf, seg.leaves());
    const std::span<NodeRef> table(out.table.data() + std::size_t{s} * m, m);
    fill_pass_through<Scalar>(seg.bounds, table);
    if (options.rebalance_slack) rebalance_cells(nodes, table, *options.rebalance_slack);
    if (options.collapse_single_interval_cells) collapse_single_interval_cells<Scalar>(seg.bounds, nodes, table);
  }
  return out;
}

template <std::floating_point Scalar>
RadixForest<Scalar> build_forest(const Cdf<Scalar>& cdf, std::uint32_t m, const ForestOptions& options) {
  if (cdf.intervals() > kMaxLeaves) throw Error(ErrorCode::TooLarge, "too many intervals for 32-bit references");
  const std::array<std::uint32_t, 2> offsets{0, static_cast<std::uint32_t>(cdf.intervals())};
  ForestArrays arrays = build_forest_segments(cdf.bounds(), std::span<const std::uint32_t>(offsets), m, options);
  return RadixForest<Scalar>(cdf, std::move(arrays.nodes), std::move(arrays.table));
}

template <std::floating_point Scalar>
DepthStats depth_stats(const RadixForest<Scalar>& forest) {
  DepthStats stats;
  const auto c = forest.cdf().bounds();
  const std::uint32_t m = forest.cells();
  stats.cells.reserve(m);
  for (std::uint32_t g = 0; g < m; ++g) {
    const NodeRef entry = forest.table()[g];
    CellDepth cell;
    if (entry.is_leaf()) {
      const std::uint32_t i = entry.index();
      cell.leaves = i < forest.leaves() && cell_of(c[i], m) == g ? 1 : 0;
    } else {
      if (entry.index() >= forest.leaves()) throw Error(ErrorCode::InvalidArgument, "table entry out of range");
      const auto shape = measure_tree(forest.nodes(), forest.nodes()[entry.index()].child[1]);
      if (!shape) throw Error(ErrorCode::InvalidArgument, "malformed cell tree");
      cell = {shape->first, shape->second + 1};
    }
    stats.max_depth = std::max(stats.max_depth, cell.depth);
    stats.cells.push_back(cell);
  }
  return stats;
}

template <std::floating_point Scalar>
RadixForest<Scalar> rebalance_degenerate(const RadixForest<Scalar>& forest, std::uint32_t slack) {
  std::vector<ForestNode> nodes(forest.nodes().begin(), forest.nodes().end());
  rebalance_cells(nodes, forest.table(), slack);
  return RadixForest<Scalar>(forest.cdf(), std::move(nodes),
                             std::vector<NodeRef>(forest.table().begin(), forest.table().end()));
}

std::string_view to_string(ValidationCheck check) noexcept {
  switch (check) {
    case ValidationCheck::Malformed: return "malformed";
    case ValidationCheck::Reachability: return "reachability";
    case ValidationCheck::Ordering: return "ordering";
    case ValidationCheck::OracleMismatch: return "oracle";
    case ValidationCheck::AnchorStructure: return "anchor";
  }
  return "unknown";
}

bool ValidationReport::has(ValidationCheck check) const noexcept {
  return std::any_of(issues.begin(), issues.end(), [check](const ValidationIssue& i) { return i.check == check; });
}

namespace {

class IssueSink {
 public:
  explicit IssueSink(ValidationReport& report) : report_(report) {}

  void add(ValidationCheck check, std::string detail) {
    if (report_.issues.size() < kMaxRecorded) {
      report_.issues.push_back({check, std::move(detail)});
    } else {
      ++report_.suppressed;
    }
  }

 private:
  static constexpr std::size_t kMaxRecorded = 64;
  ValidationReport& report_;
};

/// Alg.-2 traversal with bounds and step checks.
template <std::floating_point Scalar>
std::optional<std::uint32_t> guarded_sample(const RadixForest<Scalar>& forest, Scalar xi) {
  const std::uint32_t n = forest.leaves();
  NodeRef j = forest.table()[cell_of(xi, forest.cells())];
  for (std::uint32_t steps = 0; !j.is_leaf(); ++steps) {
    if (j.index() >= n || steps > n) return std::nullopt;
    j = forest.nodes()[j.index()].child[xi < forest.cdf()[j.index()] ? 0 : 1];
  }
  if (j.index() >= n) return std::nullopt;
  return j.index();
}

}  // namespace

template <std::floating_point Scalar>
ValidationReport validate_forest(const RadixForest<Scalar>& forest, std::uint32_t random_probes, std::uint64_t seed) {
  ValidationReport report;
  IssueSink sink(report);
  const std::uint32_t n = forest.leaves();
  const std::uint32_t m = forest.cells();
  const auto c = forest.cdf().bounds();
  const auto nodes = forest.nodes();

  if (!is_strictly_increasing(forest.cdf())) sink.add(ValidationCheck::Malformed, "cdf is not strictly increasing");

  std::vector<std::uint32_t> owned(n, 0);
  std::vector<bool> visited(n, false);

  for (std::uint32_t g = 0; g < m; ++g) {
    const NodeRef entry = forest.table()[g];
    const std::string where = "cell " + std::to_string(g);
    if (entry.index() >= n) {
      sink.add(ValidationCheck::Malformed, where + ": table entry out of range");
      continue;
    }
    if (entry.is_leaf()) {
      if (cell_of(c[entry.index()], m) == g) ++owned[entry.index()];
      continue;
    }

    const std::uint32_t anchor = entry.index();
    if (visited[anchor]) {
      sink.add(ValidationCheck::Reachability, where + ": anchor " + std::to_string(anchor) + " is shared");
      continue;
    }
    visited[anchor] = true;
    const NodeRef left = nodes[anchor].child[0];
    if (left.index() >= n) {
      sink.add(ValidationCheck::Malformed, where + ": anchor child reference out of range");
    } else if (!left.is_leaf()) {
      sink.add(ValidationCheck::AnchorStructure, where + ": anchor left child is not a leaf");
    } else if (left.index() != (anchor == 0 ? 0 : anchor - 1)) {
      sink.add(ValidationCheck::AnchorStructure, where + ": anchor left child is not the preceding interval");
    }

    // Iterative in-order walk of the cell tree, recording the leaf range of
    // every subtree to check the split rule of each node.
    struct Frame {
      NodeRef ref;
      bool expanded;
    };
    struct Range {
      std::uint32_t min;
      std::uint32_t max;
    };
    std::vector<Frame> stack{{nodes[anchor].child[1], false}};
    std::vector<Range> ranges;
    std::int64_t previous_leaf = static_cast<std::int64_t>(anchor) - 1;
    bool broken = false;
    while (!stack.empty() && !broken) {
      const Frame frame = stack.back();
      stack.pop_back();
      const NodeRef ref = frame.ref;
      if (ref.index() >= n) {
        sink.add(ValidationCheck::Malformed, where + ": child reference out of range");
        broken = true;
        break;
      }
      if (ref.is_leaf()) {
        const std::uint32_t leaf = ref.index();
        ++owned[leaf];
        if (static_cast<std::int64_t>(leaf) <= previous_leaf) {
          sink.add(ValidationCheck::Ordering, where + ": leaf " + std::to_string(leaf) + " visited out of order");
        }
        previous_leaf = leaf;
        ranges.push_back({leaf, leaf});
        continue;
      }
      const std::uint32_t j = ref.index();
      if (!frame.expanded) {
        if (visited[j]) {
          sink.add(ValidationCheck::Reachability, where + ": node " + std::to_string(j) + " reached twice");
          broken = true;
          break;
        }
        visited[j] = true;
        // Post-order combine after both children; children pushed so the
        // left one is walked first.
        stack.push_back({ref, true});
        stack.push_back({nodes[j].child[1], false});
        stack.push_back({nodes[j].child[0], false});
        continue;
      }
      const Range right = ranges.back();
      ranges.pop_back();
      const Range left_range = ranges.back();
      ranges.pop_back();
      if (!(left_range.max < j && right.min >= j)) {
        sink.add(ValidationCheck::Ordering, where + ": node " + std::to_string(j) + " does not split at its index");
      }
      ranges.push_back({std::min(left_range.min, right.min), std::max(left_range.max, right.max)});
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    if (owned[i] != 1) {
      sink.add(ValidationCheck::Reachability,
               "leaf " + std::to_string(i) + " owned by " + std::to_string(owned[i]) + " cell trees");
    }
  }

  auto probe = [&](Scalar xi) {
    const auto got = guarded_sample(forest, xi);
    const std::uint32_t want = sample_linear(forest.cdf(), xi);
    if (!got) {
      sink.add(ValidationCheck::Malformed, "traversal for xi=" + std::to_string(xi) + " did not terminate cleanly");
    } else if (*got != want) {
      sink.add(ValidationCheck::OracleMismatch, "xi=" + std::to_string(xi) + " maps to " + std::to_string(*got) +
                                                    ", linear search gives " + std::to_string(want));
    }
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    probe(c[i]);
    probe(c[i] + (c[i + 1] - c[i]) / 2);
  }
  SplitMix64 rng(seed);
  for (std::uint32_t k = 0; k < random_probes; ++k) {
    const auto xi = static_cast<Scalar>(rng.next_double());
    probe(xi < Scalar(1) ? xi : std::nextafter(Scalar(1), Scalar(0)));
  }
  return report;
}

template class RadixForest<float>;
template class RadixForest<double>;
template RadixForest<float> build_forest(const Cdf<float>&, std::uint32_t, const ForestOptions&);
template RadixForest<double> build_forest(const Cdf<double>&, std::uint32_t, const ForestOptions&);
template ForestArrays build_forest_segments(std::span<const float>, std::span<const std::uint32_t>, std::uint32_t,
                                            const ForestOptions&);
template ForestArrays build_forest_segments(std::span<const double>, std::span<const std::uint32_t>, std::uint32_t,
                                            const ForestOptions&);
template DepthStats depth_stats(const RadixForest<float>&);
template DepthStats depth_stats(const RadixForest<double>&);
template RadixForest<float> rebalance_degenerate(const RadixForest<float>&, std::uint32_t);
template RadixForest<double> rebalance_degenerate(const RadixForest<double>&, std::uint32_t);
template ValidationReport validate_forest(const RadixForest<float>&, std::uint32_t, std::uint64_t);
template ValidationReport validate_forest(const RadixForest<double>&, std::uint32_t, std::uint64_t);

}  // namespace rtf
