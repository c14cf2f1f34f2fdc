#include "varitool/spatial_index.hpp"

#include "varitool/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace varitool {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

SpatialIndex::SpatialIndex(std::vector<double> coords, int dim, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim_ < 1) throw ArgumentError("SpatialIndex: dimension must be positive");
  if (coords_.size() % dim_ != 0) throw ArgumentError("SpatialIndex: coordinate count not a multiple of dim");
  const std::size_t count = coords_.size() / dim_;
  if (weights_.empty()) weights_.assign(count, 1.0);
  if (weights_.size() != count) throw ArgumentError("SpatialIndex: weight count mismatch");
  order_.resize(count);
  std::iota(order_.begin(), order_.end(), 0u);
  if (count > 0) build(0, static_cast<std::uint32_t>(count));
}

int SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const int id = static_cast<int>(nodes_.size());
  Node node;
  node.begin = begin;
  node.end = end;
  node.box = static_cast<std::uint32_t>(boxes_.size());
  std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
  for (std::uint32_t k = begin; k < end; ++k) {
    const double* p = coords_.data() + std::size_t{order_[k]} * dim_;
    for (int d = 0; d < dim_; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
    node.weight += weights_[order_[k]];
  }
  boxes_.insert(boxes_.end(), lo.begin(), lo.end());
  boxes_.insert(boxes_.end(), hi.begin(), hi.end());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  for (int d = 1; d < dim_; ++d)
    if (hi[d] - lo[d] > hi[axis] - lo[axis]) axis = d;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return coords_[std::size_t{a} * dim_ + axis] < coords_[std::size_t{b} * dim_ + axis];
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

template <class Visit, class VisitAll>
void SpatialIndex::traverse(std::span<const double> a, double r, Visit&& visit, VisitAll&& visit_all) const {
  if (nodes_.empty()) return;
  if (static_cast<int>(a.size()) != dim_) throw ArgumentError("ball query: dimension mismatch");
  const double r2 = r * r;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    const double* lo = boxes_.data() + node.box;
    const double* hi = lo + dim_;
    double near = 0.0, far = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double below = lo[d] - a[d];
      const double above = a[d] - hi[d];
      const double gap = std::max({below, above, 0.0});
      near += gap * gap;
      const double span = std::max(std::abs(a[d] - lo[d]), std::abs(hi[d] - a[d]));
      far += span * span;
    }
    if (near > r2) continue;
    if (far <= r2) {
      visit_all(node);
      continue;
    }
    if (node.left < 0) {
      for (std::uint32_t k = node.begin; k < node.end; ++k) {
        const std::uint32_t i = order_[k];
        const double* p = coords_.data() + std::size_t{i} * dim_;
        double d2 = 0.0;
        for (int d = 0; d < dim_; ++d) {
          const double t = p[d] - a[d];
          d2 += t * t;
        }
        if (d2 <= r2) visit(i);
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
}

std::vector<std::size_t> SpatialIndex::ball_query(std::span<const double> a, double r) const {
  std::vector<std::size_t> out;
  traverse(
      a, r, [&](std::uint32_t i) { out.push_back(i); },
      [&](const Node& node) {
        for (std::uint32_t k = node.begin; k < node.end; ++k) out.push_back(order_[k]);
      });
  std::sort(out.begin(), out.end());
  return out;
}

double SpatialIndex::ball_weight(std::span<const double> a, double r) const {
  double total = 0.0;
  traverse(
      a, r, [&](std::uint32_t i) { total += weights_[i]; },
      [&](const Node& node) { total += node.weight; });
  return total;
}

}  // namespace varitool
