#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace varitool {

/// Static kd-tree over weighted points in R^n answering closed-ball queries.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  /// `coords` holds the points row by row (dim entries each).
  SpatialIndex(std::vector<double> coords, int dim, std::vector<double> weights = {});

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Indices i with |x_i - a| <= r, ascending.
  std::vector<std::size_t> ball_query(std::span<const double> a, double r) const;

  /// Sum of weights over the closed ball.
  double ball_weight(std::span<const double> a, double r) const;

 private:
  struct Node {
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
    std::uint32_t box = 0;  // offset of lo (dim entries) followed by hi
    double weight = 0.0;
  };

  int build(std::uint32_t begin, std::uint32_t end);
  template <class Visit, class VisitAll>
  void traverse(std::span<const double> a, double r, Visit&& visit, VisitAll&& visit_all) const;

  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> order_;
  std::vector<double> boxes_;
  std::vector<Node> nodes_;
};

}  // namespace varitool
