#pragma once

#include "varitool/geometry.hpp"
#include "varitool/spatial_index.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varitool {

/// Point mass of the disintegrated measure: position, plane, mass.
struct Atom {
  Vec position;
  Subspace plane;
  double weight = 0.0;
};

/// Provenance of a sampled varifold.
struct SampleMeta {
  std::string family;
  double h = 0.0;
};

using PointPredicate = std::function<bool(const Vec&)>;

/// A general m-varifold in R^n represented by finitely many weighted
/// (position, plane) pairs. Planes are stored once in a table and referenced
/// by id. Immutable after construction.
class DiscreteVarifold {
 public:
  DiscreteVarifold(int m, int n);
  DiscreteVarifold(int m, int n, std::vector<double> positions, std::vector<double> weights,
                   std::vector<Subspace> planes, std::vector<std::uint32_t> plane_ids,
                   std::optional<SampleMeta> meta = std::nullopt);

  static DiscreteVarifold from_atoms(int m, int n, const std::vector<Atom>& atoms,
                                     std::optional<SampleMeta> meta = std::nullopt);

  int m() const { return m_; }
  int n() const { return n_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  Eigen::Map<const Vec> position(std::size_t i) const { return {positions_.data() + i * n_, n_}; }
  std::span<const double> position_span(std::size_t i) const { return {positions_.data() + i * n_, static_cast<std::size_t>(n_)}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Subspace& plane(std::size_t i) const { return planes_[plane_ids_[i]]; }
  std::uint32_t plane_id(std::size_t i) const { return plane_ids_[i]; }

  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Subspace>& planes() const { return planes_; }
  const std::vector<std::uint32_t>& plane_ids() const { return plane_ids_; }
  const SpatialIndex& index() const { return *index_; }
  const std::optional<SampleMeta>& meta() const { return meta_; }

  double total_mass() const;
  Atom atom(std::size_t i) const { return {position(i), plane(i), weights_[i]}; }

  /// Image under x -> factor * x with weights scaled by factor^m.
  DiscreteVarifold dilated(double factor) const;
  /// Keeps atoms whose index satisfies `keep`.
  DiscreteVarifold select(const std::function<bool(std::size_t)>& keep) const;

 private:
  int m_;
  int n_;
  std::vector<double> positions_;
  std::vector<double> weights_;
  std::vector<Subspace> planes_;
  std::vector<std::uint32_t> plane_ids_;
  std::shared_ptr<const SpatialIndex> index_;
  std::optional<SampleMeta> meta_;
};

/// ||V|| B(a, r) over the closed ball.
double weight_ball_mass(const DiscreteVarifold& v, const Vec& a, double r);

/// Normalized plane distribution of the atoms located exactly at x.
std::vector<std::pair<Subspace, double>> disintegrate(const DiscreteVarifold& v, const Vec& x);

/// Fiber-averaged projection q(x) = sum_P p(P) P.
Mat mean_projection(const DiscreteVarifold& v, const Vec& x);

/// V restricted to E x G(n, m).
DiscreteVarifold restrict(const DiscreteVarifold& v, const PointPredicate& in_set);

}  // namespace varitool
