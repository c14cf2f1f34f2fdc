#include "varitool/varifold.hpp"

#include "varitool/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace varitool {

DiscreteVarifold::DiscreteVarifold(int m, int n)
    : DiscreteVarifold(m, n, {}, {}, {}, {}) {}

DiscreteVarifold::DiscreteVarifold(int m, int n, std::vector<double> positions, std::vector<double> weights,
                                   std::vector<Subspace> planes, std::vector<std::uint32_t> plane_ids,
                                   std::optional<SampleMeta> meta)
    : m_(m),
      n_(n),
      positions_(std::move(positions)),
      weights_(std::move(weights)),
      planes_(std::move(planes)),
      plane_ids_(std::move(plane_ids)),
      meta_(std::move(meta)) {
  if (m_ < 1 || m_ > n_) throw DomainError("varifold: need 1 <= m <= n");
  if (positions_.size() != weights_.size() * n_ || plane_ids_.size() != weights_.size()) {
    throw ArgumentError("varifold: inconsistent atom arrays");
  }
  for (const auto& p : planes_) {
    if (p.n() != n_ || p.m() != m_) throw DomainError("varifold: plane dimensions differ from (m, n)");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) throw DomainError("varifold: atom weights must be positive and finite");
    if (plane_ids_[i] >= planes_.size()) throw ArgumentError("varifold: plane id out of range");
  }
  index_ = std::make_shared<const SpatialIndex>(positions_, n_, weights_);
}

DiscreteVarifold DiscreteVarifold::from_atoms(int m, int n, const std::vector<Atom>& atoms,
                                              std::optional<SampleMeta> meta) {
  std::vector<double> pos;
  std::vector<double> w;
  std::vector<Subspace> planes;
  std::vector<std::uint32_t> ids;
  std::map<std::vector<double>, std::uint32_t> seen;
  pos.reserve(atoms.size() * n);
  for (const auto& a : atoms) {
    if (a.position.size() != n) throw DomainError("atom position has wrong dimension");
    pos.insert(pos.end(), a.position.data(), a.position.data() + n);
    w.push_back(a.weight);
    std::vector<double> key(a.plane.proj().data(), a.plane.proj().data() + a.plane.proj().size());
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<std::uint32_t>(planes.size()));
    if (inserted) planes.push_back(a.plane);
    ids.push_back(it->second);
  }
  return DiscreteVarifold(m, n, std::move(pos), std::move(w), std::move(planes), std::move(ids), std::move(meta));
}

double DiscreteVarifold::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

DiscreteVarifold DiscreteVarifold::dilated(double factor) const {
  if (!(factor > 0.0)) throw DomainError("dilation factor must be positive");
  std::vector<double> pos = positions_;
  for (double& x : pos) x *= factor;
  std::vector<double> w = weights_;
  const double scale = std::pow(factor, m_);
  for (double& x : w) x *= scale;
  auto meta = meta_;
  if (meta) meta->h *= factor;
  return DiscreteVarifold(m_, n_, std::move(pos), std::move(w), planes_, plane_ids_, std::move(meta));
}

DiscreteVarifold DiscreteVarifold::select(const std::function<bool(std::size_t)>& keep) const {
  std::vector<double> pos;
  std::vector<double> w;
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!keep(i)) continue;
    pos.insert(pos.end(), positions_.begin() + i * n_, positions_.begin() + (i + 1) * n_);
    w.push_back(weights_[i]);
    ids.push_back(plane_ids_[i]);
  }
  return DiscreteVarifold(m_, n_, std::move(pos), std::move(w), planes_, std::move(ids), meta_);
}

double weight_ball_mass(const DiscreteVarifold& v, const Vec& a, double r) {
  if (!(r > 0.0)) throw DomainError("weight_ball_mass: radius must be positive");
  double s = 0.0;
  for (std::size_t i : v.index().ball_query({a.data(), static_cast<std::size_t>(a.size())}, r)) s += v.weight(i);
  return s;
}

std::vector<std::pair<Subspace, double>> disintegrate(const DiscreteVarifold& v, const Vec& x) {
  const auto fiber = v.index().ball_query({x.data(), static_cast<std::size_t>(x.size())}, 0.0);
  if (fiber.empty()) throw EmptyFiberError("disintegrate: no atom at the given point");
  std::vector<std::pair<std::uint32_t, double>> by_plane;
  double total = 0.0;
  for (std::size_t i : fiber) {
    total += v.weight(i);
    auto it = std::find_if(by_plane.begin(), by_plane.end(), [&](const auto& e) { return e.first == v.plane_id(i); });
    if (it == by_plane.end()) {
      by_plane.emplace_back(v.plane_id(i), v.weight(i));
    } else {
      it->second += v.weight(i);
    }
  }
  std::vector<std::pair<Subspace, double>> out;
  out.reserve(by_plane.size());
  for (const auto& [id, w] : by_plane) out.emplace_back(v.planes()[id], w / total);
  return out;
}

Mat mean_projection(const DiscreteVarifold& v, const Vec& x) {
  Mat q = Mat::Zero(v.n(), v.n());
  for (const auto& [plane, p] : disintegrate(v, x)) q += p * plane.proj();
  return q;
}

DiscreteVarifold restrict(const DiscreteVarifold& v, const PointPredicate& in_set) {
  return v.select([&](std::size_t i) { return in_set(v.position(i)); });
}

}  // namespace varitool
