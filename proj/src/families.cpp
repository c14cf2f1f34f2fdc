#include "varitool/families.hpp"

#include "varitool/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace varitool {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double support_tol(double scale) { return 1e-9 * std::max(1.0, scale); }

Vec zeros(int n) { return Vec::Zero(n); }

// Disc pieces of a plane bundle.
std::vector<DiscPiece> bundle_pieces(const PlaneBundle& b) {
  std::vector<DiscPiece> out;
  const Mat& t = b.plane.proj();
  for (const auto& o : b.offsets) {
    const Vec foot = o + t * (b.clipCenter - o);
    if (b.clipRadius) {
      const double d2 = (b.clipCenter - foot).squaredNorm();
      const double r2 = *b.clipRadius * *b.clipRadius - d2;
      if (r2 <= 0.0) continue;
      out.push_back({foot, std::sqrt(r2)});
    } else {
      out.push_back({foot, b.window});
    }
  }
  return out;
}

// Mass of the m-disc (center c, radius R, in the affine plane c + P) inside B(a, r).
double disc_ball_mass(int m, const Mat& proj, const Vec& c, double R, const Vec& a, double r) {
  const Vec off = a - c;
  const Vec in_plane = proj * off;
  const double perp2 = (off - in_plane).squaredNorm();
  const double rho2 = r * r - perp2;
  if (rho2 < 0.0) return 0.0;
  return ball_intersection_volume(m, R, std::sqrt(rho2), in_plane.norm());
}

// Volume of the box slice over dimensions [d, n) inside the ball of squared radius r2.
double box_ball_rec(int d, const Vec& lo, const Vec& hi, const Vec& a, double r2) {
  if (r2 <= 0.0) return 0.0;
  const int n = static_cast<int>(lo.size());
  const double r = std::sqrt(r2);
  const double x0 = std::max(lo(d), a(d) - r);
  const double x1 = std::min(hi(d), a(d) + r);
  if (x1 <= x0) return 0.0;
  if (d == n - 1) return x1 - x0;
  auto slice = [&](double x) { return box_ball_rec(d + 1, lo, hi, a, r2 - (x - a(d)) * (x - a(d))); };
  // Break where the next-dimension chord meets that dimension's faces.
  std::vector<double> cuts{x0, x1};
  for (double face : {lo(d + 1), hi(d + 1)}) {
    const double rem = r2 - (face - a(d + 1)) * (face - a(d + 1));
    if (rem <= 0.0) continue;
    for (double x : {a(d) - std::sqrt(rem), a(d) + std::sqrt(rem)})
      if (x > x0 && x < x1) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(slice, cuts[i], cuts[i + 1], 12, 1e-12);
  }
  return total;
}

}  // namespace

AnalyticFamily::AnalyticFamily(Shape shape) : shape_(std::move(shape)) {
  std::visit(Overloaded{
                 [&](const SphereShell& s) {
                   n_ = static_cast<int>(s.center.size());
                   m_ = s.m;
                   if (s.frame.rows() != n_ || s.frame.cols() != m_ + 1) throw DomainError("sphere: frame must be n x (m+1)");
                   if (!(s.radius > 0.0)) throw DomainError("sphere: radius must be positive");
                 },
                 [&](const FlatDisc& d) {
                   n_ = d.plane.n();
                   m_ = d.plane.m();
                   if (d.center.size() != n_) throw DomainError("disc: center dimension");
                   if (!(d.radius > 0.0)) throw DomainError("disc: radius must be positive");
                 },
                 [&](const PlaneBundle& b) {
                   n_ = b.plane.n();
                   m_ = b.plane.m();
                   if (b.offsets.empty()) throw DomainError("plane bundle: no planes");
                   if (!(b.weight > 0.0)) throw DomainError("plane bundle: weight must be positive");
                 },
                 [&](const ProductSlab& s) {
                   n_ = s.plane.n();
                   m_ = s.plane.m();
                   if (s.lo.size() != n_ || s.hi.size() != n_ || (s.hi.array() <= s.lo.array()).any())
                     throw DomainError("slab: box must satisfy lo < hi in every coordinate");
                   if (!(s.density > 0.0)) throw DomainError("slab: density must be positive");
                 },
             },
             shape_);
  if (m_ < 1 || m_ > n_) throw DomainError("family: need 1 <= m <= n");
}

AnalyticFamily AnalyticFamily::sphere(int m, int n, double radius, double multiplicity, std::optional<Vec> center) {
  if (m < 1 || m + 1 > n) throw DomainError("sphere: need 1 <= m < n");
  SphereShell s;
  s.center = center.value_or(zeros(n));
  s.radius = radius;
  s.m = m;
  s.frame = Mat::Identity(n, m + 1);
  s.multiplicity = multiplicity;
  return AnalyticFamily(std::move(s));
}

AnalyticFamily AnalyticFamily::disc(int m, int n, double radius, double multiplicity, std::optional<Vec> center,
                                    std::optional<Subspace> plane) {
  FlatDisc d;
  d.plane = plane.value_or(Subspace::coordinate(n, m));
  d.center = center.value_or(zeros(n));
  d.radius = radius;
  d.multiplicity = multiplicity;
  return AnalyticFamily(std::move(d));
}

AnalyticFamily AnalyticFamily::plane_bundle_filling(int m, int n, int k, double R, bool clipped) {
  if (m < 1 || m >= n) throw DomainError("plane bundle: need 1 <= m < n");
  if (k < 1) throw DomainError("plane bundle: need k >= 1");
  PlaneBundle b;
  b.plane = Subspace::coordinate(n, m);
  b.clipCenter = zeros(n);
  const int normal_dims = n - m;
  const double spacing = 2.0 * R / k;
  std::vector<int> idx(normal_dims, 0);
  double carrier = 0.0;
  while (true) {
    Vec o = zeros(n);
    for (int j = 0; j < normal_dims; ++j) o(m + j) = -R + (idx[j] + 0.5) * spacing;
    if (o.norm() < R) {
      carrier += unit_ball_volume(m) * std::pow(R * R - o.squaredNorm(), 0.5 * m);
      b.offsets.push_back(std::move(o));
    }
    int j = 0;
    while (j < normal_dims && ++idx[j] == k) idx[j++] = 0;
    if (j == normal_dims) break;
  }
  b.weight = unit_ball_volume(n) * std::pow(R, n) / carrier;
  if (clipped) b.clipRadius = R;
  b.window = R;
  return AnalyticFamily(std::move(b));
}

AnalyticFamily AnalyticFamily::slab(int m, int n, const Vec& lo, const Vec& hi, double density, bool unbounded) {
  ProductSlab s;
  s.plane = Subspace::coordinate(n, m);
  s.lo = lo;
  s.hi = hi;
  s.density = density;
  s.unbounded = unbounded;
  return AnalyticFamily(std::move(s));
}

std::string AnalyticFamily::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const SphereShell& s) { os << "sphere(m=" << m_ << ",n=" << n_ << ",r=" << s.radius << ",mult=" << s.multiplicity << ")"; },
                 [&](const FlatDisc& d) { os << "disc(m=" << m_ << ",n=" << n_ << ",r=" << d.radius << ",mult=" << d.multiplicity << ")"; },
                 [&](const PlaneBundle& b) {
                   os << "plane-bundle(m=" << m_ << ",n=" << n_ << ",planes=" << b.offsets.size()
                      << (b.clipRadius ? ",clipped" : ",complete") << ")";
                 },
                 [&](const ProductSlab& s) { os << "slab(m=" << m_ << ",n=" << n_ << (s.unbounded ? ",unbounded" : ",box") << ")"; },
             },
             shape_);
  return os.str();
}

std::vector<DiscPiece> AnalyticFamily::pieces() const {
  if (const auto* d = std::get_if<FlatDisc>(&shape_)) return {{d->center, d->radius}};
  if (const auto* b = std::get_if<PlaneBundle>(&shape_)) return bundle_pieces(*b);
  return {};
}

double AnalyticFamily::total_mass() const {
  return std::visit(Overloaded{
                        [&](const SphereShell& s) { return s.multiplicity * (m_ + 1) * unit_ball_volume(m_ + 1) * std::pow(s.radius, m_); },
                        [&](const FlatDisc& d) { return d.multiplicity * unit_ball_volume(m_) * std::pow(d.radius, m_); },
                        [&](const PlaneBundle& b) {
                          if (!b.clipRadius) return kInf;
                          double s = 0.0;
                          for (const auto& p : bundle_pieces(b)) s += unit_ball_volume(m_) * std::pow(p.radius, m_);
                          return b.weight * s;
                        },
                        [&](const ProductSlab& s) {
                          if (s.unbounded) return kInf;
                          return s.density * (s.hi - s.lo).prod();
                        },
                    },
                    shape_);
}

double AnalyticFamily::delta_total_mass() const {
  return std::visit(Overloaded{
                        [&](const SphereShell& s) { return (m_ / s.radius) * total_mass(); },
                        [&](const FlatDisc& d) { return d.multiplicity * m_ * unit_ball_volume(m_) * std::pow(d.radius, m_ - 1); },
                        [&](const PlaneBundle& b) {
                          if (!b.clipRadius) return 0.0;
                          double s = 0.0;
                          for (const auto& p : bundle_pieces(b)) s += m_ * unit_ball_volume(m_) * std::pow(p.radius, m_ - 1);
                          return b.weight * s;
                        },
                        [&](const ProductSlab& s) {
                          if (s.unbounded) return 0.0;
                          const Vec side = s.hi - s.lo;
                          double total = 0.0;
                          for (int i = 0; i < n_; ++i) {
                            const double face = side.prod() / side(i);
                            total += 2.0 * face * s.plane.proj().col(i).norm();
                          }
                          return s.density * total;
                        },
                    },
                    shape_);
}

double AnalyticFamily::density_at(const Vec& x) const {
  return std::visit(Overloaded{
                        [&](const SphereShell& s) {
                          const double tol = support_tol(s.radius);
                          const Vec off = x - s.center;
                          const Vec coords = s.frame.transpose() * off;
                          if ((off - s.frame * coords).norm() > tol) return 0.0;
                          return std::abs(coords.norm() - s.radius) <= tol ? s.multiplicity : 0.0;
                        },
                        [&](const FlatDisc& d) {
                          const double tol = support_tol(d.radius);
                          const Vec off = x - d.center;
                          const Vec in_plane = d.plane.proj() * off;
                          if ((off - in_plane).norm() > tol) return 0.0;
                          const double rho = in_plane.norm();
                          if (rho < d.radius - tol) return d.multiplicity;
                          if (rho <= d.radius + tol) return 0.5 * d.multiplicity;
                          return 0.0;
                        },
                        [&](const PlaneBundle& b) {
                          const double scale = b.clipRadius.value_or(b.window);
                          const double tol = support_tol(scale);
                          double total = 0.0;
                          for (const auto& o : b.offsets) {
                            const Vec off = x - o;
                            if ((off - b.plane.proj() * off).norm() > tol) continue;
                            if (!b.clipRadius) {
                              total += b.weight;
                              continue;
                            }
                            const double rho = (x - b.clipCenter).norm();
                            if (rho < *b.clipRadius - tol) {
                              total += b.weight;
                            } else if (rho <= *b.clipRadius + tol) {
                              total += 0.5 * b.weight;
                            }
                          }
                          return total;
                        },
                        [&](const ProductSlab& s) {
                          // ||V|| B(x, r) ~ r^n, so the m-density vanishes when m < n.
                          if (m_ < n_) return 0.0;
                          if (s.unbounded) return s.density;
                          const double tol = support_tol((s.hi - s.lo).maxCoeff());
                          double fraction = 1.0;
                          for (int i = 0; i < n_; ++i) {
                            if (x(i) < s.lo(i) - tol || x(i) > s.hi(i) + tol) return 0.0;
                            if (std::abs(x(i) - s.lo(i)) <= tol || std::abs(x(i) - s.hi(i)) <= tol) fraction *= 0.5;
                          }
                          return s.density * fraction;
                        },
                    },
                    shape_);
}

double AnalyticFamily::ball_mass(const Vec& a, double r) const {
  if (!(r > 0.0)) throw DomainError("ball_mass: radius must be positive");
  return std::visit(Overloaded{
                        [&](const SphereShell& s) {
                          const Vec off = a - s.center;
                          const Vec coords = s.frame.transpose() * off;
                          const double perp2 = (off - s.frame * coords).squaredNorm();
                          const double rho2 = r * r - perp2;
                          if (rho2 < 0.0) return 0.0;
                          return s.multiplicity * sphere_cap_area(m_, s.radius, coords.norm(), std::sqrt(rho2));
                        },
                        [&](const FlatDisc& d) {
                          return d.multiplicity * disc_ball_mass(m_, d.plane.proj(), d.center, d.radius, a, r);
                        },
                        [&](const PlaneBundle& b) {
                          double total = 0.0;
                          if (b.clipRadius) {
                            for (const auto& p : bundle_pieces(b)) total += disc_ball_mass(m_, b.plane.proj(), p.center, p.radius, a, r);
                          } else {
                            for (const auto& o : b.offsets) {
                              const Vec off = a - o;
                              const double perp2 = (off - b.plane.proj() * off).squaredNorm();
                              if (perp2 < r * r) total += unit_ball_volume(m_) * std::pow(r * r - perp2, 0.5 * m_);
                            }
                          }
                          return b.weight * total;
                        },
                        [&](const ProductSlab& s) {
                          if (s.unbounded) return s.density * unit_ball_volume(n_) * std::pow(r, n_);
                          return s.density * box_ball_volume(s.lo, s.hi, a, r);
                        },
                    },
                    shape_);
}

double AnalyticFamily::density_superlevel_measure(double d) const {
  if (!(d > 0.0)) throw DomainError("density superlevel: d must be positive");
  return std::visit(Overloaded{
                        [&](const SphereShell& s) {
                          return d <= s.multiplicity ? (m_ + 1) * unit_ball_volume(m_ + 1) * std::pow(s.radius, m_) : 0.0;
                        },
                        [&](const FlatDisc& disc) {
                          return d <= disc.multiplicity ? unit_ball_volume(m_) * std::pow(disc.radius, m_) : 0.0;
                        },
                        [&](const PlaneBundle& b) {
                          if (d > b.weight) return 0.0;
                          if (!b.clipRadius) return kInf;
                          double s = 0.0;
                          for (const auto& p : bundle_pieces(b)) s += unit_ball_volume(m_) * std::pow(p.radius, m_);
                          return s;
                        },
                        [&](const ProductSlab&) -> double {
                          throw UnsupportedFamilyError("slab: no finite-measure rectifiable carrier");
                        },
                    },
                    shape_);
}

double AnalyticFamily::positive_density_measure() const {
  return density_superlevel_measure(std::numeric_limits<double>::min());
}

double AnalyticFamily::max_distance_from(const Vec& a) const {
  return std::visit(Overloaded{
                        [&](const SphereShell& s) {
                          const Vec off = a - s.center;
                          const Vec coords = s.frame.transpose() * off;
                          const double perp2 = (off - s.frame * coords).squaredNorm();
                          return std::sqrt(perp2 + std::pow(coords.norm() + s.radius, 2));
                        },
                        [&](const FlatDisc& d) {
                          const Vec off = a - d.center;
                          const Vec in_plane = d.plane.proj() * off;
                          return std::sqrt((off - in_plane).squaredNorm() + std::pow(in_plane.norm() + d.radius, 2));
                        },
                        [&](const PlaneBundle& b) {
                          if (!b.clipRadius) return kInf;
                          double best = 0.0;
                          for (const auto& p : bundle_pieces(b)) {
                            const Vec off = a - p.center;
                            const Vec in_plane = b.plane.proj() * off;
                            best = std::max(best, std::sqrt((off - in_plane).squaredNorm() + std::pow(in_plane.norm() + p.radius, 2)));
                          }
                          return best;
                        },
                        [&](const ProductSlab& s) {
                          if (s.unbounded) return kInf;
                          double d2 = 0.0;
                          for (int i = 0; i < n_; ++i) d2 += std::pow(std::max(std::abs(a(i) - s.lo(i)), std::abs(a(i) - s.hi(i))), 2);
                          return std::sqrt(d2);
                        },
                    },
                    shape_);
}

bool AnalyticFamily::rectifiable() const {
  if (const auto* s = std::get_if<ProductSlab>(&shape_)) return s->plane.m() == n_;
  return true;
}

bool AnalyticFamily::finite_mass() const { return std::isfinite(total_mass()); }

double AnalyticFamily::feature_length() const {
  return std::visit(Overloaded{
                        [&](const SphereShell& s) { return s.radius; },
                        [&](const FlatDisc& d) { return d.radius; },
                        [&](const PlaneBundle& b) {
                          double f = b.clipRadius.value_or(b.window);
                          const Mat& t = b.plane.proj();
                          for (std::size_t i = 0; i < b.offsets.size(); ++i)
                            for (std::size_t j = i + 1; j < b.offsets.size(); ++j) {
                              const Vec diff = b.offsets[i] - b.offsets[j];
                              f = std::min(f, (diff - t * diff).norm());
                            }
                          return f;
                        },
                        [&](const ProductSlab& s) { return (s.hi - s.lo).minCoeff(); },
                    },
                    shape_);
}

void FirstVariationMeasure::add(const Vec& x, const Vec& u) {
  positions_.insert(positions_.end(), x.data(), x.data() + n_);
  vectors_.insert(vectors_.end(), u.data(), u.data() + n_);
}

double FirstVariationMeasure::apply(const std::function<Vec(const Vec&)>& theta) const {
  return apply_restricted(theta, [](const Vec&) { return true; });
}

double FirstVariationMeasure::apply_restricted(const std::function<Vec(const Vec&)>& theta,
                                               const PointPredicate& in_set) const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    const Vec x = position(j);
    if (in_set(x)) s += theta(x).dot(vector(j));
  }
  return s;
}

double FirstVariationMeasure::integrate(const std::function<double(const Vec&)>& f) const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += f(position(j)) * vector(j).norm();
  return s;
}

double FirstVariationMeasure::total() const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += vector(j).norm();
  return s;
}

FirstVariationMeasure FirstVariationMeasure::dilated(double factor, int m) const {
  FirstVariationMeasure out(n_);
  const double scale = std::pow(factor, m - 1);
  for (std::size_t j = 0; j < size(); ++j) out.add(factor * position(j), scale * vector(j));
  return out;
}

std::vector<std::pair<Vec, double>> ball_cells(int m, double radius, double h) {
  const int shells = std::max(1, static_cast<int>(std::ceil(radius / h)));
  const double width = radius / shells;
  const double alpha = unit_ball_volume(m);
  const double sphere_total = m * alpha;
  std::vector<std::pair<Vec, double>> out;
  for (int i = 0; i < shells; ++i) {
    const double a = i * width;
    const double b = (i + 1) * width;
    const double mid = 0.5 * (a + b);
    const double shell = alpha * (std::pow(b, m) - std::pow(a, m));
    for (const auto& cell : sphere_cells(m - 1, h / mid)) {
      out.emplace_back(mid * cell.direction, shell * cell.measure / sphere_total);
    }
  }
  return out;
}

double box_ball_volume(const Vec& lo, const Vec& hi, const Vec& a, double r) {
  return box_ball_rec(0, lo, hi, a, r * r);
}

DiscreteVarifold sample(const AnalyticFamily& family, double h) {
  if (!(h > 0.0)) throw DomainError("sample: h must be positive");
  const double feature = family.feature_length();
  if (4.0 * h > feature) {
    std::ostringstream os;
    os << "sample: h = " << h << " too coarse for " << family.name() << "; refine to h <= " << feature / 4.0;
    throw ResolutionError(os.str());
  }
  const int m = family.m();
  const int n = family.n();
  std::vector<Atom> atoms;
  SampleMeta meta{family.name(), h};
  std::visit(Overloaded{
                 [&](const SphereShell& s) {
                   const Mat id = Mat::Identity(m + 1, m + 1);
                   for (const auto& cell : sphere_cells(m, h / s.radius)) {
                     const Vec& u = cell.direction;
                     Mat tangent = s.frame * (id - u * u.transpose()) * s.frame.transpose();
                     tangent = 0.5 * (tangent + tangent.transpose()).eval();
                     atoms.push_back({s.center + s.radius * (s.frame * u), Subspace::from_projection(tangent),
                                      s.multiplicity * std::pow(s.radius, m) * cell.measure});
                   }
                 },
                 [&](const FlatDisc& d) {
                   const Mat basis = d.plane.basis();
                   for (const auto& [y, w] : ball_cells(m, d.radius, h))
                     atoms.push_back({d.center + basis * y, d.plane, d.multiplicity * w});
                 },
                 [&](const PlaneBundle& b) {
                   const Mat basis = b.plane.basis();
                   for (const auto& piece : bundle_pieces(b))
                     for (const auto& [y, w] : ball_cells(m, piece.radius, h))
                       atoms.push_back({piece.center + basis * y, b.plane, b.weight * w});
                 },
                 [&](const ProductSlab& s) {
                   std::vector<int> counts(n);
                   Vec cell(n);
                   for (int i = 0; i < n; ++i) {
                     counts[i] = std::max(1, static_cast<int>(std::ceil((s.hi(i) - s.lo(i)) / h)));
                     cell(i) = (s.hi(i) - s.lo(i)) / counts[i];
                   }
                   const double w = s.density * cell.prod();
                   std::vector<int> idx(n, 0);
                   while (true) {
                     Vec x(n);
                     for (int i = 0; i < n; ++i) x(i) = s.lo(i) + (idx[i] + 0.5) * cell(i);
                     atoms.push_back({std::move(x), s.plane, w});
                     int i = 0;
                     while (i < n && ++idx[i] == counts[i]) idx[i++] = 0;
                     if (i == n) break;
                   }
                 },
             },
             family.shape());
  return DiscreteVarifold::from_atoms(m, n, atoms, meta);
}

FirstVariationMeasure first_variation_measure(const AnalyticFamily& family, double h) {
  const int m = family.m();
  const int n = family.n();
  FirstVariationMeasure out(n);
  // Boundary of an m-disc of radius R: outward conormal times the boundary measure.
  auto disc_boundary = [&](const Vec& center, const Mat& basis, double R, double weight) {
    for (const auto& cell : sphere_cells(m - 1, h / R)) {
      const Vec eta = basis * cell.direction;
      out.add(center + R * eta, weight * std::pow(R, m - 1) * cell.measure * eta);
    }
  };
  std::visit(Overloaded{
                 [&](const SphereShell& s) {
                   // delta V(theta) = (m / R) * integral of theta . nu_out.
                   for (const auto& cell : sphere_cells(m, h / s.radius)) {
                     const Vec nu = s.frame * cell.direction;
                     const double w = s.multiplicity * std::pow(s.radius, m) * cell.measure;
                     out.add(s.center + s.radius * nu, (m / s.radius) * w * nu);
                   }
                 },
                 [&](const FlatDisc& d) { disc_boundary(d.center, d.plane.basis(), d.radius, d.multiplicity); },
                 [&](const PlaneBundle& b) {
                   if (!b.clipRadius) return;
                   const Mat basis = b.plane.basis();
                   for (const auto& piece : bundle_pieces(b)) disc_boundary(piece.center, basis, piece.radius, b.weight);
                 },
                 [&](const ProductSlab& s) {
                   if (s.unbounded) return;
                   // delta V(theta) = density * boundary integral of theta . T nu.
                   for (int axis = 0; axis < n; ++axis) {
                     const Vec tnu = s.plane.proj().col(axis);
                     if (tnu.norm() == 0.0) continue;
                     std::vector<int> counts(n, 1);
                     Vec cell = Vec::Ones(n);
                     for (int i = 0; i < n; ++i) {
                       if (i == axis) continue;
                       counts[i] = std::max(1, static_cast<int>(std::ceil((s.hi(i) - s.lo(i)) / h)));
                       cell(i) = (s.hi(i) - s.lo(i)) / counts[i];
                     }
                     const double area = cell.prod();
                     for (int side = 0; side < 2; ++side) {
                       std::vector<int> idx(n, 0);
                       while (true) {
                         Vec x(n);
                         for (int i = 0; i < n; ++i)
                           x(i) = i == axis ? (side == 0 ? s.lo(i) : s.hi(i)) : s.lo(i) + (idx[i] + 0.5) * cell(i);
                         out.add(x, (side == 0 ? -1.0 : 1.0) * s.density * area * tnu);
                         int i = 0;
                         while (i < n && ++idx[i] == counts[i]) idx[i++] = 0;
                         if (i == n) break;
                       }
                     }
                   }
                 },
             },
             family.shape());
  return out;
}

}  // namespace varitool
