#include "varitool/geometry.hpp"

#include "varitool/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace varitool {

namespace {

// alpha(0) = 1 is needed by the cap formulas; the public entry rejects m < 1.
double alpha_any(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

// Antiderivative of sin^p.
double sin_power_antiderivative(int p, double x) {
  if (p == 0) return x;
  if (p == 1) return -std::cos(x);
  return -std::pow(std::sin(x), p - 1) * std::cos(x) / p +
         (p - 1.0) / p * sin_power_antiderivative(p - 2, x);
}

}  // namespace

double unit_ball_volume(int m) {
  if (m < 1) throw DomainError("unit_ball_volume: m must be >= 1, got " + std::to_string(m));
  if (m == 1) return 2.0;
  if (m == 2) return std::numbers::pi;
  return alpha_any(m);
}

double gamma_upper(int m) {
  if (m < 1) throw DomainError("gamma_upper: m must be >= 1");
  if (m == 1) return 0.5;
  return std::pow(5.0, m) * std::pow(3.0, 1.0 / (m - 1)) *
         std::pow(unit_ball_volume(m), -1.0 / m);
}

double gamma_disc_lower(int m) {
  return std::pow(unit_ball_volume(m), -1.0 / m) / m;
}

Subspace Subspace::from_basis(const Mat& basis) {
  const int n = static_cast<int>(basis.rows());
  const int m = static_cast<int>(basis.cols());
  if (m < 1 || n < m) throw DegenerateBasisError("subspace_from_basis: need 1 <= m <= n vectors");
  Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv(m - 1) < 1e-10 * sv(0) || sv(0) == 0.0) {
    throw DegenerateBasisError("subspace_from_basis: vectors are linearly dependent");
  }
  Mat u = svd.matrixU().leftCols(m);
  Mat p = u * u.transpose();
  p = 0.5 * (p + p.transpose()).eval();
  return Subspace(n, m, std::move(p));
}

Subspace Subspace::from_vectors(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw DegenerateBasisError("subspace_from_basis: no vectors");
  Mat b(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != b.rows()) throw DomainError("subspace_from_basis: mixed dimensions");
    b.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return from_basis(b);
}

Subspace Subspace::coordinate(int n, int m, int first) {
  if (m < 1 || first < 0 || first + m > n) throw DomainError("Subspace::coordinate: bad dimensions");
  Mat p = Mat::Zero(n, n);
  for (int i = first; i < first + m; ++i) p(i, i) = 1.0;
  return Subspace(n, m, std::move(p));
}

Subspace Subspace::from_projection(const Mat& proj, double tol) {
  if (proj.rows() != proj.cols() || proj.rows() < 1) throw DomainError("projection must be square");
  const int n = static_cast<int>(proj.rows());
  const int m = static_cast<int>(std::lround(proj.trace()));
  Subspace s(n, m, proj);
  if (m < 1) throw DomainError("projection has trace < 1");
  if (auto why = s.check_invariants(tol); !why.empty()) throw DomainError("invalid projection: " + why);
  return s;
}

std::string Subspace::check_invariants(double tol) const {
  std::ostringstream os;
  if ((proj_ - proj_.transpose()).cwiseAbs().maxCoeff() > 1e-12) os << "not symmetric;";
  if ((proj_ * proj_ - proj_).cwiseAbs().maxCoeff() > tol) os << "not idempotent;";
  if (std::abs(proj_.trace() - m_) > tol) os << "trace differs from m;";
  return os.str();
}

Mat Subspace::basis() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(proj_);
  // Eigenvalues ascend: the last m belong to the image.
  return es.eigenvectors().rightCols(m_);
}

Mat Subspace::complement_basis() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(proj_);
  return es.eigenvectors().leftCols(n_ - m_);
}

double sin_power_integral(int p, double a, double b) {
  if (p < 0) throw DomainError("sin_power_integral: negative power");
  return sin_power_antiderivative(p, b) - sin_power_antiderivative(p, a);
}

double ball_cap_volume(int m, double radius, double t) {
  if (t >= radius) return 0.0;
  if (t <= -radius) return alpha_any(m) * std::pow(radius, m);
  const double phi = std::acos(std::clamp(t / radius, -1.0, 1.0));
  return alpha_any(m - 1) * std::pow(radius, m) * sin_power_integral(m, 0.0, phi);
}

double ball_intersection_volume(int m, double r1, double r2, double dist) {
  if (dist >= r1 + r2) return 0.0;
  if (dist <= std::abs(r1 - r2)) return alpha_any(m) * std::pow(std::min(r1, r2), m);
  const double x = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
  return ball_cap_volume(m, r1, x) + ball_cap_volume(m, r2, dist - x);
}

double sphere_cap_area(int k, double radius, double delta, double rho) {
  const double full = (k + 1) * alpha_any(k + 1) * std::pow(radius, k);
  if (delta <= 0.0) return rho >= radius ? full : 0.0;
  const double kappa = (radius * radius + delta * delta - rho * rho) / (2.0 * radius * delta);
  if (kappa <= -1.0) return full;
  if (kappa >= 1.0) return 0.0;
  return k * alpha_any(k) * std::pow(radius, k) * sin_power_integral(k - 1, 0.0, std::acos(kappa));
}

std::vector<SphereCell> sphere_cells(int k, double spacing) {
  if (k < 0) throw DomainError("sphere_cells: negative dimension");
  if (k == 0) {
    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    return {{plus, 1.0}, {minus, 1.0}};
  }
  // x = (cos psi, sin psi * u) with u on S^{k-1}; dH^k = sin^{k-1} psi dpsi dH^{k-1}.
  const int bands = std::max(1, static_cast<int>(std::ceil(std::numbers::pi / spacing)));
  const double width = std::numbers::pi / bands;
  std::vector<SphereCell> cells;
  for (int j = 0; j < bands; ++j) {
    const double a = j * width;
    const double b = (j + 1) * width;
    const double mid = 0.5 * (a + b);
    const double band = sin_power_integral(k - 1, a, b);
    const double sub_spacing = std::min(std::numbers::pi, spacing / std::sin(mid));
    for (const auto& sub : sphere_cells(k - 1, sub_spacing)) {
      Vec x(k + 1);
      x(0) = std::cos(mid);
      x.tail(k) = std::sin(mid) * sub.direction;
      cells.push_back({std::move(x), band * sub.measure});
    }
  }
  return cells;
}

}  // namespace varitool
