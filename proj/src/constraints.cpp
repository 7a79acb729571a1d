#include "rvd/constraints.hpp"

#include "rvd/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace rvd {

namespace {
constexpr double kParallelTol = 1e-9;

double clamped_acos(double c) { return std::acos(std::min(1.0, std::max(-1.0, c))); }
}  // namespace

Vec3 hyperplane_normal(const Vec3& xp0, const Vec3& xpd_end, int k, int k0, int lambda_N) {
  if (lambda_N < 1) throw std::invalid_argument("hyperplane_normal: lambda_N must be >= 1");
  if (k < k0 || k - k0 > lambda_N) throw std::invalid_argument("hyperplane_normal: k outside phase");
  const double n0 = xp0.norm();
  const double nd = xpd_end.norm();
  if (!(n0 > 0.0) || !(nd > 0.0)) {
    throw std::invalid_argument("hyperplane_normal: zero endpoint direction");
  }
  const Vec3 h0 = xp0 / n0;
  const Vec3 hd = xpd_end / nd;

  Vec3 axis = h0.cross(hd);
  const double dot = h0.dot(hd);
  if (axis.norm() < kParallelTol) {
    if (dot > 0.0) return h0;  // endpoints coincide; the arc is a point
    axis = orthogonal_unit(h0);
  }
  const double theta = (static_cast<double>(k - k0) / lambda_N) * clamped_acos(dot);
  return rotation_about_axis(axis, theta) * h0;
}

HalfspaceSet rendezvous_halfspace(const Vec3& nu, double r) {
  HalfspaceSet set;
  set.rows.push_back({-nu, -r});
  return set;
}

Mat3 docking_rotation(const Vec3& xpd_hat) {
  const Vec3 e1 = Vec3::UnitX();
  const Vec3 axis = xpd_hat.cross(e1);
  if (axis.norm() < kParallelTol) {
    if (xpd_hat.dot(e1) > 0.0) return Mat3::Identity();
    return rotation_about_axis(Vec3::UnitZ(), M_PI);  // maps -e1 to e1
  }
  return rotation_about_axis(axis, clamped_acos(e1.dot(xpd_hat)));
}

HalfspaceSet docking_polytope(const Vec3& xpd, double alpha) {
  const double dist = xpd.norm();
  if (!(dist > 0.0)) throw std::invalid_argument("docking_polytope: zero docking position");
  if (!(alpha > 0.0) || !(alpha < M_PI / 2.0)) {
    throw std::invalid_argument("docking_polytope: alpha must be in (0, pi/2)");
  }
  const Vec3 xh = xpd / dist;
  const Mat3 T = docking_rotation(xh);
  const Mat3 M = T * (Mat3::Identity() - xh * xh.transpose());
  const double beta = std::tan(alpha) / std::sqrt(2.0);

  // +/- M_i xi <= beta ((xi - xpd)'xh)  ->  (+/- M_i - beta xh') xi <= -beta dist
  HalfspaceSet set;
  set.rows.reserve(6);
  for (int i = 0; i < 3; ++i) {
    const Vec3 mi = M.row(i).transpose();
    set.rows.push_back({mi - beta * xh, -beta * dist});
    set.rows.push_back({-mi - beta * xh, -beta * dist});
  }
  return set;
}

HalfspaceSet schedule(int k, int N, const ConstraintScheduleParams& params,
                      const NormalizedState& x0, const ReferenceTrajectory& reference) {
  const int k0 = reference.scales.k0;
  if (k < k0 || k >= k0 + N) throw std::invalid_argument("schedule: k outside plan horizon");
  const int lambda_N = N - params.N_d;
  if (lambda_N > 0 && k - k0 < lambda_N) {
    const Vec3 nu = hyperplane_normal(x0.position(), reference.at(k0 + lambda_N).position(), k,
                                      k0, lambda_N);
    return rendezvous_halfspace(nu, params.r);
  }
  return docking_polytope(reference.at(k).position(), params.alpha);
}

}  // namespace rvd
