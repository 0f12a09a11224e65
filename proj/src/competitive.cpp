#include "matchgame/competitive.hpp"

#include <algorithm>
#include <cmath>

namespace matchgame {

namespace {

constexpr double kAffineTolerance = 1e-9;

}  // namespace

double affine_residual(const AffineMap& map, const RealMatrix& A, const RealMatrix& B) {
  const RealMatrix& source = map.direction == MapDirection::AtoB ? A : B;
  const RealMatrix& target = map.direction == MapDirection::AtoB ? B : A;
  double worst = 0;
  for (std::size_t r = 0; r < source.rows(); ++r)
    for (std::size_t c = 0; c < source.cols(); ++c)
      worst = std::max(worst, std::fabs(map.alpha * source(r, c) + map.offset - target(r, c)));
  return worst;
}

std::optional<AffineMap> detect_affine(const RealMatrix& A, const RealMatrix& B) {
  if (!same_shape(A, B)) throw ContractViolation("affine detection needs matrices of equal shape");
  if (A.empty()) return AffineMap{};
  const double a_min = A.min(), a_span = A.max() - a_min;
  const double b_min = B.min(), b_span = B.max() - b_min;

  AffineMap map;
  if (a_span == 0 || b_span == 0) {
    if (a_span != b_span) return std::nullopt;
    map = {1.0, a_min - b_min, MapDirection::BtoA};
  } else if (a_span <= b_span) {
    double alpha = a_span / b_span;
    map = {alpha, a_min - alpha * b_min, MapDirection::BtoA};
  } else {
    double alpha = b_span / a_span;
    map = {alpha, b_min - alpha * a_min, MapDirection::AtoB};
  }
  if (affine_residual(map, A, B) > kAffineTolerance) return std::nullopt;
  return map;
}

RealMatrix loss_matrix(const CompetitiveGame& game) { return negated(game.B); }

std::pair<double, double> transform_thresholds(const AffineMap& map, double irp_u, double irp_v) {
  if (map.direction == MapDirection::BtoA) return {(irp_u - map.offset) / map.alpha, -irp_v};
  return {irp_u, -(irp_v + map.offset) / map.alpha};
}

std::pair<double, double> transform_outside_options(const AffineMap& map, double u, double v, double eps) {
  if (!(eps > 0)) throw ContractViolation("eps must be positive");
  const double correction = eps * (1 - map.alpha) / map.alpha;
  if (map.direction == MapDirection::BtoA) return {(u - map.offset) / map.alpha - correction, -v};
  return {u, -((v + map.offset) / map.alpha - correction)};
}

CneResult cne_competitive(const RealMatrix& A, const RealMatrix& L, double u, double v, double eps) {
  return cne_competitive_with_margin(A, L, u, v, eps, 2 * eps);
}

CneResult cne_competitive_with_margin(const RealMatrix& A, const RealMatrix& L, double u, double v, double eps,
                                      double margin) {
  auto map = detect_affine(A, L);
  if (!map) throw ContractViolation("couple game is not strictly competitive");
  const RealMatrix& source = map->direction == MapDirection::BtoA ? L : A;
  auto [lower, upper] = transform_outside_options(*map, u, v, eps);
  CneResult out = cne_with_margin(source, lower, upper, eps, margin);
  out.value = bilinear(A, out.x, out.y);
  return out;
}

}  // namespace matchgame
