#pragma once

#include "mvd/image.hpp"

namespace mvd {

enum class Axis { X, Y };  // X steps the first grid index, Y the second

// (D_x u)_i = log_{u_i}(u_{i+(1,0)}) where the forward neighbor exists,
// zero tangent otherwise.
TangentField forward_diff_intrinsic(const ManifoldImage& u, Axis axis);

// Both forward differences stacked per pixel (the intrinsic gradient).
TangentField intrinsic_gradient(const ManifoldImage& u);

// (D~_x xi)_i = xi_i - P^P(xi_{i-(1,0)}) on interior pixels (both grid
// neighbors along the axis exist), zero otherwise.  Applied componentwise.
TangentField backward_diff_pole(const TangentField& xi, Axis axis);

// Absolute second order difference dist(gamma(x1,x3;1/2), x2); the
// midpoint is the one of the minimizing geodesic.
double d2_midpoint(const Manifold& m, CVec x1, CVec x2, CVec x3);
double d2_midpoint(const Manifold& m, const ManifoldPoint& x1,
                   const ManifoldPoint& x2, const ManifoldPoint& x3);

// Mixed difference dist(gamma(x1,x3;1/2), gamma(x2,x4;1/2)).
double d11_mixed(const Manifold& m, CVec x1, CVec x2, CVec x3, CVec x4);

// Per-pixel (d_xx, d_yy, d_xy, d_yx) with the boundary windows of the
// second-order stencils; excluded pixels carry zero.
struct SecondDiffs {
  VectorXd dxx, dyy, dxy, dyx;
};
SecondDiffs second_diffs_image(const ManifoldImage& u);

// Group-valued differences on Lie-group manifolds; identity padding.
ManifoldImage lie_forward_diff(const ManifoldImage& u, Axis axis);
ManifoldImage lie_backward_diff(const ManifoldImage& u, Axis axis);

struct LieSecondDiffs {
  ManifoldImage dxx, dyy, dxy, dyx;
};
LieSecondDiffs lie_second_diffs(const ManifoldImage& u);

// Stencil windows shared by the energies and gradients.
inline bool has_forward(const PixelGrid& g, int i1, int i2, Axis a) {
  return a == Axis::X ? g.contains(i1 + 1, i2) : g.contains(i1, i2 + 1);
}
inline bool is_interior(const PixelGrid& g, int i1, int i2, Axis a) {
  return a == Axis::X ? (g.contains(i1 + 1, i2) && g.contains(i1 - 1, i2))
                      : (g.contains(i1, i2 + 1) && g.contains(i1, i2 - 1));
}
// d_xy window: i +- (0,1) and i + (1,0) in the grid (mirrored for d_yx).
inline bool has_mixed_window(const PixelGrid& g, int i1, int i2, Axis first) {
  if (first == Axis::X)
    return g.contains(i1, i2 + 1) && g.contains(i1, i2 - 1) &&
           g.contains(i1 + 1, i2);
  return g.contains(i1 + 1, i2) && g.contains(i1 - 1, i2) &&
         g.contains(i1, i2 + 1);
}

[[noreturn]] void rethrow_at_pixel(const GeometryError& err, int i1, int i2);
void require_lie_group(const Manifold& m);

}  // namespace mvd
