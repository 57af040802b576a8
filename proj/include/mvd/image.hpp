#pragma once

#include <memory>

#include "mvd/manifold.hpp"

namespace mvd {

// Pixel grid of size n1 x n2, addressed by 0-based (i1, i2) and linearized
// columnwise: index = i1 + n1 * i2.
struct PixelGrid {
  int n1{0};
  int n2{0};

  int size() const { return n1 * n2; }
  bool contains(int i1, int i2) const {
    return i1 >= 0 && i1 < n1 && i2 >= 0 && i2 < n2;
  }
  int index(int i1, int i2) const { return i1 + n1 * i2; }
};

// Grid of manifold points; pixels are the columns of `pts`.  Signals are
// n x 1 grids.
class ManifoldImage {
 public:
  ManifoldImage() = default;
  ManifoldImage(std::shared_ptr<const Manifold> m, int n1, int n2)
      : m_(std::move(m)), grid_{n1, n2} {
    pts.setZero(m_->rep_dim(), grid_.size());
  }

  const Manifold& manifold() const { return *m_; }
  std::shared_ptr<const Manifold> manifold_ptr() const { return m_; }
  const PixelGrid& grid() const { return grid_; }
  int n1() const { return grid_.n1; }
  int n2() const { return grid_.n2; }
  int size() const { return grid_.size(); }

  auto pixel(int idx) { return pts.col(idx); }
  auto pixel(int idx) const { return pts.col(idx); }
  auto pixel(int i1, int i2) { return pts.col(grid_.index(i1, i2)); }
  auto pixel(int i1, int i2) const { return pts.col(grid_.index(i1, i2)); }

  ManifoldPoint point(int idx) const { return {pts.col(idx), m_->key()}; }

  double max_membership_error() const {
    double e = 0;
    for (int i = 0; i < size(); ++i)
      e = std::max(e, m_->membership_error(pts.col(i)));
    return e;
  }

  bool same_shape(const ManifoldImage& o) const {
    return grid_.n1 == o.grid_.n1 && grid_.n2 == o.grid_.n2 &&
           m_->key() == o.m_->key();
  }

  MatrixXd pts;  // rep_dim x (n1*n2)

 private:
  std::shared_ptr<const Manifold> m_;
  PixelGrid grid_;
};

// Field of `comps` tangent vectors per pixel, based at the pixels of
// `base`.  Component k of pixel i is rows [k*rep, (k+1)*rep) of column i.
class TangentField {
 public:
  TangentField() = default;
  TangentField(ManifoldImage base_image, int comps)
      : base_(std::move(base_image)), comps_(comps) {
    vecs.setZero(base_.manifold().rep_dim() * comps, base_.size());
  }

  const ManifoldImage& base() const { return base_; }
  ManifoldImage& base() { return base_; }
  int comps() const { return comps_; }
  int size() const { return base_.size(); }

  auto component(int idx, int k) {
    const int rep = base_.manifold().rep_dim();
    return vecs.col(idx).segment(k * rep, rep);
  }
  auto component(int idx, int k) const {
    const int rep = base_.manifold().rep_dim();
    return vecs.col(idx).segment(k * rep, rep);
  }

  double max_tangent_error() const {
    const auto& m = base_.manifold();
    double e = 0;
    for (int i = 0; i < size(); ++i)
      for (int k = 0; k < comps_; ++k)
        e = std::max(e, m.tangent_error(base_.pixel(i), component(i, k)));
    return e;
  }

  MatrixXd vecs;  // (rep_dim * comps) x size

 private:
  ManifoldImage base_;
  int comps_{0};
};

void require_same_shape(const ManifoldImage& a, const ManifoldImage& b,
                        const char* what);

}  // namespace mvd
