#pragma once

#include "mvd/differences.hpp"
#include "mvd/image.hpp"

namespace mvd::euc {

// Euclidean models on embedded pixel data (channels x N, columnwise grid).
// The smoothing convention matches the intrinsic energies: every pixel
// group sqrt(S) becomes sqrt(S + eps^2).

MatrixXd forward_diff(const PixelGrid& g, const MatrixXd& u, Axis axis);
MatrixXd backward_diff(const PixelGrid& g, const MatrixXd& u, Axis axis);
// adjoints (negative divergence counterparts of the stencils above)
MatrixXd adj_forward_diff(const PixelGrid& g, const MatrixXd& y, Axis axis);
MatrixXd adj_backward_diff(const PixelGrid& g, const MatrixXd& y, Axis axis);

double data_term(const MatrixXd& u, const MatrixXd& f);
MatrixXd grad_data_term(const MatrixXd& u, const MatrixXd& f);

double tv(const PixelGrid& g, const MatrixXd& u, double eps);
MatrixXd grad_tv(const PixelGrid& g, const MatrixXd& u, double eps);

// scale multiplies every stencil magnitude; 0.5 mirrors the intrinsic
// midpoint differences in the flat limit, 1.0 is the plain second-order
// prior.
double tv2(const PixelGrid& g, const MatrixXd& u, double eps,
           double scale = 1.0);
MatrixXd grad_tv2(const PixelGrid& g, const MatrixXd& u, double eps,
                  double scale = 1.0);

// TGV coupling terms; xi carries two embedded components stacked rowwise
// (2n x N).
double tgv_first(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                 double eps);
void grad_tgv_first(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                    double eps, MatrixXd& gu, MatrixXd& gxi);
double tgv_second(const PixelGrid& g, const MatrixXd& xi, double eps,
                  bool symmetric);
MatrixXd grad_tgv_second(const PixelGrid& g, const MatrixXd& xi, double eps,
                         bool symmetric);

// Whole-model values used by the extrinsic solvers' reporting.
double energy_additive(const PixelGrid& g, const MatrixXd& u,
                       const MatrixXd& f, double alpha, double beta,
                       double eps);
double energy_ic(const PixelGrid& g, const MatrixXd& v, const MatrixXd& w,
                 const MatrixXd& f, double alpha, double beta, double eps);
double energy_tgv(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                  const MatrixXd& f, double alpha, double beta, double eps,
                  bool symmetric = false);

}  // namespace mvd::euc
