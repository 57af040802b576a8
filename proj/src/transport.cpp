#include "mvd/transport.hpp"

#include "mvd/jacobi.hpp"

namespace mvd {

namespace {

[[noreturn]] void annotate_step(const GeometryError& err, int step) {
  throw CutLocusError("pole ladder step " + std::to_string(step) + ": " +
                      err.what());
}

}  // namespace

PoleLadderEval pole_ladder_eval(const Manifold& m, CVec x, CVec y, CVec xi) {
  const int rep = m.rep_dim();
  PoleLadderEval ev{VectorXd(rep), VectorXd(rep), VectorXd(rep),
                    VectorXd(rep)};
  try {
    m.geodesic(x, y, 0.5, ev.c);
  } catch (const GeometryError& err) {
    annotate_step(err, 1);
  }
  try {
    m.exp(x, xi, ev.e);
  } catch (const GeometryError& err) {
    annotate_step(err, 2);
  }
  try {
    m.geodesic(ev.e, ev.c, 2.0, ev.p);
  } catch (const GeometryError& err) {
    annotate_step(err, 3);
  }
  try {
    m.log(y, ev.p, ev.zeta);
    ev.zeta = -ev.zeta;
  } catch (const GeometryError& err) {
    annotate_step(err, 4);
  }
  return ev;
}

void pole_ladder(const Manifold& m, CVec x, CVec y, CVec xi, Vec out) {
  out = pole_ladder_eval(m, x, y, xi).zeta;
}

void schild_ladder(const Manifold& m, CVec x, CVec y, CVec xi, Vec out) {
  const int rep = m.rep_dim();
  VectorXd e(rep), c(rep), p(rep);
  try {
    m.exp(x, xi, e);
    m.geodesic(y, e, 0.5, c);
    m.geodesic(x, c, 2.0, p);
    m.log(y, p, out);
  } catch (const GeometryError& err) {
    throw CutLocusError(std::string("Schild ladder: ") + err.what());
  }
}

void transport_by(const Manifold& m, LadderScheme scheme, CVec x, CVec y,
                  CVec xi, Vec out) {
  switch (scheme) {
    case LadderScheme::Pole:
      pole_ladder(m, x, y, xi, out);
      return;
    case LadderScheme::Schild:
      schild_ladder(m, x, y, xi, out);
      return;
    case LadderScheme::ClosedForm:
      m.transport(x, y, xi, out);
      return;
  }
}

PoleLadderAdjoints pole_ladder_differentials(const Manifold& m, CVec x, CVec y,
                                             CVec xi, const PoleLadderEval& ev,
                                             CVec w) {
  const int rep = m.rep_dim();
  PoleLadderAdjoints out{VectorXd(rep), VectorXd(rep), VectorXd(rep)};

  // Adjoint chains of the composition log_y(gamma(exp_x(xi), c; 2)); the
  // transported vector is its negative, so the results flip sign at the end.
  VectorXd at_p(rep), at_e(rep), at_c(rep), tmp(rep);
  jac::log_arg(m, y, ev.p, w, at_p, true);
  jac::geo_x(m, ev.e, ev.c, 2.0, at_p, at_e, true);
  jac::geo_y(m, ev.e, ev.c, 2.0, at_p, at_c, true);

  jac::exp_tangent(m, x, xi, at_e, out.wrt_xi, true);

  jac::log_base(m, y, ev.p, w, out.wrt_y, true);
  jac::geo_x(m, y, x, 0.5, at_c, tmp, true);
  out.wrt_y += tmp;

  jac::exp_base(m, x, xi, at_e, out.wrt_x, true);
  jac::geo_y(m, y, x, 0.5, at_c, tmp, true);
  out.wrt_x += tmp;

  out.wrt_xi = -out.wrt_xi;
  out.wrt_x = -out.wrt_x;
  out.wrt_y = -out.wrt_y;
  return out;
}

TangentVector pole_ladder_differential(const Manifold& m,
                                       const ManifoldPoint& x,
                                       const ManifoldPoint& y,
                                       const TangentVector& xi,
                                       LadderInput wrt,
                                       const TangentVector& w) {
  PoleLadderEval ev = pole_ladder_eval(m, x.coords, y.coords, xi.vec);
  PoleLadderAdjoints adj =
      pole_ladder_differentials(m, x.coords, y.coords, xi.vec, ev, w.vec);
  switch (wrt) {
    case LadderInput::XiPrev:
      return {x, std::move(adj.wrt_xi)};
    case LadderInput::XPoint:
      return {x, std::move(adj.wrt_x)};
    case LadderInput::YPoint:
      return {y, std::move(adj.wrt_y)};
  }
  throw GeometryError("unreachable");
}

}  // namespace mvd
