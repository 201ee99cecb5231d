#include "su11/representation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "su11/errors.hpp"

namespace su11 {

namespace {

const cplx I{0.0, 1.0};

double interior_max(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows() - 1;
  return n > 0 ? m.topLeftCorner(n, n).cwiseAbs().maxCoeff() : 0.0;
}

void check_deficit(double deficit, double k, int n, cplx zeta) {
  if (deficit > 1e-6) {
    std::ostringstream os;
    os << "coherent state with |zeta| = " << std::abs(zeta) << ", k = " << k << " loses " << deficit
       << " of its norm beyond N = " << n;
    throw Error(ErrorKind::TruncationInsufficient, os.str());
  }
}

}  // namespace

TruncatedRep build_rep(double k, int n) {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "Bargmann index k must be > 0");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "truncation dimension N must be >= 2");
  TruncatedRep rep;
  rep.k = k;
  rep.n = n;
  rep.kp = Eigen::MatrixXd::Zero(n, n);
  rep.kz = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    rep.kz(m, m) = m + k;
    if (m + 1 < n) rep.kp(m + 1, m) = std::sqrt((m + 1.0) * (m + 2.0 * k));
  }
  rep.km = rep.kp.transpose();
  rep.kx = 0.5 * (rep.kp + rep.km).cast<cplx>();
  rep.ky = ((rep.kp - rep.km).cast<cplx>()) / (2.0 * I);
  return rep;
}

Eigen::MatrixXcd casimir(const TruncatedRep& rep) {
  const Eigen::MatrixXcd kz = rep.kz.cast<cplx>();
  return kz * kz - rep.kx * rep.kx - rep.ky * rep.ky;
}

InteriorResiduals interior_residuals(const TruncatedRep& rep) {
  const Eigen::MatrixXcd kp = rep.kp.cast<cplx>();
  const Eigen::MatrixXcd km = rep.km.cast<cplx>();
  const Eigen::MatrixXcd kz = rep.kz.cast<cplx>();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.n, rep.n);
  InteriorResiduals r;
  r.casimir = interior_max(casimir(rep) - rep.k * (rep.k - 1.0) * id);
  r.kz_kp = interior_max(kz * kp - kp * kz - kp);
  r.kz_km = interior_max(kz * km - km * kz + km);
  r.kp_km = interior_max(kp * km - km * kp + 2.0 * kz);
  r.kx_ky = interior_max(rep.kx * rep.ky - rep.ky * rep.kx + I * kz);
  return r;
}

Eigen::MatrixXcd hamiltonian(const TruncatedRep& rep, const AlgebraElement& m) {
  return m.kx * rep.kx + m.ky * rep.ky + m.kz * rep.kz.cast<cplx>();
}

Eigen::MatrixXcd propagator(const TruncatedRep& rep, const AlgebraElement& m, double t) {
  const Eigen::MatrixXcd h = hamiltonian(rep, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::NotConverged, "Hermitian eigensolver failed");
  const Eigen::VectorXcd phases = (-I * t * eig.eigenvalues().cast<cplx>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

cplx coherent_label(cplx alpha) {
  const double r = std::abs(alpha);
  if (r == 0.0) return {0.0, 0.0};
  return alpha / r * std::tanh(r);
}

Eigen::VectorXcd coherent_amplitudes(cplx zeta, double k, int n) {
  const double z2 = std::norm(zeta);
  if (!(z2 < 1.0)) throw Error(ErrorKind::InvalidArgument, "coherent label must satisfy |zeta| < 1");
  Eigen::VectorXcd c(n);
  double w = std::pow(1.0 - z2, 2.0 * k);  // |c_m|^2 by recurrence
  const double phase = std::arg(zeta);
  for (int m = 0; m < n; ++m) {
    c(m) = std::sqrt(w) * std::polar(1.0, m * phase);
    w *= (m + 2.0 * k) / (m + 1.0) * z2;
  }
  return c;
}

double coherent_tail(cplx zeta, double k, int n) {
  const double z2 = std::norm(zeta);
  if (!(z2 < 1.0)) throw Error(ErrorKind::InvalidArgument, "coherent label must satisfy |zeta| < 1");
  if (z2 == 0.0) return 0.0;
  // Walk the weight recurrence to m = n, then sum the tail until it stops mattering.
  double log_w = 2.0 * k * std::log1p(-z2);
  for (int m = 0; m < n; ++m) log_w += std::log((m + 2.0 * k) / (m + 1.0)) + std::log(z2);
  double w = std::exp(log_w);
  double tail = 0.0;
  for (long m = n; m < n + 1'000'000; ++m) {
    tail += w;
    const double ratio = (m + 2.0 * k) / (m + 1.0) * z2;
    w *= ratio;
    if (ratio < 1.0 && w < 1e-18 * tail * (1.0 - ratio)) break;
    if (w == 0.0) break;
  }
  return tail;
}

CoherentState coherent_state(cplx alpha, double k, int n) {
  const TruncatedRep rep = build_rep(k, n);
  const cplx zeta = coherent_label(alpha);
  CoherentState out;
  out.alpha = alpha;
  out.k = k;
  out.deficit = coherent_tail(zeta, k, n);
  check_deficit(out.deficit, k, n, zeta);

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
  e0(0) = 1.0;
  if (alpha == cplx{0.0, 0.0}) {
    out.amplitudes = e0;
  } else {
    // alpha K+ - conj(alpha) K- = -i (-2 Im(alpha) Kx - 2 Re(alpha) Ky).
    const AlgebraElement gen{-2.0 * alpha.imag(), -2.0 * alpha.real(), 0.0};
    out.amplitudes = propagator(rep, gen, 1.0) * e0;
  }
  out.closed_form_error = (out.amplitudes - coherent_amplitudes(zeta, k, n)).cwiseAbs().maxCoeff();
  return out;
}

TransitionReport transition_check(const AlgebraElement& a, const AlgebraElement& b,
                                  const ControlSchedule& schedule, double k, int n) {
  schedule.validate(1);
  const TruncatedRep rep = build_rep(k, n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(0) = 1.0;
  GroupElement x = GroupElement::identity();
  TransitionReport rep_out;
  rep_out.final_label = {0.0, 0.0};

  for (const auto& seg : schedule.segments) {
    const AlgebraElement m = a + seg.controls.front() * b;
    psi = propagator(rep, m, seg.duration) * psi;
    x = group_mul(exp_element(m, seg.duration), x);

    const cplx zeta = x.b() / std::conj(x.a());
    const double deficit = coherent_tail(zeta, k, n);
    check_deficit(deficit, k, n, zeta);
    rep_out.max_deficit = std::max(rep_out.max_deficit, deficit);

    const Eigen::VectorXcd expected = coherent_amplitudes(zeta, k, n);
    const double fidelity = std::norm(expected.dot(psi));
    const cplx estimate = psi(1) / (psi(0) * std::sqrt(2.0 * k));
    rep_out.min_fidelity = std::min(rep_out.min_fidelity, fidelity);
    rep_out.max_label_discrepancy = std::max(rep_out.max_label_discrepancy, std::abs(estimate - zeta));
    rep_out.final_label = zeta;
  }
  return rep_out;
}

}  // namespace su11
