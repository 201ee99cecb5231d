#pragma once

// Truncated positive discrete series D+(k): the first N ladder states |m, k>.

#include <Eigen/Core>

#include "su11/algebra.hpp"
#include "su11/simulator.hpp"

namespace su11 {

struct TruncatedRep {
  double k = 0.5;
  int n = 2;
  Eigen::MatrixXd kp;   // K+ |m> = sqrt((m+1)(m+2k)) |m+1>
  Eigen::MatrixXd km;   // K- = K+^T
  Eigen::MatrixXd kz;   // diag(m + k)
  Eigen::MatrixXcd kx;  // (K+ + K-) / 2
  Eigen::MatrixXcd ky;  // (K+ - K-) / 2i
};

TruncatedRep build_rep(double k, int n);

/// Kz^2 - Kx^2 - Ky^2.
Eigen::MatrixXcd casimir(const TruncatedRep& rep);

/// Largest deviations on the interior block (rows and columns 0..N-2).
struct InteriorResiduals {
  double casimir = 0.0;  // from k(k-1) I
  double kz_kp = 0.0;    // [Kz, K+] - K+
  double kz_km = 0.0;    // [Kz, K-] + K-
  double kp_km = 0.0;    // [K+, K-] + 2 Kz
  double kx_ky = 0.0;    // [Kx, Ky] + i Kz
};

InteriorResiduals interior_residuals(const TruncatedRep& rep);

/// Hermitian operator kx Kx + ky Ky + kz Kz; the algebra element M acts as -i times this.
Eigen::MatrixXcd hamiltonian(const TruncatedRep& rep, const AlgebraElement& m);

/// exp(t * (-i H(M))) computed by Hermitian eigendecomposition.
Eigen::MatrixXcd propagator(const TruncatedRep& rep, const AlgebraElement& m, double t);

/// Coherent-state label zeta = (alpha / |alpha|) tanh |alpha|.
cplx coherent_label(cplx alpha);

/// Normalized amplitudes (1-|z|^2)^k sqrt(Gamma(m+2k) / (m! Gamma(2k))) z^m for m < n.
Eigen::VectorXcd coherent_amplitudes(cplx zeta, double k, int n);

/// Probability mass of the exact coherent state beyond the first n ladder states.
double coherent_tail(cplx zeta, double k, int n);

struct CoherentState {
  cplx alpha;
  double k = 0.5;
  Eigen::VectorXcd amplitudes;  // exp(alpha K+ - conj(alpha) K-) |0, k> in the truncated space
  double deficit = 0.0;         // coherent_tail at this truncation
  double closed_form_error = 0.0;  // max |amplitudes - coherent_amplitudes|
};

/// Throws TruncationInsufficient when the deficit exceeds 1e-6.
CoherentState coherent_state(cplx alpha, double k, int n);

struct TransitionReport {
  double max_label_discrepancy = 0.0;
  double min_fidelity = 1.0;
  cplx final_label;
  double max_deficit = 0.0;
};

/// Propagates |0, k> through the truncated Schroedinger flow of the schedule and compares
/// against the coherent state labelled by the Moebius image (a z + b) / (conj(b) z + conj(a))
/// of the 2x2 trajectory, at every segment boundary. Excursions inside a segment are not
/// sampled, so the reported deficit can understate mid-segment truncation loss.
TransitionReport transition_check(const AlgebraElement& a, const AlgebraElement& b,
                                  const ControlSchedule& schedule, double k, int n);

}  // namespace su11
