#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>

#include "lrsdp/graph.hpp"
#include "lrsdp/sdp_instance.hpp"

namespace lrsdp {

// ---------------------------------------------------------------------------
// Maximum stable set: the Lovasz theta SDP in minimization form,
//   min -ee^T . X  s.t.  X_ij = 0 for ij in E,  Tr(X) = 1,  X psd.
// One constraint per edge plus the trace constraint (last index).
SdpInstance build_theta_instance(const Graph& g);

// ---------------------------------------------------------------------------
// Matrix completion via the nuclear-norm SDP
//   min (1/2) Tr(X)  s.t.  X_{i, n1+j} = M_ij for (i,j) in Omega, X psd
// on the (n1+n2)-dimensional block matrix, with a randomly generated hidden
// M = U* V*^T of rank r and |Omega| = ceil(gamma r (n1+n2)),
// gamma = r log(n1+n2).
struct McSpec {
  Index n1 = 0;
  Index n2 = 0;  // n2 >= n1 >= 1
  int r = 1;     // hidden rank, r <= n1
  std::uint64_t seed = 0;
  // Sample count variant ceil(gamma r (n1+n2-r)); the default matches the
  // reference instance tables instead.
  bool offset_sample_count = false;
  double tau_safety = 1.2;  // trace bound = 2 * tau_safety * ||M||_*

  void validate() const;
};

struct McInstance {
  SdpInstance inst;
  Matrix hidden_U;  // n1 x r
  Matrix hidden_V;  // n2 x r
  // Balanced factors of the same M with ||bal_U||_F^2 = ||bal_V||_F^2 =
  // ||M||_*; [bal_U; bal_V]/sqrt(tau) is feasible for the scaled SDP.
  Matrix balanced_U;
  Matrix balanced_V;
  double nuclear_norm = 0.0;
  std::vector<Index> omega_i;  // row indices in [0, n1)
  std::vector<Index> omega_j;  // column indices in [0, n2)
};

Index matcomp_constraint_count(Index n1, Index n2, int r,
                               bool offset_sample_count = false);

McInstance gen_matrix_completion(const McSpec& spec);

// ---------------------------------------------------------------------------
// Phase retrieval from coded diffraction patterns: the Hermitian SDP
//   min Tr(X)  s.t.  <a_i a_i^H, X> = b_i,  X psd,
// with a_(l,k)^H u = DFT(d_l .* u)_k for octanary masks d_l, embedded over
// the reals (factor columns are stacked [Re; Im], dimension 2n).
struct PrSpec {
  Index n = 0;  // signal length, a power of two
  int L = 1;    // number of masks; m = n L
  std::uint64_t seed = 0;
  // Trace bound = tau_slack * ||x||^2. In practice only an upper bound on
  // ||x|| is known; slack also keeps the bound inactive at the optimum, so
  // the spectraplex multiplier vanishes there.
  double tau_slack = 1.1;

  void validate() const;
};

struct PrInstance {
  SdpInstance inst;                // n = 2 * spec.n, m = spec.n * L
  Eigen::VectorXcd hidden_x;       // length spec.n
  Eigen::MatrixXcd masks;          // spec.n x L
};

PrInstance gen_phase_retrieval(const PrSpec& spec);

}  // namespace lrsdp
