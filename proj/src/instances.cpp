#include "lrsdp/instances.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_set>

#include "lrsdp/fft.hpp"
#include "lrsdp/parallel.hpp"
#include "lrsdp/rng.hpp"

namespace lrsdp {

namespace {

// Sparse symmetric constraints of the form A_k . X = X_{ik,jk} with ik < jk
// (edge constraints, matrix-completion entries). As a symmetric matrix
// A_k = (e_i e_j^T + e_j e_i^T)/2, so (A_k U) scatters half-rows.
struct PairConstraints {
  std::vector<Index> i;
  std::vector<Index> j;

  Index count() const { return static_cast<Index>(i.size()); }

  void map_into(const Matrix& U, Vector& out) const {
    const Index nk = count();
    const Index grain = std::max<Index>(
        Index(1) << 12, nk / (8 * static_cast<Index>(max_threads())) + 1);
    parallel_for(nk, grain, [&](Index lo, Index hi) {
      for (Index k = lo; k < hi; ++k)
        out(k) = U.row(i[k]).dot(U.row(j[k]));
    });
  }

  // out += sum_k p_k A_k U over a column range; callers parallelize over
  // columns so writes stay disjoint.
  void adjoint_into(const Vector& p, const Matrix& U, Matrix& out) const {
    const Index s = U.cols();
    const Index nk = count();
    const Index grain =
        std::max<Index>(1, (Index(1) << 15) / std::max<Index>(1, nk));
    parallel_for(s, grain, [&](Index c0, Index c1) {
      for (Index k = 0; k < nk; ++k) {
        const double w = 0.5 * p(k);
        if (w == 0.0) continue;
        const Index a = i[k], b = j[k];
        for (Index c = c0; c < c1; ++c) {
          out(a, c) += w * U(b, c);
          out(b, c) += w * U(a, c);
        }
      }
    });
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Lovasz theta

SdpInstance build_theta_instance(const Graph& g) {
  require(g.n_vertices >= 1 && !g.edges.empty(), "theta: graph is empty");
  const Index n = g.n_vertices;
  const Index ne = static_cast<Index>(g.edges.size());
  const Index m = ne + 1;

  auto pairs = std::make_shared<PairConstraints>();
  pairs->i.reserve(ne);
  pairs->j.reserve(ne);
  for (const auto& e : g.edges) {
    require(e.first >= 0 && e.second < n && e.first < e.second,
            "theta: bad edge");
    pairs->i.push_back(e.first);
    pairs->j.push_back(e.second);
  }

  SdpInstance inst;
  inst.n = n;
  inst.m = m;
  inst.b = Vector::Zero(m);
  inst.b(m - 1) = 1.0;  // Tr(X) = 1
  inst.tau = 1.0;
  inst.norm_b1 = 1.0;
  inst.norm_C1 = static_cast<double>(n) * static_cast<double>(n);
  inst.identity_constraint = m - 1;

  inst.apply_C = [n](const Matrix& U) -> Matrix {
    // C = -ee^T applied as a rank-one pass
    return -Matrix::Ones(n, 1) * U.colwise().sum();
  };
  inst.apply_map = [pairs, m](const Matrix& U) -> Vector {
    Vector out(m);
    pairs->map_into(U, out);
    out(m - 1) = U.squaredNorm();
    return out;
  };
  inst.apply_adjoint = [pairs, m](const Vector& p, const Matrix& U) -> Matrix {
    Matrix out = p(m - 1) * U;
    pairs->adjoint_into(p.head(m - 1), U, out);
    return out;
  };
  inst.apply_C_plus_adjoint = [pairs, n, m](const Vector& q,
                                            const Matrix& U) -> Matrix {
    Matrix out = q(m - 1) * U;
    out.noalias() -= Matrix::Ones(n, 1) * U.colwise().sum();
    pairs->adjoint_into(q.head(m - 1), U, out);
    return out;
  };
  return inst;
}

// ---------------------------------------------------------------------------
// Matrix completion

void McSpec::validate() const {
  require(n1 >= 1 && n2 >= n1, "matcomp: need n2 >= n1 >= 1");
  require(r >= 1 && r <= n1, "matcomp: need 1 <= r <= n1");
  require(tau_safety >= 1.0, "matcomp: tau_safety must be >= 1");
}

Index matcomp_constraint_count(Index n1, Index n2, int r,
                               bool offset_sample_count) {
  const double gamma = r * std::log(static_cast<double>(n1 + n2));
  const double base =
      static_cast<double>(offset_sample_count ? n1 + n2 - r : n1 + n2);
  return static_cast<Index>(std::ceil(gamma * r * base));
}

McInstance gen_matrix_completion(const McSpec& spec) {
  spec.validate();
  const Index n1 = spec.n1, n2 = spec.n2;
  const Index m = matcomp_constraint_count(n1, n2, spec.r,
                                           spec.offset_sample_count);
  require(m <= n1 * n2, "matcomp: sample count exceeds matrix size");

  Rng rng(spec.seed);
  McInstance out;
  out.hidden_U = gaussian_matrix(n1, spec.r, rng);
  out.hidden_V = gaussian_matrix(n2, spec.r, rng);

  // Omega: m distinct entries, uniform without replacement.
  out.omega_i.reserve(m);
  out.omega_j.reserve(m);
  {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);
    while (static_cast<Index>(seen.size()) < m) {
      const Index i = static_cast<Index>(rng.uniform_below(n1));
      const Index j = static_cast<Index>(rng.uniform_below(n2));
      const std::uint64_t key =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n2) + j;
      if (seen.insert(key).second) {
        out.omega_i.push_back(i);
        out.omega_j.push_back(j);
      }
    }
  }
  {
    // sort for locality; keeps the instance a pure function of the spec
    std::vector<Index> order(m);
    for (Index k = 0; k < m; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::make_pair(out.omega_i[a], out.omega_j[a]) <
             std::make_pair(out.omega_i[b], out.omega_j[b]);
    });
    std::vector<Index> oi(m), oj(m);
    for (Index k = 0; k < m; ++k) {
      oi[k] = out.omega_i[order[k]];
      oj[k] = out.omega_j[order[k]];
    }
    out.omega_i = std::move(oi);
    out.omega_j = std::move(oj);
  }

  // Nuclear norm and balanced factors from the r x r core.
  {
    Eigen::HouseholderQR<Matrix> qru(out.hidden_U);
    Eigen::HouseholderQR<Matrix> qrv(out.hidden_V);
    const Matrix Ru =
        qru.matrixQR().topRows(spec.r).triangularView<Eigen::Upper>();
    const Matrix Rv =
        qrv.matrixQR().topRows(spec.r).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Matrix> svd(Ru * Rv.transpose(),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.nuclear_norm = svd.singularValues().sum();
    const Matrix sqrt_sigma =
        svd.singularValues().cwiseSqrt().asDiagonal().toDenseMatrix();
    const Matrix Qu = qru.householderQ() * Matrix::Identity(n1, spec.r);
    const Matrix Qv = qrv.householderQ() * Matrix::Identity(n2, spec.r);
    out.balanced_U = Qu * svd.matrixU() * sqrt_sigma;
    out.balanced_V = Qv * svd.matrixV() * sqrt_sigma;
  }

  auto pairs = std::make_shared<PairConstraints>();
  pairs->i = out.omega_i;
  pairs->j.resize(m);
  Vector b(m);
  for (Index k = 0; k < m; ++k) {
    pairs->j[k] = n1 + out.omega_j[k];  // column block offset
    b(k) = out.hidden_U.row(out.omega_i[k])
               .dot(out.hidden_V.row(out.omega_j[k]));
  }

  SdpInstance& inst = out.inst;
  inst.n = n1 + n2;
  inst.m = m;
  inst.b = std::move(b);
  // Any X feasible for the entry constraints has Tr(X) >= 2 ||M||_*, with
  // equality at the optimum, so the trace bound is twice the objective bound.
  inst.tau = 2.0 * spec.tau_safety * out.nuclear_norm;
  inst.norm_b1 = inst.b.cwiseAbs().sum();
  inst.norm_C1 = 0.5 * static_cast<double>(inst.n);

  inst.apply_C = [](const Matrix& U) -> Matrix { return 0.5 * U; };
  inst.apply_map = [pairs, m](const Matrix& U) -> Vector {
    Vector out_v(m);
    pairs->map_into(U, out_v);
    return out_v;
  };
  inst.apply_adjoint = [pairs](const Vector& p, const Matrix& U) -> Matrix {
    Matrix out_m = Matrix::Zero(U.rows(), U.cols());
    pairs->adjoint_into(p, U, out_m);
    return out_m;
  };
  inst.apply_C_plus_adjoint = [pairs](const Vector& q,
                                      const Matrix& U) -> Matrix {
    Matrix out_m = 0.5 * U;
    pairs->adjoint_into(q, U, out_m);
    return out_m;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Phase retrieval

void PrSpec::validate() const {
  require(n >= 2 && is_power_of_two(static_cast<std::size_t>(n)),
          "phaseret: n must be a power of two >= 2");
  require(L >= 1, "phaseret: L must be >= 1");
  require(tau_slack >= 1.0, "phaseret: tau_slack must be >= 1");
}

namespace {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

struct PrData {
  Index nc = 0;  // complex dimension
  int L = 1;
  ComplexMatrix masks;  // nc x L
  FftPlan plan;

  PrData(Index nc_, int L_) : nc(nc_), L(L_), plan(static_cast<std::size_t>(nc_)) {}

  struct Scratch {
    ComplexVector u, acc;
    std::vector<std::complex<double>> buf;
    explicit Scratch(Index nc) : u(nc), acc(nc), buf(nc) {}
  };

  void load_column(const Matrix& U, Index c, ComplexVector& u) const {
    for (Index j = 0; j < nc; ++j)
      u(j) = std::complex<double>(U(j, c), U(nc + j, c));
  }

  // b contributions of one factor column: |DFT(d_l .* u)_k|^2
  void map_column(const ComplexVector& u, Vector& out, Scratch& s) const {
    for (int l = 0; l < L; ++l) {
      for (Index j = 0; j < nc; ++j) s.buf[j] = masks(j, l) * u(j);
      plan.forward(s.buf.data());
      double* slot = out.data() + static_cast<Index>(l) * nc;
      for (Index k = 0; k < nc; ++k) slot[k] += std::norm(s.buf[k]);
    }
  }

  // (A*p) u = sum_l conj(d_l) .* IDFT_unscaled(p_l .* DFT(d_l .* u))
  void adjoint_column(const Vector& p, const ComplexVector& u,
                      Scratch& s) const {
    s.acc.setZero();
    for (int l = 0; l < L; ++l) {
      for (Index j = 0; j < nc; ++j) s.buf[j] = masks(j, l) * u(j);
      plan.forward(s.buf.data());
      const double* pl = p.data() + static_cast<Index>(l) * nc;
      for (Index k = 0; k < nc; ++k) s.buf[k] *= pl[k];
      plan.inverse_unscaled(s.buf.data());
      for (Index j = 0; j < nc; ++j)
        s.acc(j) += std::conj(masks(j, l)) * s.buf[j];
    }
  }
};

}  // namespace

PrInstance gen_phase_retrieval(const PrSpec& spec) {
  spec.validate();
  const Index nc = spec.n;
  const int L = spec.L;
  const Index m = nc * L;

  Rng rng(spec.seed);
  PrInstance out;
  out.hidden_x.resize(nc);
  for (Index j = 0; j < nc; ++j)
    out.hidden_x(j) =
        std::complex<double>(rng.normal(), rng.normal()) / std::sqrt(2.0);

  // Octanary masks: d = b1 * b2 with b1 uniform on {1, -1, i, -i} and
  // b2 = sqrt(2)/2 w.p. 4/5, sqrt(3) w.p. 1/5.
  out.masks.resize(nc, L);
  const std::complex<double> quads[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int l = 0; l < L; ++l)
    for (Index j = 0; j < nc; ++j) {
      const std::complex<double> b1 = quads[rng.uniform_below(4)];
      const double b2 = rng.uniform() < 0.8 ? std::sqrt(2.0) / 2.0
                                            : std::sqrt(3.0);
      out.masks(j, l) = b1 * b2;
    }

  auto data = std::make_shared<PrData>(nc, L);
  data->masks = out.masks;

  Vector b = Vector::Zero(m);
  {
    PrData::Scratch s(nc);
    data->map_column(out.hidden_x, b, s);
  }

  SdpInstance& inst = out.inst;
  inst.n = 2 * nc;
  inst.m = m;
  inst.b = std::move(b);
  inst.tau = spec.tau_slack * out.hidden_x.squaredNorm();
  inst.norm_b1 = inst.b.cwiseAbs().sum();
  inst.norm_C1 = static_cast<double>(2 * nc);  // C = I in the embedding
  inst.field_kind = FieldKind::kComplexEmbedded;

  auto for_each_column = [data](Index s, auto&& body) {
    const Index work = data->nc * data->L;
    const Index grain =
        std::max<Index>(1, (Index(1) << 15) / std::max<Index>(1, work));
    parallel_for(s, grain, [&](Index c0, Index c1) {
      for (Index c = c0; c < c1; ++c) body(c);
    });
  };

  inst.apply_C = [](const Matrix& U) -> Matrix { return U; };
  inst.apply_map = [data, for_each_column, m](const Matrix& U) -> Vector {
    const Index s = U.cols();
    Matrix partial = Matrix::Zero(m, s);  // per-column slabs, summed in order
    for_each_column(s, [&](Index c) {
      PrData::Scratch scratch(data->nc);
      data->load_column(U, c, scratch.u);
      Vector col = Vector::Zero(m);
      data->map_column(scratch.u, col, scratch);
      partial.col(c) = col;
    });
    return partial.rowwise().sum();
  };
  auto adjoint_embedded = [data, for_each_column](const Vector& p,
                                                  const Matrix& U,
                                                  bool add_identity) -> Matrix {
    const Index nc_ = data->nc;
    Matrix out_m(U.rows(), U.cols());
    for_each_column(U.cols(), [&](Index c) {
      PrData::Scratch scratch(nc_);
      data->load_column(U, c, scratch.u);
      data->adjoint_column(p, scratch.u, scratch);
      for (Index j = 0; j < nc_; ++j) {
        out_m(j, c) = scratch.acc(j).real();
        out_m(nc_ + j, c) = scratch.acc(j).imag();
      }
    });
    if (add_identity) out_m += U;
    return out_m;
  };
  inst.apply_adjoint = [adjoint_embedded](const Vector& p,
                                          const Matrix& U) -> Matrix {
    return adjoint_embedded(p, U, false);
  };
  inst.apply_C_plus_adjoint = [adjoint_embedded](const Vector& q,
                                                 const Matrix& U) -> Matrix {
    return adjoint_embedded(q, U, true);
  };
  return out;
}

}  // namespace lrsdp
