#include "doctest.h"

#include <cmath>
#include <vector>

#include "lrsdp/instances.hpp"
#include "lrsdp/solver.hpp"
#include "support/oracles.hpp"

using namespace lrsdp;
using testsupport::DenseInstance;

namespace {

// min 2x s.t. x = 0.3 on the 1x1 cone, trace bound 1
SdpInstance tiny_sdp() {
  DenseInstance d;
  d.C = Matrix::Constant(1, 1, 2.0);
  d.A = {Matrix::Constant(1, 1, 1.0)};
  d.b = Vector::Constant(1, 0.3);
  return d.as_operator();
}

}  // namespace

TEST_CASE("scale_instance") {
  SUBCASE("tau = 1 leaves the instance unchanged") {
    const SdpInstance inst = tiny_sdp();
    const ScaledInstance s = scale_instance(inst);
    CHECK(s.tau_orig == 1.0);
    CHECK((s.inst.b - inst.b).norm() == 0.0);
    CHECK(s.inst.norm_b1 == inst.norm_b1);
  }
  SUBCASE("tau = 4 divides the right-hand side") {
    DenseInstance d;
    d.C = Matrix::Identity(2, 2);
    d.A = {Matrix::Identity(2, 2), Matrix::Constant(2, 2, 0.5)};
    d.b = Vector(2);
    d.b << 2, 8;
    d.tau = 4.0;
    const ScaledInstance s = scale_instance(d.as_operator());
    CHECK(s.tau_orig == 4.0);
    CHECK(s.inst.tau == 1.0);
    CHECK(s.inst.b(0) == 0.5);
    CHECK(s.inst.b(1) == 2.0);
    CHECK(s.inst.norm_b1 == doctest::Approx(2.5));
  }
  SUBCASE("solving pre-scaled and auto-scaled instances matches exactly") {
    McSpec spec;
    spec.n1 = 30;
    spec.n2 = 70;
    spec.r = 2;
    spec.seed = 1;
    const McInstance mc = gen_matrix_completion(spec);
    SdpInstance pre = mc.inst;
    pre.b /= pre.tau;
    pre.norm_b1 /= pre.tau;
    pre.tau = 1.0;

    SolverConfig cfg;
    cfg.eps = 1e-4;
    cfg.seed = 3;
    std::vector<double> traj_a, traj_b;
    auto sink_a = [&traj_a](const TraceEvent& e) {
      if (e.kind == TraceEvent::Kind::kOuter) traj_a.push_back(e.rel_pfeas);
    };
    auto sink_b = [&traj_b](const TraceEvent& e) {
      if (e.kind == TraceEvent::Kind::kOuter) traj_b.push_back(e.rel_pfeas);
    };
    const SolveReport ra = solve(mc.inst, cfg, sink_a);
    const SolveReport rb = solve(pre, cfg, sink_b);
    REQUIRE(traj_a.size() == traj_b.size());
    for (std::size_t i = 0; i < traj_a.size(); ++i)
      CHECK(std::abs(traj_a[i] - traj_b[i]) <= 1e-9 * (1.0 + traj_a[i]));
    // reported values differ only by the recorded tau
    CHECK(ra.pval == doctest::Approx(mc.inst.tau * rb.pval / 1.0).epsilon(1e-9));
  }
}

TEST_CASE("multiplier_update") {
  Vector p = Vector::Zero(2), r(2);
  r << 1, -2;
  const Vector out = multiplier_update(p, 1.0, r);
  CHECK(out(0) == 1.0);
  CHECK(out(1) == -2.0);
  CHECK((multiplier_update(out, 5.0, Vector::Zero(2)) - out).norm() == 0.0);
  Rng rng(4);
  const Vector pr = gaussian_vector(5, rng), rr = gaussian_vector(5, rng);
  CHECK((multiplier_update(pr, 2.5, rr) - (pr + 2.5 * rr)).norm() == 0.0);
  CHECK_THROWS_AS(multiplier_update(pr, 1.0, Vector::Zero(3)), InputError);
}

TEST_CASE("check_termination") {
  EigSettings eig;
  eig.tol = 1e-9;
  SUBCASE("feasible point with matching values zeroes the first two ratios") {
    DenseInstance d;
    d.C = Matrix::Zero(2, 2);
    d.C(0, 1) = d.C(1, 0) = 1.0;
    d.A = {Matrix::Identity(2, 2)};
    d.b = Vector::Constant(1, 1.0);
    const SdpInstance inst = d.as_operator();
    Matrix U(2, 1);
    U << 1, 0;  // C.X = 0 = dval at p = 0, theta = 0
    const TerminationTerms t =
        check_termination(inst, Factor(U), Vector::Zero(1), 0.0, eig, 1e-5);
    CHECK(t.rel_pfeas == 0.0);
    CHECK(t.rel_gap == 0.0);
    CHECK(t.rel_dfeas == doctest::Approx(1.0 / 3.0));  // lambda_min(C) = -1
  }
  SUBCASE("psd C with zero multiplier has no dual infeasibility") {
    DenseInstance d;
    d.C = Matrix::Identity(3, 3);
    Rng rng(9);
    d.A = {testsupport::random_symmetric(3, rng)};
    d.b = Vector::Constant(1, 0.1);
    const SdpInstance inst = d.as_operator();
    const TerminationTerms t = check_termination(
        inst, Factor(Matrix::Zero(3, 1)), Vector::Zero(1), 0.0, eig, 1e-5);
    CHECK(t.rel_dfeas == 0.0);
  }
  SUBCASE("C5 theta solution passes all three ratios at 1e-5") {
    const SdpInstance inst = build_theta_instance(make_cycle(5));
    SolverConfig cfg;
    cfg.eps = 1e-5;
    cfg.seed = 0;
    const SolveReport rep = solve(inst, cfg);
    REQUIRE(rep.status == SolveStatus::kOptimal);
    const TerminationTerms t = check_termination(
        inst, rep.U, rep.dual.p, rep.dual.theta, eig, cfg.eps);
    CHECK(t.done);
    CHECK(t.rel_pfeas <= 1e-5);
    CHECK(t.rel_gap <= 1e-5);
    CHECK(t.rel_dfeas <= 1e-5);
  }
}

TEST_CASE("solve: 1x1 SDP pins the single variable") {
  SolverConfig cfg;
  cfg.eps = 1e-6;
  cfg.seed = 1;
  const SolveReport rep = solve(tiny_sdp(), cfg);
  CHECK(rep.status == SolveStatus::kOptimal);
  CHECK(rep.pval == doctest::Approx(0.6).epsilon(1e-4));
  CHECK(rep.rank == 1);
  CHECK(rep.dual.theta >= 0.0);
}

TEST_CASE("solve: C5 theta reaches the classical value") {
  const SdpInstance inst = build_theta_instance(make_cycle(5));
  SolverConfig cfg;
  cfg.eps = 1e-5;
  cfg.seed = 0;
  std::vector<double> thetas;
  const SolveReport rep = solve(inst, cfg, [&thetas](const TraceEvent& e) {
    if (e.kind == TraceEvent::Kind::kOuter) thetas.push_back(e.theta);
  });
  REQUIRE(rep.status == SolveStatus::kOptimal);
  CHECK(std::abs(-rep.pval - std::sqrt(5.0)) <= 1e-4);
  CHECK(std::max({rep.rel_pfeas, rep.rel_gap, rep.rel_dfeas}) <= 1e-5);
  for (double th : thetas) CHECK(th >= 0.0);

  SUBCASE("the dual certificate is psd up to 1e-6 (dense check)") {
    DenseInstance d;
    d.C = -Matrix::Ones(5, 5);
    for (const auto& e : make_cycle(5).edges) {
      Matrix A = Matrix::Zero(5, 5);
      A(e.first, e.second) = A(e.second, e.first) = 0.5;
      d.A.push_back(A);
    }
    d.A.push_back(Matrix::Identity(5, 5));
    const double smin =
        testsupport::min_eigenvalue(d.dual_slack(rep.dual.p, rep.dual.theta));
    CHECK(smin >= -1e-6);
  }

  SUBCASE("warm start from the solution terminates in one outer iteration") {
    const SolveReport again = solve(inst, cfg, rep.U, rep.dual.p);
    CHECK(again.status == SolveStatus::kOptimal);
    CHECK(again.outer_iters == 1);
    // both runs are eps-optimal; values agree at that scale
    CHECK(std::abs(again.pval - rep.pval) <= 1e-4);
  }
}

TEST_CASE("solve: deterministic given the seed") {
  const SdpInstance inst = build_theta_instance(make_petersen());
  SolverConfig cfg;
  cfg.eps = 1e-4;
  cfg.seed = 42;
  const SolveReport a = solve(inst, cfg);
  const SolveReport b = solve(inst, cfg);
  CHECK(a.pval == b.pval);
  CHECK(a.rel_pfeas == b.rel_pfeas);
  CHECK(a.rel_gap == b.rel_gap);
  CHECK(a.rel_dfeas == b.rel_dfeas);
  CHECK((a.U.U - b.U.U).norm() == 0.0);
  CHECK((a.dual.p - b.dual.p).norm() == 0.0);
}

TEST_CASE("solve: status paths") {
  SUBCASE("iteration limit") {
    SolverConfig cfg;
    cfg.eps = 1e-9;
    cfg.max_outer = 1;
    const SolveReport rep = solve(build_theta_instance(make_cycle(5)), cfg);
    CHECK(rep.status == SolveStatus::kIterationLimit);
    CHECK(rep.outer_iters == 1);
  }
  SUBCASE("time limit") {
    SolverConfig cfg;
    cfg.time_limit = 1e-9;
    const SolveReport rep = solve(build_theta_instance(make_cycle(5)), cfg);
    CHECK(rep.status == SolveStatus::kTimeLimit);
  }
  SUBCASE("numerical failure on overflowing data") {
    DenseInstance d;
    d.C = Matrix::Constant(1, 1, 1.0);
    d.A = {Matrix::Constant(1, 1, 1.0)};
    d.b = Vector::Constant(1, 1e200);
    SolverConfig cfg;
    cfg.max_outer = 3;
    const SolveReport rep = solve(d.as_operator(), cfg);
    CHECK(rep.status == SolveStatus::kNumericalFailure);
    CHECK_FALSE(rep.message.empty());
  }
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.eps = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = SolverConfig{};
  cfg.eps_decay = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = SolverConfig{};
  cfg.beta_growth = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}
