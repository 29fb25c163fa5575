#pragma once

#include <functional>

#include "lrsdp/types.hpp"

namespace lrsdp {

// Structured progress events. The inner loop reports one event per
// stationary-point computation and per rank-update step; the outer loop
// reports one event per multiplier update.
struct TraceEvent {
  enum class Kind { kInnerStationary, kInnerRankStep, kOuter };
  Kind kind = Kind::kOuter;
  int outer_iter = 0;
  double beta = 0;
  double eps_inner = 0;
  double gap = 0;
  double theta = 0;
  Index rank = 0;
  double al_value = 0;
  double fw_alpha = 0;      // rank-step events only
  double rel_pfeas = 0;     // outer events only
  double rel_gap = 0;
  double rel_dfeas = 0;
};

using TraceSink = std::function<void(const TraceEvent&)>;

}  // namespace lrsdp
