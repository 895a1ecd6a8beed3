#pragma once

#include "memmo/memory.hpp"
#include "memmo/ocp.hpp"

namespace memmo {

/// One optimal-control problem over a whole contact sequence: horizons of
/// T_step knots concatenated sharing boundary knots, per-step running costs,
/// per-step placement/velocity costs at the boundaries, and a reset of the
/// swing coordinates onto the next moving foot at each interior boundary
/// (the swing marker switches feet instantaneously, without control effort).
OcProblem make_multistep_problem(const ContactSequence& seq, const StepperModel& model,
                                 const StepCostWeights& weights, Eigen::Index T_step);

/// Concatenated warm start for a contact sequence: every step is queried in
/// the frame of the previous segment's final root pose and transformed back,
/// sharing the boundary knot. Controls follow u_mode segment by segment.
WarmStart build_multistep(const Memory& memory_left, const Memory& memory_right,
                          const ContactSequence& seq, UMode u_mode = UMode::QuasiStatic);

}  // namespace memmo
