#pragma once

#include <string>
#include <vector>

#include "emach/machine.hpp"

namespace emach::examples {

// Built-in parametric machines over the binary alphabet {0, 1}. State k of
// the text corresponds to index k-1.

/// Even process: 0|p self-loop and 1|1-p to state 2; state 2 returns on 1.
Machine even(double p);

/// Alternating biased coins: state 1 emits 1 w.p. p, state 2 emits 1 w.p. q,
/// and every step swaps the state. Requires p != q.
Machine abc(double p, double q);

/// Nonminimal four-state noisy period-2 machine: states 1 and 3 emit 0 w.p.
/// p and 1 w.p. 1-p, states 2 and 4 emit 1. States 1~3 and 2~4.
Machine np2(double p);

/// Two-state epsilon-machine of the noisy period-2 process.
Machine np2_minimal(double p);

/// Simple nonunifilar source: state 1 emits 1 and stays (p) or moves to
/// state 2 (1-p); state 2 emits 1 and stays (q) or emits 0 back to state 1.
Machine sns(double p, double q);

/// Single-state i.i.d. coin emitting 1 with probability p.
Machine biased_coin(double p);

/// Names accepted by by_name().
std::vector<std::string> names();

/// Instantiates an example from its name and parameter list. Throws
/// DomainError on bad names, arity or parameter values.
Machine by_name(const std::string& name, const std::vector<double>& params);

}  // namespace emach::examples
