#pragma once

// Op-amp circuit network used throughout the examples and the distance sweep.

#include "ndsid/model.hpp"

namespace ndsid {

struct CircuitParams {
  Rat T{1};
  Rat k1{1, 2};
  Rat k2{1, 2};
};

/// One subsystem. Throws InvalidParam unless T > 0 and 0 < k1, k2 <= 1.
SubsystemLft circuit_example(const CircuitParams& p);

/// Two circuit subsystems; phi defaults to the 2 x 4 zero matrix.
NdsModel circuit_nds(const CircuitParams& first, const CircuitParams& second);
/// The sweep configuration: T = 1, k12 = 2/5, k22 = 9/10, k11 = k21 = k1.
NdsModel circuit_sweep_model(const Rat& k1);

}  // namespace ndsid
