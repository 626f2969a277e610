#include "ndsid/circuit.hpp"

namespace ndsid {

SubsystemLft circuit_example(const CircuitParams& p) {
  if (sgn(p.T) <= 0) throw InvalidParam("T must be positive");
  for (const Rat* k : {&p.k1, &p.k2})
    if (sgn(*k) <= 0 || *k > 1) throw InvalidParam("varistor ratios must lie in (0, 1]");
  SubsystemLft s = SubsystemLft::zeros({2, 1, 3, 1, 2, 2, 2});
  Rat a = -1 / p.T;
  s.A_xx0 = a * QMatrix{{3, 0, 0}, {1, 2, 0}, {1, 0, 1}};
  s.A_xv0 = a * QMatrix{{1}, {0}, {0}};
  s.B_x0 = a * QMatrix{{-1, 0}, {0, 1}, {0, 1}};
  s.A_zx0 = QMatrix{{-1, 1, 0}, {0, 0, 1}};
  s.C_x0 = QMatrix{{1, 0, 0}};
  s.H_x = a * QMatrix{{1, 0}, {0, 1}, {0, 0}};
  s.H_z = QMatrix{{2, -2}, {0, 0}};
  s.F_x = QMatrix{{1, 0, 0}, {0, 1, 0}};
  s.G = QMatrix::identity(2);
  s.P = QMatrix{{Rat(p.k1 / (p.k1 + 1)), 0}, {0, Rat(p.k2 / (p.k2 + 1))}};
  return s;
}

NdsModel circuit_nds(const CircuitParams& first, const CircuitParams& second) {
  NdsModel m;
  m.subsystems = {circuit_example(first), circuit_example(second)};
  m.phi.phi = QMatrix(2, 4);
  return m;
}

NdsModel circuit_sweep_model(const Rat& k1) {
  return circuit_nds({Rat(1), k1, Rat(2, 5)}, {Rat(1), k1, Rat(9, 10)});
}

}  // namespace ndsid
