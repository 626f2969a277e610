#pragma once

// Monte-Carlo distance of an NDS to the set of structurally unidentifiable
// ones, in the frequency domain (d_F) and the time domain (d_T).
// Everything here is double precision; the exact core only supplies the
// realized matrices.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ndsid/model.hpp"
#include "ndsid/philox.hpp"

namespace ndsid {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cplx = std::complex<double>;

Eigen::MatrixXd to_eigen(const QMatrix& a);

/// Block diagonal realized network in double precision.
struct NumericNetwork {
  MatrixXd A_xx, A_xv, B_x, A_zx, A_zv, B_z, C_x, C_v, D_u;
  std::vector<std::vector<bool>> fixed_zero;
};
NumericNetwork numeric_network(const NdsModel& m);

struct StateSpace {
  MatrixXd A, B, C, D;
};
/// I - phi A_zv invertible with reciprocal condition above 1e-12.
bool well_posed_numeric(const NumericNetwork& n, const MatrixXd& phi);
/// Throws IllPosedNds.
StateSpace closed_loop_numeric(const NumericNetwork& n, const MatrixXd& phi);

struct SampleStats {
  std::size_t draws = 0, rejected = 0;
  double rejection_rate() const { return draws ? double(rejected) / double(draws) : 0.0; }
};
/// Entries i.i.d. uniform(-1, 1) except fixed zeros; redrawn until well-posed.
/// Throws SamplingExhausted after max_tries draws.
MatrixXd sample_scm(const NumericNetwork& n, PhiloxStream& rng, std::size_t max_tries = 1000,
                    SampleStats* stats = nullptr);

struct FrequencyGrid {
  double lo = 1e-3, hi = 1e3;
  std::size_t points = 721;
  double rel_tol = 1e-6;
  std::vector<double> omegas() const;
};

/// Largest singular value of a rows x cols complex matrix stored column-major.
double sigma_max(const cplx* h, std::size_t rows, std::size_t cols);
double sigma_max(const MatrixXcd& h);
double sigma_max(const MatrixXd& h);

/// Golden-section maximization of f over [a, b] in log(omega).
struct Peak {
  double omega = 0, value = 0;
};
Peak refine_peak(const std::function<double(double)>& f, double a, double b, double rel_tol);

using FrequencyResponse = std::function<MatrixXcd(double omega)>;
/// Grid scan plus refinement around the grid argmax. Throws PoleOnGrid when
/// an evaluation is not finite.
double linf_norm(const FrequencyResponse& h, const FrequencyGrid& grid = {});
double linf_norm(const RatMatrix& h, const FrequencyGrid& grid = {});
double linf_norm(const StateSpace& s, const FrequencyGrid& grid = {});

/// C (jw I - A)^{-1} B + D through an eigendecomposition of A; falls back to
/// a complex solve per frequency when the eigenvectors are ill-conditioned.
class ModalResponse {
 public:
  explicit ModalResponse(const StateSpace& s);
  std::size_t rows() const { return p_; }
  std::size_t cols() const { return m_; }
  /// Writes rows x cols column-major into out. Throws PoleOnGrid.
  void eval(double omega, cplx* out) const;
  MatrixXcd operator()(double omega) const;

 private:
  std::size_t n_ = 0, p_ = 0, m_ = 0;
  bool modal_ = true;
  std::vector<cplx> poles_, residues_;  // residue k occupies p*m entries
  MatrixXd d_;
  StateSpace s_;
};

/// ||H(phi2) - H(phi1)||_inf / sigma_max(phi2 - phi1).
double pair_ratio(const NumericNetwork& n, const MatrixXd& phi1, const MatrixXd& phi2,
                  const FrequencyGrid& grid = {});

struct DistanceConfig {
  std::size_t n1 = 200, n2 = 400;
  std::uint64_t seed = 1;
  std::size_t max_tries = 1000;
  unsigned threads = 0;  // 0: NDSID_THREADS or hardware concurrency
  FrequencyGrid grid;
};

struct DistanceEstimate {
  double d_freq = std::numeric_limits<double>::infinity();
  double d_time = std::numeric_limits<double>::quiet_NaN();
  double d_scm = 0;  // sigma_max(phi2 - phi1) at the argmin pair
  MatrixXd phi1, phi2;
  std::size_t outer = 0, inner = 0;  // sample indices of the argmin pair
  std::size_t n1 = 0, n2 = 0;
  std::uint64_t seed = 0;
  SampleStats stats;
  std::size_t pole_skips = 0;
};

/// Sample streams: phi1 of outer o uses (seed, o, 0), phi2 of pair (o, i)
/// uses (seed, o, i + 1). The argmin does not depend on the thread count.
DistanceEstimate dsid_freq(const NdsModel& m, const DistanceConfig& cfg);

struct ZohResult {
  MatrixXd Ad, Bd;
};
ZohResult zoh_discretize(const MatrixXd& a, const MatrixXd& b, double h);

/// channels x length matrix of i.i.d. +-1.
MatrixXd prbs(std::size_t channels, std::size_t length, std::uint64_t seed);

struct SimConfig {
  double period = 0;        // 0: one tenth of 1 / rho_max
  std::size_t samples = 0;  // 0: max(20000, ceil(100 rho_max / rho_min))
  std::uint64_t prbs_seed = 1;
  std::size_t max_samples = 10'000'000;
};
struct SimPlan {
  double period = 0;
  std::size_t samples = 0;
  double rho_max = 0, rho_min = 0;
};
/// rho over the eigenvalues of both closed-loop A matrices. Throws InvalidParam
/// when the rules give no usable period or sample count.
SimPlan sim_plan(const StateSpace& s1, const StateSpace& s2, const SimConfig& cfg);

/// Outputs y(0..M-1) of the sampled system from zero state; columns are instants.
/// Throws DivergentSimulation.
MatrixXd simulate(const StateSpace& s, const MatrixXd& u, double h);

/// sqrt(sum_t e'e) / (M sigma_max(phi2 - phi1)), M counting t = 0.
double dsid_time(const NdsModel& m, const MatrixXd& phi1, const MatrixXd& phi2, const SimConfig& cfg,
                 SimPlan* plan = nullptr);

/// 0.05, 0.10, ..., 0.95 as exact rationals.
std::vector<Rat> default_k1_grid();

struct SweepRow {
  Rat k1;
  DistanceEstimate est;
  SimPlan plan;
};
/// Same seed at every grid point (common random numbers).
std::vector<SweepRow> circuit_sweep(const std::vector<Rat>& k1s, const DistanceConfig& cfg,
                                    const SimConfig& sim = {});
std::string sweep_csv(const std::vector<SweepRow>& rows, const DistanceConfig& cfg);

/// NDSID_THREADS when set and positive, otherwise hardware concurrency.
unsigned thread_count(unsigned requested = 0);

}  // namespace ndsid
