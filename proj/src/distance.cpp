#include "ndsid/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "ndsid/circuit.hpp"

namespace ndsid {

Eigen::MatrixXd to_eigen(const QMatrix& a) {
  MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = to_double(a(i, j));
  return out;
}

NumericNetwork numeric_network(const NdsModel& m) {
  m.validate();
  const SubsystemRealized r = network_realized(m);
  return {to_eigen(r.A_xx), to_eigen(r.A_xv), to_eigen(r.B_x), to_eigen(r.A_zx), to_eigen(r.A_zv),
          to_eigen(r.B_z),  to_eigen(r.C_x),  to_eigen(r.C_v), to_eigen(r.D_u),  m.phi.fixed_zero};
}

namespace {

Eigen::PartialPivLU<MatrixXd> loop_lu(const NumericNetwork& n, const MatrixXd& phi) {
  const auto v = phi.rows();
  return Eigen::PartialPivLU<MatrixXd>(MatrixXd::Identity(v, v) - phi * n.A_zv);
}

}  // namespace

bool well_posed_numeric(const NumericNetwork& n, const MatrixXd& phi) {
  if (phi.rows() == 0) return true;
  return loop_lu(n, phi).rcond() > 1e-12;
}

StateSpace closed_loop_numeric(const NumericNetwork& n, const MatrixXd& phi) {
  if (phi.rows() != n.A_zv.cols() || phi.cols() != n.A_zv.rows())
    throw ShapeMismatch("phi must be " + std::to_string(n.A_zv.cols()) + "x" + std::to_string(n.A_zv.rows()));
  if (!well_posed_numeric(n, phi)) throw IllPosedNds("I - phi A_zv is numerically singular");
  MatrixXd w = phi.rows() ? MatrixXd(loop_lu(n, phi).solve(phi)) : phi;
  return {n.A_xx + n.A_xv * w * n.A_zx, n.B_x + n.A_xv * w * n.B_z, n.C_x + n.C_v * w * n.A_zx,
          n.D_u + n.C_v * w * n.B_z};
}

MatrixXd sample_scm(const NumericNetwork& n, PhiloxStream& rng, std::size_t max_tries, SampleStats* stats) {
  const auto rows = n.A_zv.cols(), cols = n.A_zv.rows();
  MatrixXd phi(rows, cols);
  for (std::size_t t = 0; t < max_tries; ++t) {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double x = rng.uniform_open(-1.0, 1.0);
        phi(i, j) = !n.fixed_zero.empty() && n.fixed_zero[i][j] ? 0.0 : x;
      }
    if (stats) ++stats->draws;
    if (well_posed_numeric(n, phi)) return phi;
    if (stats) ++stats->rejected;
  }
  throw SamplingExhausted("no well-posed SCM after " + std::to_string(max_tries) + " draws");
}

std::vector<double> FrequencyGrid::omegas() const {
  if (!(lo > 0) || !(hi > lo) || points < 2) throw InvalidParam("bad frequency grid");
  std::vector<double> w(points);
  const double a = std::log10(lo), step = (std::log10(hi) - a) / double(points - 1);
  for (std::size_t k = 0; k < points; ++k) w[k] = std::pow(10.0, a + step * double(k));
  return w;
}

double sigma_max(const cplx* h, std::size_t rows, std::size_t cols) {
  const std::size_t k = std::min(rows, cols);
  if (k == 0) return 0.0;
  // Gram matrix of the short side.
  auto at = [&](std::size_t r, std::size_t c) { return h[c * rows + r]; };
  auto gram = [&](std::size_t a, std::size_t b) {
    cplx s = 0;
    if (rows <= cols)
      for (std::size_t c = 0; c < cols; ++c) s += at(a, c) * std::conj(at(b, c));
    else
      for (std::size_t r = 0; r < rows; ++r) s += std::conj(at(r, a)) * at(r, b);
    return s;
  };
  if (k == 1) return std::sqrt(gram(0, 0).real());
  if (k == 2) {
    const double a = gram(0, 0).real(), d = gram(1, 1).real();
    const double b = std::norm(gram(0, 1));
    const double half = 0.5 * (a - d);
    return std::sqrt(0.5 * (a + d) + std::sqrt(half * half + b));
  }
  MatrixXcd g(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) g(a, b) = gram(a, b);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double sigma_max(const MatrixXcd& h) { return sigma_max(h.data(), h.rows(), h.cols()); }

double sigma_max(const MatrixXd& h) {
  if (h.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(h).singularValues()(0);
}

Peak refine_peak(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(a), hi = std::log(b);
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  Peak best{std::exp(x1), f1};
  if (f2 > best.value) best = {std::exp(x2), f2};
  while (hi - lo > rel_tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(std::exp(x1));
      if (f1 > best.value) best = {std::exp(x1), f1};
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(std::exp(x2));
      if (f2 > best.value) best = {std::exp(x2), f2};
    }
  }
  return best;
}

namespace {

double checked(double v, double omega) {
  if (!std::isfinite(v) || v > 1e150)
    throw PoleOnGrid("frequency response blows up at omega = " + std::to_string(omega));
  return v;
}

double scan_and_refine(const std::function<double(double)>& f, const FrequencyGrid& grid) {
  const auto w = grid.omegas();
  std::size_t arg = 0;
  double best = -1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double v = checked(f(w[k]), w[k]);
    if (v > best) best = v, arg = k;
  }
  const double a = w[arg == 0 ? 0 : arg - 1], b = w[std::min(arg + 1, w.size() - 1)];
  auto safe = [&](double om) { return checked(f(om), om); };
  return std::max(best, refine_peak(safe, a, b, grid.rel_tol).value);
}

}  // namespace

double linf_norm(const FrequencyResponse& h, const FrequencyGrid& grid) {
  return scan_and_refine([&](double om) { return sigma_max(h(om)); }, grid);
}

double linf_norm(const RatMatrix& h, const FrequencyGrid& grid) {
  return linf_norm(
      [&](double om) {
        MatrixXcd out(h.rows(), h.cols());
        for (std::size_t i = 0; i < h.rows(); ++i)
          for (std::size_t j = 0; j < h.cols(); ++j) {
            const RatFunc& f = h(i, j);
            const cplx den = f.den().eval(cplx(0, om));
            if (std::abs(den) == 0) throw PoleOnGrid("pole at omega = " + std::to_string(om));
            out(i, j) = f.num().eval(cplx(0, om)) / den;
          }
        return out;
      },
      grid);
}

double linf_norm(const StateSpace& s, const FrequencyGrid& grid) {
  ModalResponse r(s);
  return linf_norm([&](double om) { return r(om); }, grid);
}

ModalResponse::ModalResponse(const StateSpace& s)
    : n_(s.A.rows()), p_(s.C.rows()), m_(s.B.cols()), d_(s.D), s_(s) {
  if (n_ == 0) return;
  Eigen::EigenSolver<MatrixXd> es(s.A, true);
  if (es.info() != Eigen::Success) {
    modal_ = false;
    return;
  }
  const MatrixXcd v = es.eigenvectors();
  Eigen::PartialPivLU<MatrixXcd> lu(v);
  if (!(lu.rcond() > 1e-9)) {
    modal_ = false;
    return;
  }
  const MatrixXcd ct = s.C.cast<cplx>() * v;
  const MatrixXcd bt = lu.solve(s.B.cast<cplx>());
  poles_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_);
  residues_.resize(n_ * p_ * m_);
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t c = 0; c < m_; ++c)
      for (std::size_t r = 0; r < p_; ++r) residues_[k * p_ * m_ + c * p_ + r] = ct(r, k) * bt(k, c);
}

void ModalResponse::eval(double omega, cplx* out) const {
  const std::size_t pm = p_ * m_;
  for (std::size_t c = 0; c < m_; ++c)
    for (std::size_t r = 0; r < p_; ++r) out[c * p_ + r] = d_(r, c);
  if (n_ == 0) return;
  const cplx jw(0, omega);
  if (modal_) {
    for (std::size_t k = 0; k < n_; ++k) {
      const cplx gap = jw - poles_[k];
      if (std::abs(gap) <= 1e-14 * std::max(1.0, std::abs(poles_[k])))
        throw PoleOnGrid("pole at omega = " + std::to_string(omega));
      const cplx f = 1.0 / gap;
      const cplx* res = residues_.data() + k * pm;
      for (std::size_t e = 0; e < pm; ++e) out[e] += res[e] * f;
    }
    return;
  }
  MatrixXcd m = -s_.A.cast<cplx>();
  m.diagonal().array() += jw;
  Eigen::PartialPivLU<MatrixXcd> lu(m);
  if (!(lu.rcond() > 1e-15)) throw PoleOnGrid("pole at omega = " + std::to_string(omega));
  const MatrixXcd h = s_.C.cast<cplx>() * lu.solve(s_.B.cast<cplx>());
  for (std::size_t c = 0; c < m_; ++c)
    for (std::size_t r = 0; r < p_; ++r) out[c * p_ + r] += h(r, c);
}

MatrixXcd ModalResponse::operator()(double omega) const {
  MatrixXcd out(p_, m_);
  eval(omega, out.data());
  return out;
}

namespace {

// Grid points in the order they are scanned: every eighth point first, so a
// pair that cannot beat the running minimum is usually rejected early.
std::vector<std::size_t> scan_order(std::size_t n) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < n; k += 8) order.push_back(k);
  for (std::size_t k = 0; k < n; ++k)
    if (k % 8) order.push_back(k);
  return order;
}

struct Reference {
  const ModalResponse* r1;
  std::vector<cplx> grid;  // H(phi1) at every grid point
};

Reference reference(const ModalResponse& r1, const std::vector<double>& w) {
  Reference ref{&r1, std::vector<cplx>(w.size() * r1.rows() * r1.cols())};
  for (std::size_t k = 0; k < w.size(); ++k) r1.eval(w[k], ref.grid.data() + k * r1.rows() * r1.cols());
  return ref;
}

// sup_w sigma_max(H2 - H1), or nothing once a grid value exceeds cutoff.
std::optional<double> sup_difference(const Reference& ref, const ModalResponse& r2, const std::vector<double>& w,
                                     const std::vector<std::size_t>& order, double cutoff, double rel_tol) {
  const std::size_t p = r2.rows(), m = r2.cols(), pm = p * m;
  std::vector<cplx> buf(pm), buf1(pm);
  auto diff_at_grid = [&](std::size_t k) {
    r2.eval(w[k], buf.data());
    const cplx* h1 = ref.grid.data() + k * pm;
    for (std::size_t e = 0; e < pm; ++e) buf[e] -= h1[e];
    return checked(sigma_max(buf.data(), p, m), w[k]);
  };
  double best = -1;
  std::size_t arg = 0;
  for (std::size_t k : order) {
    const double v = diff_at_grid(k);
    if (v > best || (v == best && k < arg)) best = v, arg = k;
    if (best > cutoff) return std::nullopt;
  }
  auto f = [&](double om) {
    r2.eval(om, buf.data());
    ref.r1->eval(om, buf1.data());
    for (std::size_t e = 0; e < pm; ++e) buf[e] -= buf1[e];
    return checked(sigma_max(buf.data(), p, m), om);
  };
  const double a = w[arg == 0 ? 0 : arg - 1], b = w[std::min(arg + 1, w.size() - 1)];
  return std::max(best, refine_peak(f, a, b, rel_tol).value);
}

}  // namespace

double pair_ratio(const NumericNetwork& n, const MatrixXd& phi1, const MatrixXd& phi2, const FrequencyGrid& grid) {
  const double s = sigma_max(MatrixXd(phi2 - phi1));
  if (s == 0) throw InvalidParam("phi1 and phi2 coincide");
  const ModalResponse r1(closed_loop_numeric(n, phi1)), r2(closed_loop_numeric(n, phi2));
  const auto w = grid.omegas();
  const Reference ref = reference(r1, w);
  return *sup_difference(ref, r2, w, scan_order(w.size()), std::numeric_limits<double>::infinity(),
                         grid.rel_tol) /
         s;
}

unsigned thread_count(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("NDSID_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DistanceEstimate dsid_freq(const NdsModel& m, const DistanceConfig& cfg) {
  if (cfg.n1 == 0 || cfg.n2 == 0) throw InvalidParam("n1 and n2 must be positive");
  if (cfg.n1 > 0xfffffffeULL || cfg.n2 > 0xfffffffeULL) throw InvalidParam("sample counts too large");
  const NumericNetwork net = numeric_network(m);
  const auto w = cfg.grid.omegas();
  const auto order = scan_order(w.size());
  const double inf = std::numeric_limits<double>::infinity();

  struct Outer {
    double ratio = std::numeric_limits<double>::infinity();
    std::size_t inner = 0;
    MatrixXd phi1, phi2;
    double d_scm = 0;
    SampleStats stats;
    std::size_t pole_skips = 0;
  };
  std::vector<Outer> outs(cfg.n1);

  auto work = [&](std::size_t first, std::size_t stride) {
    double best = inf;  // thread-local running minimum, used only for pruning
    for (std::size_t o = first; o < cfg.n1; o += stride) {
      Outer& res = outs[o];
      PhiloxStream s1(cfg.seed, static_cast<std::uint32_t>(o), 0);
      const MatrixXd phi1 = sample_scm(net, s1, cfg.max_tries, &res.stats);
      const ModalResponse r1(closed_loop_numeric(net, phi1));
      Reference ref;
      try {
        ref = reference(r1, w);
      } catch (const PoleOnGrid&) {
        res.pole_skips += cfg.n2;
        continue;
      }
      for (std::size_t i = 0; i < cfg.n2; ++i) {
        PhiloxStream s2(cfg.seed, static_cast<std::uint32_t>(o), static_cast<std::uint32_t>(i + 1));
        const MatrixXd phi2 = sample_scm(net, s2, cfg.max_tries, &res.stats);
        const double ds = sigma_max(MatrixXd(phi2 - phi1));
        if (ds == 0) continue;
        const ModalResponse r2(closed_loop_numeric(net, phi2));
        std::optional<double> sup;
        try {
          sup = sup_difference(ref, r2, w, order, best == inf ? inf : best * ds, cfg.grid.rel_tol);
        } catch (const PoleOnGrid&) {
          ++res.pole_skips;
          continue;
        }
        if (!sup) continue;
        const double ratio = *sup / ds;
        best = std::min(best, ratio);
        if (ratio < res.ratio) {
          res.ratio = ratio;
          res.inner = i;
          res.phi1 = phi1;
          res.phi2 = phi2;
          res.d_scm = ds;
        }
      }
    }
  };

  const unsigned nt = std::min<std::size_t>(thread_count(cfg.threads), cfg.n1);
  if (nt <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, nt);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  DistanceEstimate est;
  est.n1 = cfg.n1;
  est.n2 = cfg.n2;
  est.seed = cfg.seed;
  for (std::size_t o = 0; o < cfg.n1; ++o) {
    const Outer& r = outs[o];
    est.stats.draws += r.stats.draws;
    est.stats.rejected += r.stats.rejected;
    est.pole_skips += r.pole_skips;
    if (r.ratio < est.d_freq) {
      est.d_freq = r.ratio;
      est.d_scm = r.d_scm;
      est.phi1 = r.phi1;
      est.phi2 = r.phi2;
      est.outer = o;
      est.inner = r.inner;
    }
  }
  if (est.d_freq == inf) throw PoleOnGrid("every sampled pair has a pole on the frequency grid");
  return est;
}

ZohResult zoh_discretize(const MatrixXd& a, const MatrixXd& b, double h) {
  if (!(h > 0)) throw InvalidParam("sample period must be positive");
  const auto n = a.rows(), m = b.cols();
  if (a.cols() != n || b.rows() != n) throw ShapeMismatch("A must be square and B must have as many rows");
  if (n == 0) return {a, b};
  MatrixXd aug = MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = a * h;
  aug.topRightCorner(n, m) = b * h;
  const MatrixXd e = aug.exp();
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

MatrixXd prbs(std::size_t channels, std::size_t length, std::uint64_t seed) {
  MatrixXd u(channels, length);
  for (std::size_t c = 0; c < channels; ++c) {
    PhiloxStream s(seed, 0xffffffffu, static_cast<std::uint32_t>(c));
    for (std::size_t t = 0; t < length; ++t) u(c, t) = (s() >> 31) ? 1.0 : -1.0;
  }
  return u;
}

SimPlan sim_plan(const StateSpace& s1, const StateSpace& s2, const SimConfig& cfg) {
  SimPlan plan;
  plan.rho_max = 0;
  plan.rho_min = std::numeric_limits<double>::infinity();
  for (const MatrixXd* a : {&s1.A, &s2.A}) {
    if (a->rows() == 0) continue;
    Eigen::EigenSolver<MatrixXd> es(*a, false);
    for (Eigen::Index k = 0; k < a->rows(); ++k) {
      const double r = std::abs(es.eigenvalues()(k));
      plan.rho_max = std::max(plan.rho_max, r);
      plan.rho_min = std::min(plan.rho_min, r);
    }
  }
  if (cfg.period > 0) {
    plan.period = cfg.period;
  } else {
    if (!(plan.rho_max > 0)) throw InvalidParam("no nonzero eigenvalue to set the sample period");
    plan.period = 0.1 / plan.rho_max;
  }
  if (cfg.samples > 0) {
    plan.samples = cfg.samples;
  } else {
    if (!(plan.rho_min > 0) || !std::isfinite(plan.rho_min))
      throw InvalidParam("zero eigenvalue: the sample count rule is undefined");
    const double want = std::ceil(100.0 * plan.rho_max / plan.rho_min);
    if (want > double(cfg.max_samples)) throw InvalidParam("sample count rule exceeds max_samples");
    plan.samples = std::max<std::size_t>(20000, static_cast<std::size_t>(want));
  }
  return plan;
}

MatrixXd simulate(const StateSpace& s, const MatrixXd& u, double h) {
  const ZohResult z = zoh_discretize(s.A, s.B, h);
  const auto steps = u.cols();
  MatrixXd y(s.C.rows(), steps);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(s.A.rows()), next(s.A.rows());
  for (Eigen::Index t = 0; t < steps; ++t) {
    y.col(t).noalias() = s.C * x + s.D * u.col(t);
    next.noalias() = z.Ad * x + z.Bd * u.col(t);
    x.swap(next);
    if ((t & 63) == 63) {
      const double nx = x.norm();
      if (!std::isfinite(nx) || nx > 1e150)
        throw DivergentSimulation("state norm exceeded 1e150 at step " + std::to_string(t));
    }
  }
  return y;
}

double dsid_time(const NdsModel& m, const MatrixXd& phi1, const MatrixXd& phi2, const SimConfig& cfg,
                 SimPlan* plan_out) {
  const NumericNetwork net = numeric_network(m);
  const StateSpace s1 = closed_loop_numeric(net, phi1), s2 = closed_loop_numeric(net, phi2);
  const SimPlan plan = sim_plan(s1, s2, cfg);
  if (plan_out) *plan_out = plan;
  const MatrixXd u = prbs(s1.B.cols(), plan.samples, cfg.prbs_seed);
  const MatrixXd e = simulate(s2, u, plan.period) - simulate(s1, u, plan.period);
  const double energy = e.squaredNorm();
  if (energy == 0) return 0.0;
  return std::sqrt(energy) / (double(plan.samples) * sigma_max(MatrixXd(phi2 - phi1)));
}

std::vector<Rat> default_k1_grid() {
  std::vector<Rat> k;
  for (int i = 1; i <= 19; ++i) k.emplace_back(i, 20);
  for (auto& r : k) r.canonicalize();
  return k;
}

std::vector<SweepRow> circuit_sweep(const std::vector<Rat>& k1s, const DistanceConfig& cfg, const SimConfig& sim) {
  std::vector<SweepRow> rows;
  for (const Rat& k1 : k1s) {
    const NdsModel m = circuit_sweep_model(k1);
    SweepRow row{k1, dsid_freq(m, cfg), {}};
    try {
      row.est.d_time = dsid_time(m, row.est.phi1, row.est.phi2, sim, &row.plan);
    } catch (const DivergentSimulation&) {
      row.est.d_time = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const DistanceConfig& cfg) {
  std::string out = "# format_version=1 n1=" + std::to_string(cfg.n1) + " n2=" + std::to_string(cfg.n2) +
                    " seed=" + std::to_string(cfg.seed) + "\nk1,d_scm,d_sid_F,d_sid_T\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.4f,%.6e,%.6e,%.6e\n", to_double(r.k1), r.est.d_scm, r.est.d_freq,
                  r.est.d_time);
    out += line;
  }
  return out;
}

}  // namespace ndsid
