#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ndsid/chain.hpp"
#include "ndsid/circuit.hpp"
#include "ndsid/distance.hpp"
#include "ndsid/io.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid::cli {

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

const SubsystemLft& pick(const NdsModel& m, std::size_t one_based) {
  if (one_based < 1 || one_based > m.subsystems.size())
    throw InvalidIndex("subsystem " + std::to_string(one_based) + " out of range 1.." +
                       std::to_string(m.subsystems.size()));
  return m.subsystems[one_based - 1];
}

int cmd_check(Streams s, const std::string& path, const std::string& method, const std::string& format) {
  const auto t0 = std::chrono::steady_clock::now();
  const NdsModel m = load_model(path);
  const IdentVerdict v = check(m, parse_method(method));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.out << (format == "json" ? report_json(v, secs) : report_text(v, secs));
  return exit_code(v.status);
}

int cmd_smith(Streams s, const std::string& path, const std::string& which, std::size_t sub, bool self_test) {
  const NdsModel m = load_model(path);
  const TfmBundle b = subsystem_tfms(realize(pick(m, sub)));
  const RatMatrix& g = which == "yv" ? b.G_yv : which == "zu" ? b.G_zu : which == "zv" ? b.G_zv : b.G_yu;
  const SmithMcMillan f = smith_mcmillan(g);
  s.out << "G_" << which << " of subsystem " << sub << ": " << g.rows() << "x" << g.cols() << ", normal rank "
        << f.rank << "\n";
  s.out << "G =\n" << to_string(g) << "\n";
  for (std::size_t j = 0; j < f.rank; ++j)
    s.out << "alpha_" << j + 1 << " / beta_" << j + 1 << " = (" << f.alphas[j].to_string() << ") / ("
          << f.betas[j].to_string() << ")\n";
  s.out << "U =\n" << to_string(f.U) << "\nV =\n" << to_string(f.V) << "\n";
  if (self_test) {
    const bool ok = to_rat(f.U) * f.diag(g.rows(), g.cols()) * to_rat(f.V) == g;
    s.out << "self-test: " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) return kInternal;
  }
  return 0;
}

int cmd_kcf(Streams s, const std::string& path, std::size_t sub, bool self_test) {
  const NdsModel m = load_model(path);
  const MatrixPencil p = pencil_M(pick(m, sub));
  const KroneckerForm k = kcf(p);
  s.out << "pencil M of subsystem " << sub << ": " << p.rows() << "x" << p.cols() << "\n";
  s.out << "G =\n" << to_string(p.G) << "\nH =\n" << to_string(p.H) << "\n";
  s.out << "blocks: " << k.inventory() << "\n";
  s.out << "U =\n" << to_string(k.U) << "\nV =\n" << to_string(k.V) << "\n";
  if (self_test) {
    const bool ok = transform(k.U, k.canonical(), k.V) == p;
    s.out << "self-test: " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) return kInternal;
  }
  return 0;
}

void write_text(Streams s, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    s.out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << text;
}

int cmd_distance(Streams s, const std::string& model_path, const DistanceConfig& cfg, const std::string& csv) {
  SimConfig sim;
  sim.prbs_seed = cfg.seed;
  if (model_path.empty()) {
    const auto rows = circuit_sweep(default_k1_grid(), cfg, sim);
    write_text(s, csv, sweep_csv(rows, cfg));
    return 0;
  }
  const NdsModel m = load_model(model_path);
  DistanceEstimate e = dsid_freq(m, cfg);
  SimPlan plan;
  try {
    e.d_time = dsid_time(m, e.phi1, e.phi2, sim, &plan);
  } catch (const DivergentSimulation& ex) {
    s.err << "warning: " << ex.what() << "\n";
  }
  char line[160];
  std::snprintf(line, sizeof line, "%.6e,%.6e,%.6e\n", e.d_scm, e.d_freq, e.d_time);
  write_text(s, csv,
             "# format_version=1 n1=" + std::to_string(cfg.n1) + " n2=" + std::to_string(cfg.n2) +
                 " seed=" + std::to_string(cfg.seed) + "\nd_scm,d_sid_F,d_sid_T\n" + line);
  return 0;
}

int cmd_example(Streams s, const std::string& t, const std::string& k1, const std::string& k2,
                const std::string& out) {
  CircuitParams p{parse_rat(t), parse_rat(k1), parse_rat(k2)};
  NdsModel m = circuit_nds(p, p);
  m.metadata_json = R"({"example":"op-amp circuit","T":")" + to_string(p.T) + R"(","k1":")" + to_string(p.k1) +
                    R"(","k2":")" + to_string(p.k2) + R"("})";
  write_text(s, out, dump_model(m));
  return 0;
}

int code_for(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kParseError;
  if (dynamic_cast<const ShapeMismatch*>(&e) || dynamic_cast<const InvalidIndex*>(&e) ||
      dynamic_cast<const NotSquare*>(&e))
    return kShapeError;
  if (dynamic_cast<const IllPosedSubsystem*>(&e) || dynamic_cast<const IllPosedNds*>(&e)) return kIllPosed;
  if (dynamic_cast<const PreconditionViolated*>(&e) || dynamic_cast<const FactorizationInvalid*>(&e))
    return kPrecondition;
  if (dynamic_cast<const InternalError*>(&e)) return kInternal;
  return kNumeric;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Streams s{out, err};
  CLI::App app{"Structural identifiability of networked dynamic systems"};
  app.require_subcommand(1);

  std::string model, method = "auto", format = "text", tfm = "yv", csv, out_path;
  std::size_t sub = 1;
  bool self_test = false;
  std::string t = "1", k1 = "1/2", k2 = "1/2";
  DistanceConfig dcfg;
  dcfg.seed = 20260101;

  auto* check = app.add_subcommand("check", "Decide identifiability of a model file");
  check->add_option("model", model, "model JSON")->required();
  check->add_option("--method", method)->check(CLI::IsMember({"auto", "thm2", "thm5", "cor2", "chain"}));
  check->add_option("--out", format)->check(CLI::IsMember({"json", "text"}));

  auto* smith = app.add_subcommand("smith", "Smith-McMillan form of a subsystem TFM");
  smith->add_option("model", model)->required();
  smith->add_option("--tfm", tfm)->check(CLI::IsMember({"yv", "zu", "zv", "yu"}));
  smith->add_option("--subsystem", sub, "one-based");
  smith->add_flag("--self-test", self_test, "check U diag V == G");

  auto* kcfc = app.add_subcommand("kcf", "Kronecker form of the FNCR pencil of a subsystem");
  kcfc->add_option("model", model)->required();
  kcfc->add_option("--subsystem", sub, "one-based");
  kcfc->add_flag("--self-test", self_test, "check U K V == pencil");

  auto* dist = app.add_subcommand("distance", "Monte-Carlo distance; without a model, the circuit k1 sweep");
  dist->add_option("model", model);
  dist->add_option("--n1", dcfg.n1);
  dist->add_option("--n2", dcfg.n2);
  dist->add_option("--seed", dcfg.seed);
  dist->add_option("--threads", dcfg.threads, "default: NDSID_THREADS or all cores");
  dist->add_option("--csv", csv, "output path, stdout when omitted");

  auto* ex = app.add_subcommand("example", "Write the two-subsystem op-amp circuit model");
  ex->add_option("--T", t);
  ex->add_option("--k1", k1);
  ex->add_option("--k2", k2);
  ex->add_option("--out", out_path, "output path, stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) return cmd_check(s, model, method, format);
    if (*smith) return cmd_smith(s, model, tfm, sub, self_test);
    if (*kcfc) return cmd_kcf(s, model, sub, self_test);
    if (*dist) return cmd_distance(s, model, dcfg, csv);
    if (*ex) return cmd_example(s, t, k1, k2, out_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace ndsid::cli
