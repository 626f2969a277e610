#include "ndsid/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ndsid {

using nlohmann::json;

namespace {

// Keeps the literal text of floating point numbers so they can be read exactly.
class ExactSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using json_sax_dom_parser::json_sax_dom_parser;
  bool number_float(double, const std::string& text) {
    std::string copy = text;
    return string(copy);
  }
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Rat read_rat(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Rat(std::to_string(j.get<std::uint64_t>()));
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
  fail(where, "expected a number or a \"p/q\" string");
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) fail(where, "unknown key \"" + k + "\"");
}

template <class T, class Read>
Matrix<T> read_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where, Read read) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  if (j.size() != rows)
    fail(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      fail(where + "[" + std::to_string(r) + "]", "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = read(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

QMatrix read_q(const json& obj, const char* key, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!obj.contains(key)) return QMatrix(rows, cols);
  return read_matrix<Rat>(obj.at(key), rows, cols, where + "." + key, read_rat);
}

Poly read_poly(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a coefficient array");
  std::vector<Rat> c;
  for (std::size_t k = 0; k < j.size(); ++k) c.push_back(read_rat(j[k], where + "[" + std::to_string(k) + "]"));
  return Poly(std::move(c));
}

RatFunc read_ratfunc(const json& j, const std::string& where) {
  if (!j.is_object()) return RatFunc(read_rat(j, where));
  check_keys(j, where, {"num", "den"});
  if (!j.contains("num")) fail(where, "missing \"num\"");
  Poly num = read_poly(j.at("num"), where + ".num");
  Poly den = j.contains("den") ? read_poly(j.at("den"), where + ".den") : Poly(1);
  if (den.is_zero()) fail(where, "zero denominator");
  return RatFunc(num, den);
}

std::size_t read_dim(const json& d, const char* key, const std::string& where) {
  if (!d.contains(key)) return 0;
  const json& v = d.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(where + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

SubsystemLft read_subsystem(const json& j, const std::string& where) {
  check_keys(j, where, {"dims", "nominal", "lft", "name"});
  if (!j.contains("dims")) fail(where, "missing \"dims\"");
  const json& jd = j.at("dims");
  const std::string wd = where + ".dims";
  check_keys(jd, wd, {"m_u", "m_v", "m_x", "m_y", "m_z", "m_g", "m_p"});
  Dims d;
  d.m_u = read_dim(jd, "m_u", wd);
  d.m_v = read_dim(jd, "m_v", wd);
  d.m_x = read_dim(jd, "m_x", wd);
  d.m_y = read_dim(jd, "m_y", wd);
  d.m_z = read_dim(jd, "m_z", wd);
  d.m_g = read_dim(jd, "m_g", wd);
  d.m_p = read_dim(jd, "m_p", wd);

  SubsystemLft s = SubsystemLft::zeros(d);
  const json empty = json::object();
  const json& n = j.contains("nominal") ? j.at("nominal") : empty;
  const std::string wn = where + ".nominal";
  check_keys(n, wn, {"A_xx", "A_xv", "B_x", "A_zx", "A_zv", "B_z", "C_x", "C_v", "D_u"});
  s.A_xx0 = read_q(n, "A_xx", d.m_x, d.m_x, wn);
  s.A_xv0 = read_q(n, "A_xv", d.m_x, d.m_v, wn);
  s.B_x0 = read_q(n, "B_x", d.m_x, d.m_u, wn);
  s.A_zx0 = read_q(n, "A_zx", d.m_z, d.m_x, wn);
  s.A_zv0 = read_q(n, "A_zv", d.m_z, d.m_v, wn);
  s.B_z0 = read_q(n, "B_z", d.m_z, d.m_u, wn);
  s.C_x0 = read_q(n, "C_x", d.m_y, d.m_x, wn);
  s.C_v0 = read_q(n, "C_v", d.m_y, d.m_v, wn);
  s.D_u0 = read_q(n, "D_u", d.m_y, d.m_u, wn);

  const json& l = j.contains("lft") ? j.at("lft") : empty;
  const std::string wl = where + ".lft";
  check_keys(l, wl, {"H_x", "H_z", "H_y", "F_x", "F_v", "F_u", "G", "P"});
  s.H_x = read_q(l, "H_x", d.m_x, d.m_p, wl);
  s.H_z = read_q(l, "H_z", d.m_z, d.m_p, wl);
  s.H_y = read_q(l, "H_y", d.m_y, d.m_p, wl);
  s.F_x = read_q(l, "F_x", d.m_g, d.m_x, wl);
  s.F_v = read_q(l, "F_v", d.m_g, d.m_v, wl);
  s.F_u = read_q(l, "F_u", d.m_g, d.m_u, wl);
  s.G = read_q(l, "G", d.m_g, d.m_p, wl);
  s.P = read_q(l, "P", d.m_p, d.m_g, wl);
  return s;
}

json rat_json(const Rat& r) { return to_string(r); }

json poly_json(const Poly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(rat_json(c));
  return a;
}

json ratfunc_json(const RatFunc& f) {
  if (f.is_constant()) return rat_json(f.num().coeff(0));
  return {{"num", poly_json(f.num())}, {"den", poly_json(f.den())}};
}

template <class T, class F>
json matrix_json(const Matrix<T>& m, F entry) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(entry(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json q_json(const QMatrix& m) { return matrix_json(m, rat_json); }

json subsystem_json(const SubsystemLft& s) {
  const Dims& d = s.dims;
  json j;
  j["dims"] = {{"m_u", d.m_u}, {"m_v", d.m_v}, {"m_x", d.m_x}, {"m_y", d.m_y},
               {"m_z", d.m_z}, {"m_g", d.m_g}, {"m_p", d.m_p}};
  j["nominal"] = {{"A_xx", q_json(s.A_xx0)}, {"A_xv", q_json(s.A_xv0)}, {"B_x", q_json(s.B_x0)},
                  {"A_zx", q_json(s.A_zx0)}, {"A_zv", q_json(s.A_zv0)}, {"B_z", q_json(s.B_z0)},
                  {"C_x", q_json(s.C_x0)},   {"C_v", q_json(s.C_v0)},   {"D_u", q_json(s.D_u0)}};
  j["lft"] = {{"H_x", q_json(s.H_x)}, {"H_z", q_json(s.H_z)}, {"H_y", q_json(s.H_y)},
              {"F_x", q_json(s.F_x)}, {"F_v", q_json(s.F_v)}, {"F_u", q_json(s.F_u)},
              {"G", q_json(s.G)},     {"P", q_json(s.P)}};
  return j;
}

std::string subsystem_pair(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

NdsModel parse_model(std::string_view text) {
  json root;
  ExactSax sax(root, true);
  try {
    json::sax_parse(text, &sax);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  check_keys(root, "$", {"format_version", "subsystems", "phi", "factorization", "metadata"});
  if (root.contains("format_version")) {
    const json& v = root.at("format_version");
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
      fail("$.format_version", "unsupported version " + v.dump());
  }
  if (!root.contains("subsystems") || !root.at("subsystems").is_array())
    fail("$", "missing \"subsystems\" array");

  NdsModel m;
  const json& subs = root.at("subsystems");
  for (std::size_t i = 0; i < subs.size(); ++i)
    m.subsystems.push_back(read_subsystem(subs[i], "$.subsystems[" + std::to_string(i) + "]"));

  const std::size_t pv = m.total_v(), pz = m.total_z();
  if (!root.contains("phi")) {
    m.phi.phi = QMatrix(pv, pz);
  } else if (root.at("phi").is_array()) {
    m.phi.phi = read_matrix<Rat>(root.at("phi"), pv, pz, "$.phi", read_rat);
  } else {
    const json& jp = root.at("phi");
    check_keys(jp, "$.phi", {"pattern", "values"});
    m.phi.phi = jp.contains("values") ? read_matrix<Rat>(jp.at("values"), pv, pz, "$.phi.values", read_rat)
                                      : QMatrix(pv, pz);
    if (jp.contains("pattern")) {
      auto mask = read_matrix<Rat>(jp.at("pattern"), pv, pz, "$.phi.pattern", read_rat);
      m.phi.fixed_zero.assign(pv, std::vector<bool>(pz, false));
      for (std::size_t r = 0; r < pv; ++r)
        for (std::size_t c = 0; c < pz; ++c) {
          if (mask(r, c) != 0 && mask(r, c) != 1)
            fail("$.phi.pattern[" + std::to_string(r) + "][" + std::to_string(c) + "]", "expected 0 or 1");
          m.phi.fixed_zero[r][c] = mask(r, c) == 0;
        }
    }
  }

  if (root.contains("factorization")) {
    const json& jf = root.at("factorization");
    check_keys(jf, "$.factorization", {"gbar_yv", "gbar_zu"});
    if (!jf.contains("gbar_yv") || !jf.contains("gbar_zu"))
      fail("$.factorization", "needs both gbar_yv and gbar_zu");
    Factorization f;
    f.gbar_yv = read_matrix<RatFunc>(jf.at("gbar_yv"), m.total_y(), pz, "$.factorization.gbar_yv", read_ratfunc);
    f.gbar_zu = read_matrix<RatFunc>(jf.at("gbar_zu"), pv, m.total_u(), "$.factorization.gbar_zu", read_ratfunc);
    m.factorization = std::move(f);
  }
  if (root.contains("metadata")) m.metadata_json = root.at("metadata").dump();
  m.validate();
  return m;
}

NdsModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump_model(const NdsModel& m) {
  json root;
  root["format_version"] = kFormatVersion;
  root["subsystems"] = json::array();
  for (const auto& s : m.subsystems) root["subsystems"].push_back(subsystem_json(s));
  if (m.phi.has_pattern()) {
    json mask = json::array();
    for (const auto& row : m.phi.fixed_zero) {
      json r = json::array();
      for (bool z : row) r.push_back(z ? 0 : 1);
      mask.push_back(r);
    }
    root["phi"] = {{"pattern", mask}, {"values", q_json(m.phi.phi)}};
  } else {
    root["phi"] = q_json(m.phi.phi);
  }
  if (m.factorization)
    root["factorization"] = {{"gbar_yv", matrix_json(m.factorization->gbar_yv, ratfunc_json)},
                             {"gbar_zu", matrix_json(m.factorization->gbar_zu, ratfunc_json)}};
  root["metadata"] = json::parse(m.metadata_json);
  return root.dump(2) + "\n";
}

void save_model(const NdsModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << dump_model(m);
}

int exit_code(Status s) {
  switch (s) {
    case Status::Identifiable: return 0;
    case Status::Unidentifiable: return 1;
    case Status::Inconclusive: return 2;
  }
  return 3;
}

std::string report_json(const IdentVerdict& v, double seconds) {
  json r;
  r["format_version"] = kFormatVersion;
  r["verdict"] = to_string(v.status);
  r["method"] = v.method;
  r["trail"] = v.notes;
  json ranks = json::array();
  for (const auto& row : v.ranks) {
    json e = {{"subsystem", row.subsystem + 1}, {"yv_fncr", row.yv_fncr}, {"zu_fnrr", row.zu_fnrr},
              {"yv_cols", row.yv_cols}, {"zu_rows", row.zu_rows}};
    e["yv_rank"] = row.yv_rank ? json(*row.yv_rank) : json(nullptr);
    e["zu_rank"] = row.zu_rank ? json(*row.zu_rank) : json(nullptr);
    ranks.push_back(e);
  }
  r["ranks"] = ranks;
  json xi = json::array();
  for (const auto& x : v.xi)
    xi.push_back({{"i", x.i + 1}, {"j", x.j + 1}, {"rows", x.rows}, {"cols", x.cols}, {"rank", x.rank},
                  {"full_column_rank", x.fcr()}});
  r["xi"] = xi;
  if (v.witness) {
    const Witness& w = *v.witness;
    r["witness"] = {{"i", w.i + 1}, {"j", w.j + 1}, {"delta", q_json(w.delta)},
                    {"phi1", q_json(w.phi1)}, {"phi2", q_json(w.phi2)}};
  } else {
    r["witness"] = nullptr;
  }
  r["seconds"] = seconds;
  return r.dump(2) + "\n";
}

std::string report_text(const IdentVerdict& v, double seconds) {
  std::ostringstream o;
  o << "verdict: " << to_string(v.status) << " (" << v.method << ")\n";
  if (!v.ranks.empty()) {
    o << "subsystem  G_yv rank/cols  FNCR  G_zu rank/rows  FNRR\n";
    for (const auto& row : v.ranks) {
      auto rank = [](const std::optional<std::size_t>& r) { return r ? std::to_string(*r) : std::string("-"); };
      o << std::setw(9) << row.subsystem + 1 << "  " << std::setw(8) << rank(row.yv_rank) << "/" << std::left
        << std::setw(5) << row.yv_cols << std::right << "  " << (row.yv_fncr ? "yes " : "no  ") << "  "
        << std::setw(8) << rank(row.zu_rank) << "/" << std::left << std::setw(5) << row.zu_rows << std::right
        << "  " << (row.zu_fnrr ? "yes" : "no") << "\n";
    }
  }
  for (const auto& x : v.xi)
    o << "Xi" << subsystem_pair(x.i, x.j) << ": " << x.rows << "x" << x.cols << ", rank " << x.rank
      << (x.fcr() ? "" : " (column rank deficient)") << "\n";
  for (const auto& n : v.notes) o << "note: " << n << "\n";
  if (v.witness) {
    const Witness& w = *v.witness;
    o << "witness: block " << subsystem_pair(w.i, w.j) << "\n"
      << "delta =\n" << to_string(w.delta) << "\nphi1 =\n" << to_string(w.phi1) << "\nphi2 =\n"
      << to_string(w.phi2) << "\n";
  }
  o << "time: " << std::fixed << std::setprecision(3) << seconds << " s\n";
  return o.str();
}

}  // namespace ndsid
