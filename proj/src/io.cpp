#include "nplab/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nplab/artin_hasse.hpp"
#include "nplab/dwork.hpp"
#include "nplab/error.hpp"
#include "nplab/oracle.hpp"
#include "nplab/polygon.hpp"

namespace nplab {

const char* tool_version() { return NPLAB_VERSION; }

std::string q_json(const Rational& r) { return num(r).str() + "/" + den(r).str(); }

namespace {

Error config_error(const std::string& what) { return Error(ErrorCode::Config, what); }

const std::set<std::string> kKeys = {"command", "V",     "p",    "lmax",      "kmin",   "kmax", "M",
                                     "N",       "side",  "f",    "seed",      "matrixM", "w",   "k",
                                     "l",       "mchi",  "max_evals", "blocks", "out"};

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error(std::string("bad value for \"") + key + "\"");
  }
}

json ivec_json(const IVec& v) { return json(v); }

json qvec_json(const QVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(q_json(x));
  return a;
}

json polygon_json(const NewtonPolygon& P, long lmax) {
  json out;
  json verts = json::array();
  for (const auto& v : P.vertices) verts.push_back({{"x", v.x}, {"y", q_json(v.y)}});
  out["vertices"] = verts;
  json vals = json::array();
  for (long x = 0; x <= lmax; ++x) vals.push_back(q_json(P.evaluate(x)));
  out["values"] = vals;
  return out;
}

std::vector<Side> sides_of(const std::string& s) {
  if (s == "open") return {Side::Open};
  if (s == "closed") return {Side::Closed};
  if (s == "both") return {Side::Open, Side::Closed};
  throw config_error("side must be open, closed or both");
}

json hypothesis_json(const ExperimentConfig& c) {
  json h;
  if (c.V.empty() || c.p == 0) {
    h["applicable"] = false;
    return h;
  }
  auto d = Parallelotope::from_rows(c.V);
  h["applicable"] = true;
  h["holds"] = hypothesis_holds(d, c.p);
  h["p_divides_vol"] = d.vol % c.p == 0;
  h["bound"] = (d.n + 4) * d.D;
  return h;
}

json header(const ExperimentConfig& c) {
  json j;
  j["tool"] = {{"name", "np-lab"}, {"version", tool_version()}};
  j["config"] = config_to_json(c);
  j["hypothesis"] = hypothesis_json(c);
  return j;
}

// comment header for CSV and plot files
std::string text_header(const ExperimentConfig& c) {
  json h = header(c);
  std::ostringstream os;
  os << "# np-lab " << tool_version() << "\n";
  os << "# config: " << h["config"].dump() << "\n";
  os << "# hypothesis: " << h["hypothesis"].dump() << "\n";
  return os.str();
}

long default_kmax(const ExperimentConfig& c, const Parallelotope& d) { return c.kmax >= 0 ? c.kmax : d.n + 2; }

FPoly fpoly_of(const ExperimentConfig& c, const Parallelotope& d) {
  if (!c.f) throw config_error("compare needs f");
  for (const auto& [P, v] : *c.f) {
    (void)v;
    if ((int)P.size() != d.n) throw config_error("exponent " + vec_str(P) + " has the wrong length");
  }
  FPoly f = make_fpoly(c.p, *c.f);
  check_polytope(d, f);
  return f;
}

RunOutput run_polygon(const ExperimentConfig& c) {
  auto d = Parallelotope::from_rows(c.V);
  const long p = c.p, lmax = c.lmax < 0 ? 30 : c.lmax;
  if (lmax < 1) throw config_error("lmax must be positive");
  RunOutput out;
  json r = header(c);
  r["polytope"] = {{"n", d.n}, {"vol", d.vol}, {"D", d.D}, {"elementary_divisors", d.elementary_divisors}};

  json pts = json::array();
  for (const auto& q : smallest_set(d, lmax))
    pts.push_back({{"Q", ivec_json(q.Q)}, {"w", q_json(q.w)}, {"h", h_point(d, p, q)}});
  r["points"] = pts;

  auto hp = hodge_polygon(d, p, lmax);
  auto ihp = improved_hodge_polygon(d, p, lmax);
  r["hodge"] = polygon_json(hp, lmax);
  r["improved_hodge"] = polygon_json(ihp, lmax);

  json gaps = json::array();
  json xs = json::array();
  long kmax = 0;
  for (long k = 1; count_closed_form(d, k).second <= lmax && (c.kmax < 0 || k <= c.kmax); ++k) kmax = k;
  for (long k = 1; k <= kmax; ++k) {
    auto [xm, xp] = count_closed_form(d, k);
    xs.push_back({{"k", k}, {"x_minus", xm}, {"x_plus", xp}});
    for (Side s : sides_of(c.side)) {
      auto g = ihp_hp_gap(d, p, k, s);
      gaps.push_back({{"k", k},
                      {"side", side_name(s)},
                      {"x", g.x},
                      {"ihp", q_json(g.ihp)},
                      {"hp", q_json(g.hp)},
                      {"gap", q_json(g.gap)},
                      {"strict_guaranteed", g.strict_guaranteed}});
    }
  }
  r["vertices"] = xs;
  r["gaps"] = gaps;

  json fits = json::array();
  for (Side s : sides_of(c.side)) {
    auto fit = h_polynomial_fit(d, p, s, false);
    json coeffs = json::array();
    for (const auto& a : fit.coeffs) coeffs.push_back(q_json(a));
    fits.push_back({{"side", side_name(s)}, {"coeffs", coeffs}, {"values", fit.values}, {"integral", fit.integral}});
  }
  r["h_fit"] = fits;

  auto sd = slope_distribution(d, p, c.mchi);
  r["slope_distribution"] = {{"m_chi", sd.m_chi},     {"period", sd.period},         {"degree", sd.degree},
                             {"table_total", sd.table_total}, {"at_n", sd.at_n}, {"count_open", sd.count_open},
                             {"count_at", sd.count_at}};

  std::ostringstream slopes;
  slopes << text_header(c) << "i1,i2,count_open,count_at\n";
  for (size_t i1 = 0; i1 < sd.count_open.size(); ++i1)
    for (size_t i2 = 0; i2 < sd.count_open[i1].size(); ++i2)
      slopes << i1 << "," << i2 << "," << sd.count_open[i1][i2] << "," << sd.count_at[i1][i2] << "\n";
  std::ostringstream hpt, ihpt;
  hpt << text_header(c) << "# x hodge\n";
  ihpt << text_header(c) << "# x improved_hodge\n";
  for (long x = 0; x <= lmax; ++x) {
    Rational a = hp.evaluate(x), b = ihp.evaluate(x);
    hpt << x << " " << to_decimal(a) << "  # " << q_json(a) << "\n";
    ihpt << x << " " << to_decimal(b) << "  # " << q_json(b) << "\n";
  }
  out.report = r;
  out.files = {{"report.json", r.dump(2) + "\n"},
               {"slopes.csv", slopes.str()},
               {"hodge.dat", hpt.str()},
               {"improved_hodge.dat", ihpt.str()}};
  return out;
}

bool admissible(const std::vector<long>& w, long k, long p) {
  long prev = 0;
  for (long x : w) {
    if (x - prev < k || x - prev > p - k) return false;
    prev = x;
  }
  return true;
}

// all w with k <= w_i - w_{i-1} <= p-k
void admissible_ws(int l, long k, long p, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if ((int)cur.size() == l) {
    out.push_back(cur);
    return;
  }
  long prev = cur.empty() ? 0 : cur.back();
  for (long s = k; s <= p - k; ++s) {
    cur.push_back(prev + s);
    admissible_ws(l, k, p, cur, out);
    cur.pop_back();
  }
}

RunOutput run_matrix_M(const ExperimentConfig& c) {
  const long p = c.p;
  RunOutput out;
  json r = header(c);
  std::vector<std::pair<std::vector<long>, long>> jobs;
  if (!c.w.empty()) {
    if (c.k < 0) throw config_error("matrixM needs k");
    jobs.push_back({c.w, c.k});
  } else {
    std::vector<int> ls = c.l ? std::vector<int>{c.l} : std::vector<int>{1, 2};
    std::vector<long> ks = c.k >= 0 ? std::vector<long>{c.k} : std::vector<long>{0, 1, 2};
    for (int l : ls)
      for (long k : ks) {
        std::vector<std::vector<long>> ws;
        std::vector<long> cur;
        admissible_ws(l, k, p, cur, ws);
        for (auto& w : ws) jobs.push_back({w, k});
      }
  }
  long maxw = 0;
  for (auto& [w, k] : jobs) maxw = std::max(maxw, w.back() + p * (k + 1) + 2);
  auto t = artin_hasse((u64)p, (int)maxw + 1, 1);
  json rows = json::array();
  long zero_adm = 0, n_adm = 0, plus = 0, minus = 0, l1 = 0;
  for (auto& [w, k] : jobs) {
    auto m = matrix_M(w, k, p, t);
    bool adm = admissible(w, k, p);
    json row = {{"w", w}, {"k", k}, {"size", m.M.rows()}, {"det", m.det.residue()}, {"nonzero", !m.det.is_zero()},
                {"admissible", adm}};
    if (w.size() == 1) {
      row["closed_form_k_plus_1"] = m.closed_form_k_plus_1;
      row["closed_form_k_minus_1"] = m.closed_form_k_minus_1;
      ++l1;
      plus += m.closed_form_k_plus_1;
      minus += m.closed_form_k_minus_1;
    }
    if (adm) {
      ++n_adm;
      zero_adm += m.det.is_zero();
    }
    rows.push_back(row);
  }
  r["matrix_M"] = rows;
  json summary = {{"cases", (long)jobs.size()}, {"admissible", n_adm}, {"vanishing_admissible", zero_adm}};
  if (l1) {
    summary["l1_cases"] = l1;
    summary["l1_matches_exponent_k_plus_1"] = plus;
    summary["l1_matches_exponent_k_minus_1"] = minus;
  }
  r["summary"] = summary;
  r["passed"] = zero_adm == 0;
  out.exit_code = zero_adm == 0 ? 0 : 3;
  out.report = r;
  out.files = {{"report.json", r.dump(2) + "\n"}};
  return out;
}

RunOutput run_verify(const ExperimentConfig& c) {
  if (c.matrixM) return run_matrix_M(c);
  auto d = Parallelotope::from_rows(c.V);
  const u64 p = (u64)c.p;
  const long kmin = c.kmin >= 0 ? c.kmin : 1, kmax = default_kmax(c, d);
  if (kmin < 1 || kmax < kmin) throw config_error("need 1 <= kmin <= kmax");
  RunOutput out;
  json r = header(c);
  const bool hyp = hypothesis_holds(d, c.p);
  auto rep = verify_generic(d, p, kmin, kmax, c.max_evals);
  json rows = json::array();
  for (const auto& x : rep.results) {
    json row = {{"k", x.k},         {"side", side_name(x.side)}, {"size", x.size},          {"h", x.h},
                {"mode", mode_name(x.mode)}, {"factored", x.factored}, {"nonzero", x.nonzero},
                {"free_vars", x.stats.free_vars}, {"evaluations", x.stats.evaluations}};
    if (x.factored) {
      json fs = json::array();
      for (const auto& g : x.factors) fs.push_back(mpoly_to_json(g));
      row["factors"] = fs;
    } else {
      row["leading_coefficient"] = mpoly_to_json(x.poly);
    }
    rows.push_back(row);
  }
  r["results"] = rows;
  bool passed = rep.passed;

  if (c.blocks) {
    json bl = json::array();
    for (long k = kmin; k <= kmax; ++k)
      for (Side s : {Side::Open, Side::Closed}) {
        auto bf = res_block_factorization(d, p, k, s, c.max_evals);
        json e = {{"k", k}, {"side", side_name(s)}, {"blocks", (long)bf.blocks.size()}, {"sign", bf.sign},
                  {"equal", bf.equal}};
        if (hyp) {
          json lead = json::array();
          bool all = true;
          for (const auto& b : bf.blocks) {
            auto bld = block_leading_determinant(d, p, b, c.max_evals);
            all &= bld.matches_block;
            lead.push_back({{"P0", ivec_json(b.P0)},
                            {"size", (long)b.members.size()},
                            {"unit", bld.unit.residue()},
                            {"monomial", bld.monomial.str()},
                            {"pi_power", bld.pi_power},
                            {"expected_pi_power", bld.expected_pi_power},
                            {"matches_block", bld.matches_block}});
          }
          e["block_leading"] = lead;
          e["block_leading_ok"] = all;
          passed &= all;
        }
        passed &= bf.equal;
        bl.push_back(e);
      }
    r["block_factorization"] = bl;
  }
  json fails = json::array();
  for (auto& [k, s] : rep.failures) fails.push_back({{"k", k}, {"side", side_name(s)}});
  r["failures"] = fails;
  r["passed"] = passed;
  out.exit_code = !passed && hyp ? 3 : 0;
  out.report = r;
  out.files = {{"report.json", r.dump(2) + "\n"}};
  return out;
}

RunOutput run_compare(const ExperimentConfig& c) {
  auto d = Parallelotope::from_rows(c.V);
  FPoly f = fpoly_of(c, d);
  const long p = c.p;
  const long kmax = c.kmax >= 0 ? c.kmax : 1;
  const long kmin = c.kmin >= 0 ? c.kmin : 0;
  long L = std::max(c.lmax, x_plus(d, kmax)), hmax = 0;
  for (long k = std::max(1L, kmin); k <= kmax; ++k) hmax = std::max(hmax, h_dilate(d, p, k, Side::Closed));
  if (L >= p) throw Error(ErrorCode::IndexTooLarge, "index " + std::to_string(L) + " needs division by p");
  for (long k = 1; k <= L; ++k) check_oracle_scale((u64)p, d.n, (int)k);
  int M = c.M;
  if (M < 0) M = (int)std::max<Integer>(Integer(hmax), ceil_q(improved_hodge_polygon(d, p, L).evaluate(L))) + 1;
  auto run = oracle_run(f, (int)L, M, c.N, c.seed.value_or(0));
  auto cmp = compare(d, f, run);
  auto np = np_check(d, f, kmin, kmax, run);

  RunOutput out;
  json r = header(c);
  r["precision"] = {{"L", L}, {"M", M}, {"N", c.N}};
  json rows = json::array();
  std::ostringstream csv;
  csv << text_header(c) << "l,val_oracle,val_dwork,match\n";
  auto vs = [](int v) { return v == kInfVal ? json(">M") : json(v); };
  auto vcsv = [&](int v) { return v == kInfVal ? std::string(">" + std::to_string(M)) : std::to_string(v); };
  for (int l = 0; l <= L; ++l) {
    rows.push_back({{"l", l}, {"val_oracle", vs(cmp.val_oracle[l])}, {"val_dwork", vs(cmp.val_dwork[l])},
                    {"match", (bool)cmp.match[l]}});
    csv << l << "," << vcsv(cmp.val_oracle[l]) << "," << vcsv(cmp.val_dwork[l]) << "," << (cmp.match[l] ? 1 : 0)
        << "\n";
  }
  r["comparison"] = rows;
  r["match"] = cmp.ok;
  if (!cmp.ok) r["first_mismatch"] = {{"l", cmp.first_l}, {"pi_degree", cmp.first_deg}};
  json verts = json::array();
  for (const auto& v : np.vertices)
    verts.push_back({{"k", v.k}, {"side", side_name(v.side)}, {"x", v.x}, {"h", v.h}, {"val", vs(v.val)},
                     {"generic", v.generic}});
  r["vertices"] = verts;
  r["above_ihp"] = np.above_ihp;
  r["polygon_passes"] = np.passes;
  out.exit_code = cmp.ok ? 0 : 4;
  out.report = r;
  out.files = {{"report.json", r.dump(2) + "\n"}, {"compare.csv", csv.str()}};
  return out;
}

RunOutput run_enumerate(const ExperimentConfig& c) {
  auto d = Parallelotope::from_rows(c.V);
  if (c.k < 0) throw config_error("enumerate needs k");
  RunOutput out;
  json r = header(c);
  json sets = json::array();
  for (Side s : sides_of(c.side)) {
    auto pts = enumerate(d, c.k, s);
    json ps = json::array();
    for (const auto& q : pts)
      ps.push_back({{"Q", ivec_json(q.Q)}, {"z", qvec_json(q.z)}, {"w", q_json(q.w)}, {"deg", qvec_json(q.deg)},
                    {"h", h_point(d, c.p, q)}});
    json e = {{"side", side_name(s)}, {"count", (long)pts.size()}, {"points", ps}};
    if (c.k >= 1) {
      auto [xm, xp] = count_closed_form(d, c.k);
      e["closed_form"] = s == Side::Open ? xm : xp;
      e["h"] = h_dilate(d, c.p, c.k, s);
      json bl = json::array();
      for (const auto& b : block_decomposition(d, c.k, s)) {
        json mem = json::array();
        for (const auto& q : b.members) mem.push_back(ivec_json(q.Q));
        bl.push_back({{"P0", ivec_json(b.P0)}, {"I", b.I}, {"chain", b.chain}, {"K", b.K}, {"members", mem}});
      }
      e["blocks"] = bl;
    }
    sets.push_back(e);
  }
  r["sets"] = sets;
  out.report = r;
  out.files = {{"report.json", r.dump(2) + "\n"}};
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKeys.count(it.key())) throw config_error("unknown config key \"" + it.key() + "\"");
  ExperimentConfig c;
  if (j.contains("command")) c.command = get_as<std::string>(j, "command");
  if (j.contains("V")) {
    if (j["V"].is_string())
      c.V = parse_matrix(j["V"].get<std::string>());
    else
      c.V = get_as<std::vector<std::vector<long>>>(j, "V");
  }
  if (j.contains("p")) c.p = get_as<long>(j, "p");
  if (j.contains("lmax")) c.lmax = get_as<long>(j, "lmax");
  if (j.contains("kmin")) c.kmin = get_as<long>(j, "kmin");
  if (j.contains("kmax")) c.kmax = get_as<long>(j, "kmax");
  if (j.contains("M")) c.M = get_as<int>(j, "M");
  if (j.contains("N")) c.N = get_as<int>(j, "N");
  if (j.contains("side")) c.side = get_as<std::string>(j, "side");
  if (j.contains("f")) c.f = parse_fpoly(j["f"]);
  if (j.contains("seed")) c.seed = get_as<u64>(j, "seed");
  if (j.contains("matrixM")) c.matrixM = get_as<bool>(j, "matrixM");
  if (j.contains("w")) c.w = get_as<std::vector<long>>(j, "w");
  if (j.contains("k")) c.k = get_as<long>(j, "k");
  if (j.contains("l")) c.l = get_as<int>(j, "l");
  if (j.contains("mchi")) c.mchi = get_as<int>(j, "mchi");
  if (j.contains("max_evals")) c.max_evals = get_as<long>(j, "max_evals");
  if (j.contains("blocks")) c.blocks = get_as<bool>(j, "blocks");
  if (j.contains("out")) c.out = get_as<std::string>(j, "out");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.V.empty()) j["V"] = c.V;
  j["p"] = c.p;
  j["lmax"] = c.lmax;
  j["kmin"] = c.kmin;
  j["kmax"] = c.kmax;
  j["M"] = c.M;
  j["N"] = c.N;
  j["side"] = c.side;
  if (c.f) j["f"] = fpoly_to_json(*c.f);
  if (c.seed) j["seed"] = *c.seed;
  j["matrixM"] = c.matrixM;
  if (!c.w.empty()) j["w"] = c.w;
  j["k"] = c.k;
  j["l"] = c.l;
  j["mchi"] = c.mchi;
  j["max_evals"] = c.max_evals;
  j["blocks"] = c.blocks;
  return j;
}

std::vector<std::vector<long>> parse_matrix(const std::string& s) {
  try {
    auto j = json::parse(s);
    return j.get<std::vector<std::vector<long>>>();
  } catch (const nlohmann::json::exception&) {
    throw config_error("cannot read generator matrix \"" + s + "\"; expected e.g. [[2,0],[0,3]]");
  }
}

std::map<IVec, long> parse_fpoly(const json& j) {
  if (!j.is_object()) throw config_error("f must be an object {\"[exponents]\": \"coefficient\"}");
  std::map<IVec, long> f;
  for (auto it = j.begin(); it != j.end(); ++it) {
    IVec P;
    try {
      P = json::parse(it.key()).get<IVec>();
    } catch (const nlohmann::json::exception&) {
      throw config_error("bad exponent vector \"" + it.key() + "\"");
    }
    long v = 0;
    try {
      if (it.value().is_string()) {
        size_t pos = 0;
        const std::string& s = it.value().get_ref<const std::string&>();
        v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
      } else {
        v = it.value().get<long>();
      }
    } catch (const std::exception&) {
      throw config_error("bad coefficient for " + it.key());
    }
    if (f.count(P)) throw config_error("repeated exponent " + it.key());
    f[P] = v;
  }
  return f;
}

json fpoly_to_json(const std::map<IVec, long>& f) {
  json j = json::object();
  for (const auto& [P, v] : f) j[json(P).dump()] = std::to_string(v);
  return j;
}

json mpoly_to_json(const MPoly& g, size_t max_terms) {
  json j;
  j["terms"] = (long)g.size();
  if (g.size() > max_terms) return j;
  json t = json::object();
  if (g.literal()) {
    if (!g.is_zero()) t["[]"] = std::to_string(g.evaluate<long>({}, 1));
  } else {
    for (const auto& [e, c] : g.terms()) t[json(e).dump()] = std::to_string(c);
  }
  j["coefficients"] = t;
  return j;
}

void validate(const ExperimentConfig& c) {
  static const std::set<std::string> cmds = {"polygon", "verify", "compare", "enumerate"};
  if (!cmds.count(c.command)) throw config_error("unknown command \"" + c.command + "\"");
  if (c.p < 2 || !is_prime((u64)c.p)) throw config_error("p = " + std::to_string(c.p) + " is not prime");
  if (c.p > 1000) throw config_error("p beyond desk scale");
  sides_of(c.side);
  if (c.N < 1) throw config_error("N must be positive");
  if (c.mchi < 1) throw config_error("mchi must be positive");
  if (c.matrixM) {
    if (c.command != "verify") throw config_error("matrixM belongs to verify");
    if (c.l < 0 || c.l > 4) throw config_error("l must be in 1..4");
    return;
  }
  if (c.V.empty()) throw config_error("missing generator matrix V");
  const size_t n = c.V.size();
  for (const auto& row : c.V)
    if (row.size() != n) throw config_error("V must be square");
  auto d = Parallelotope::from_rows(c.V);
  if (c.command != "polygon" && d.vol % c.p == 0) throw config_error("p divides the volume");
  if (c.command == "compare" && !c.f) throw config_error("compare needs f");
}

RunOutput run_command(const ExperimentConfig& c) {
  validate(c);
  if (c.command == "polygon") return run_polygon(c);
  if (c.command == "verify") return run_verify(c);
  if (c.command == "compare") return run_compare(c);
  return run_enumerate(c);
}

int exit_code_for(ErrorCode code, bool hypothesis) {
  switch (code) {
    case ErrorCode::Mismatch:
      return 4;
    case ErrorCode::VerificationFailed:
    case ErrorCode::FactorizationMismatch:
    case ErrorCode::NotAUnit:
    case ErrorCode::Inconsistent:
      return hypothesis ? 3 : 0;
    default:
      return 2;
  }
}

}  // namespace nplab
