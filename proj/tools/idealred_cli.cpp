// Command-line front end: reduce, extract-canonical, verify, isolate-stats.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "idealred/bidet.hpp"
#include "idealred/errors.hpp"
#include "idealred/linalg.hpp"
#include "idealred/reduce.hpp"
#include "idealred/serialize.hpp"

using namespace idealred;

namespace {

constexpr int kExitIsolation = 2;
constexpr int kExitRejected = 3;

struct PipelineFlags {
  std::string f_path;
  unsigned n = 0, m = 0, r = 0, d = 0;
  u64 prime = 0;
  u64 seed = 1;
  double eps = 0.5;
  unsigned retries = 16;
  unsigned probes = 3;
  unsigned isolation_constant = 2;
  u64 point_budget = PipelineParams{}.point_budget;
  u64 oracle_budget = PipelineParams{}.oracle_budget;
  bool small_char = false;
  std::string out, report;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& o, bool pfaff) {
  app->add_option("--f", o.f_path, "oracle polynomial (JSON); default is the leading full minor/Pfaffian");
  app->add_option("--n", o.n, pfaff ? "half the ambient size (ambient is 2n x 2n)" : "rows of X")->required();
  if (!pfaff) app->add_option("--m", o.m, "columns of X (default n)");
  app->add_option("--r", o.r, pfaff ? "half the Pfaffian size" : "minor size")->required();
  app->add_option("--d", o.d, "degree bound of f (default: total degree of f)");
  app->add_option("--prime", o.prime, "field characteristic (default 2^31-1 or the prime stored in --f)");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--epsilon", o.eps, "isolation failure budget per attempt")->check(CLI::Range(0.0, 1.0));
  app->add_option("--retries", o.retries, "retry cap");
  app->add_option("--probes", o.probes, "probe points per verification");
  app->add_option("--isolation-constant", o.isolation_constant, "K = constant * d");
  app->add_option("--point-budget", o.point_budget, "maximum interpolation points per extraction");
  app->add_option("--oracle-budget", o.oracle_budget, "maximum oracle gates in a final circuit");
  app->add_flag("--small-char", o.small_char, "accept p <= d (char-p branch)");
  app->add_option("--out", o.out, "circuit JSON output path");
  app->add_option("--report", o.report, "report JSON output path");
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return Json::parse(in);
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(1) << "\n";
}

struct Setup {
  PrimeField field;
  PipelineParams params;
  OracleSpec oracle;
};

Setup make_setup(const PipelineFlags& o, bool pfaff) {
  std::optional<SparsePolynomial> f;
  if (!o.f_path.empty()) {
    Json fj = read_json(o.f_path);
    if (o.prime && !fj.contains("prime")) fj["prime"] = o.prime;
    f = polynomial_from_json(fj);
  }
  u64 p = o.prime ? o.prime : (f ? f->field().p() : PrimeField::kDefaultPrime);
  if (f && f->field().p() != p)
    throw ConfigurationError("--prime " + std::to_string(p) + " differs from the prime of --f");
  PrimeField field(p);
  unsigned d = o.d ? o.d : (f ? f->total_degree().value() : o.r);
  PipelineParams params = pfaff ? PipelineParams::pfaff(o.n, o.r, d) : PipelineParams::det(o.n, o.m ? o.m : o.n, o.r, d);
  params.eps = o.eps;
  params.seed = o.seed;
  params.retry_cap = o.retries;
  params.probes = o.probes;
  params.isolation_constant = o.isolation_constant;
  params.point_budget = o.point_budget;
  params.oracle_budget = o.oracle_budget;
  params.allow_small_characteristic = o.small_char;
  params.symbolic_f = f;
  OracleSpec oracle = f ? OracleSpec::from_polynomial(*f, params.oracle_inputs())
                        : (pfaff ? leading_pfaffian_oracle(field, params.n, params.r)
                                 : leading_minor_oracle(field, params.n, params.m, params.r));
  return {field, params, oracle};
}

Json circuit_document(const OracleCircuit& c, const PipelineParams& params) {
  Json j = circuit_to_json(c);
  Json names = Json::array();
  for (auto v : params.oracle_inputs()) names.push_back(v.name());
  j["oracle_inputs"] = names;
  return j;
}

void emit(const CircuitResult& res, const PipelineFlags& o) {
  if (!o.out.empty()) write_json(o.out, circuit_document(res.circuit, res.report.params));
  Json rep = report_to_json(res.report);
  if (!o.report.empty()) write_json(o.report, rep);
  Json summary = {{"metrics", rep["metrics"]},
                  {"attempts", rep["attempt_count"]},
                  {"shape", rep["shape"]},
                  {"verification", rep["verification"]}};
  if (rep.contains("target")) summary["target"] = rep["target"];
  std::cout << summary.dump(1) << "\n";
}

// ---- verify ----

using Point = std::unordered_map<VariableId, u64>;

FpMatrix u_matrix(const PrimeField& f, std::mt19937_64& rng, unsigned t, bool skew, Point& pt) {
  FpMatrix y(t, t);
  for (unsigned i = 0; i < t; ++i)
    for (unsigned j = skew ? i + 1 : 0; j < t; ++j) {
      u64 v = rng() % f.p();
      y(i, j) = v;
      if (skew) y(j, i) = f.neg(v);
      pt[VariableId::u(i + 1, j + 1)] = v;
    }
  return y;
}

struct Target {
  std::function<u64(std::mt19937_64&, Point&)> sample;  // fills the point, returns the target value
  bool up_to_scalar = false;
};

std::vector<unsigned> parse_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<unsigned>(std::stoul(item)));
  return out;
}

Target parse_target(const std::string& spec, const PrimeField& f, unsigned n, unsigned m) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "det") {
    unsigned t = std::stoul(arg);
    return {[f, t](std::mt19937_64& rng, Point& pt) { return det(f, u_matrix(f, rng, t, false, pt)); }};
  }
  if (kind == "pfaff") {
    unsigned t = std::stoul(arg);
    return {[f, t](std::mt19937_64& rng, Point& pt) { return pfaff(f, u_matrix(f, rng, t, true, pt)); }};
  }
  if (kind == "imm") {
    auto wd = parse_list(arg);
    if (wd.size() != 2) throw InvalidArgument("imm target is imm:W,D");
    unsigned w = wd[0], len = wd[1];
    return {[f, w, len](std::mt19937_64& rng, Point& pt) {
      FpMatrix acc = FpMatrix::identity(w);
      for (unsigned k = 1; k <= len; ++k) {
        FpMatrix y(w, w);
        for (unsigned i = 0; i < w; ++i)
          for (unsigned j = 0; j < w; ++j) pt[VariableId::u(k, i + 1, j + 1)] = y(i, j) = rng() % f.p();
        acc = mul(f, acc, y);
      }
      return acc(0, 0);
    }};
  }
  if (kind == "abp") {
    auto abp = std::make_shared<ABP>(abp_from_json(read_json(arg)));
    return {[f, abp](std::mt19937_64& rng, Point& pt) {
      for (auto v : abp->variables()) pt[v] = rng() % f.p();
      return abp->eval(pt);
    }};
  }
  if (kind == "canonical" || kind == "canonical-pfaff") {
    Partition shape(parse_list(arg));
    bool det_mode = kind == "canonical";
    return {[f, shape, det_mode, n, m](std::mt19937_64& rng, Point& pt) {
      FpMatrix x(n, m);
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = det_mode ? 0 : i + 1; j < m; ++j) {
          u64 v = rng() % f.p();
          x(i, j) = v;
          if (!det_mode) x(j, i) = f.neg(v);
          pt[VariableId::x(i + 1, j + 1)] = v;
        }
      if (det_mode)
        return eval_bideterminant(f, BideterminantRef(Bitableau(canonical(shape, n), canonical(shape, m)), n, m), x);
      return eval_bipfaffian(f, BipfaffianRef(canonical(shape, n), n), x);
    }, true};
  }
  throw InvalidArgument("unknown target '" + spec + "'");
}

int run_verify(const std::string& circuit_path, const std::string& f_path, const std::string& target_spec,
               unsigned points, u64 seed, u64 power, unsigned n, unsigned m, bool pfaff) {
  Json cj = read_json(circuit_path);
  OracleCircuit c = circuit_from_json(cj);
  const PrimeField& field = c.field();
  SparsePolynomial f = polynomial_from_json(read_json(f_path));
  if (f.field().p() != field.p()) throw ConfigurationError("circuit and --f use different primes");
  std::vector<VariableId> inputs;
  if (cj.contains("oracle_inputs")) {
    for (const auto& s : cj.at("oracle_inputs")) inputs.push_back(VariableId::parse(s.get<std::string>()));
  } else {
    if (n == 0) throw InvalidArgument("circuit JSON lacks oracle_inputs; pass --n (and --m or --pfaff)");
    inputs = (pfaff ? PipelineParams::pfaff(n, 1, 1) : PipelineParams::det(n, m ? m : n, 1, 1)).oracle_inputs();
  }
  OracleSpec spec = OracleSpec::from_polynomial(f, inputs);
  // Ambient sizes of canonical targets come from the oracle inputs.
  unsigned rows = 0, cols = 0;
  for (auto v : inputs) {
    rows = std::max(rows, v.i());
    cols = std::max(cols, v.j());
  }
  Target target = parse_target(target_spec, field, rows, cols);
  std::mt19937_64 rng(seed);
  unsigned agree = 0;
  std::optional<u64> ratio;
  for (unsigned k = 0; k < points; ++k) {
    Point pt;
    u64 want = field.pow(target.sample(rng, pt), power);
    u64 got = c.eval(&spec, pt);
    if (target.up_to_scalar) {
      if (!ratio && want != 0) ratio = field.mul(got, field.inv(want));
      agree += ratio ? field.mul(*ratio, want) == got : got == 0;
    } else {
      agree += got == want;
    }
  }
  Json out = {{"points", points}, {"agreements", agree}, {"metrics", metrics_to_json(c.metrics())}};
  if (ratio) out["scalar"] = residue_to_string(*ratio);
  std::cout << out.dump(1) << "\n";
  return agree == points && (!target.up_to_scalar || (ratio && *ratio != 0)) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle-circuit reductions from determinantal and Pfaffian ideal members"};
  app.require_subcommand(1);

  auto* reduce = app.add_subcommand("reduce", "final depth-three circuit for a target");
  reduce->require_subcommand(1);
  PipelineFlags det_o, imm_o, pf_o, abp_o;
  unsigned det_t = 1, imm_w = 1, imm_d = 1, pf_t = 2;
  std::string abp_path;
  bool abp_pfaff = false;
  auto* r_det = reduce->add_subcommand("det", "target det_t");
  add_pipeline_flags(r_det, det_o, false);
  r_det->add_option("--t", det_t, "target size")->required();
  auto* r_imm = reduce->add_subcommand("imm", "target IMM_{W,D}");
  add_pipeline_flags(r_imm, imm_o, false);
  r_imm->add_option("--W", imm_w, "matrix width")->required();
  r_imm->add_option("--D", imm_d, "number of factors")->required();
  auto* r_pf = reduce->add_subcommand("pfaff", "target pfaff_t");
  add_pipeline_flags(r_pf, pf_o, true);
  r_pf->add_option("--t", pf_t, "target size (even, at most 6)")->required();
  auto* r_abp = reduce->add_subcommand("abp", "target given as an ABP JSON file");
  add_pipeline_flags(r_abp, abp_o, false);
  r_abp->add_option("--abp", abp_path, "ABP JSON")->required();
  r_abp->add_flag("--pfaff", abp_pfaff, "Pfaffian pipeline (--n is then half the ambient size)");

  auto* extract = app.add_subcommand("extract-canonical", "extraction circuit for c * canonical bideterminant");
  PipelineFlags ex_o;
  bool ex_pfaff = false;
  add_pipeline_flags(extract, ex_o, false);
  extract->add_flag("--pfaff", ex_pfaff, "Pfaffian mode (--n is half the ambient size)");

  auto* verify = app.add_subcommand("verify", "compare a circuit with a target at random points");
  std::string v_circuit, v_f, v_target;
  unsigned v_points = 100, v_n = 0, v_m = 0;
  u64 v_seed = 7, v_power = 1;
  bool v_pfaff = false;
  verify->add_option("--circuit", v_circuit, "circuit JSON")->required();
  verify->add_option("--f", v_f, "oracle polynomial JSON")->required();
  verify->add_option("--target", v_target,
                     "det:t | pfaff:t | imm:W,D | abp:file.json | canonical:s1,s2,.. | canonical-pfaff:s1,..")
      ->required();
  verify->add_option("--points", v_points, "random points");
  verify->add_option("--seed", v_seed, "point seed");
  verify->add_option("--power", v_power, "compare against target^power");
  verify->add_option("--n", v_n, "oracle rows (only for circuits without oracle_inputs)");
  verify->add_option("--m", v_m, "oracle columns");
  verify->add_flag("--pfaff", v_pfaff, "Pfaffian oracle layout");

  auto* stats = app.add_subcommand("isolate-stats", "empirical isolation failure rate");
  std::string s_collection = "progression", s_file;
  unsigned s_size = 6, s_K = 0;
  u64 s_trials = 1000, s_seed = 1;
  double s_eps = 0.5;
  stats->add_option("--collection", s_collection, "progression | weight2 | simplex");
  stats->add_option("--file", s_file, "JSON list of exponent vectors (overrides --collection)");
  stats->add_option("--size", s_size, "collection size parameter");
  stats->add_option("--trials", s_trials, "trials");
  stats->add_option("--epsilon", s_eps, "failure budget")->check(CLI::Range(0.0, 1.0));
  stats->add_option("--seed", s_seed, "seed");
  stats->add_option("--K", s_K, "coefficient bound (default: largest entry)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*r_det) {
      auto s = make_setup(det_o, false);
      emit(det_oracle_circuit(s.params, s.field, s.oracle, det_t), det_o);
    } else if (*r_imm) {
      auto s = make_setup(imm_o, false);
      emit(imm_oracle_circuit(s.params, s.field, s.oracle, imm_w, imm_d), imm_o);
    } else if (*r_pf) {
      auto s = make_setup(pf_o, true);
      emit(pfaff_oracle_circuit(s.params, s.field, s.oracle, pf_t), pf_o);
    } else if (*r_abp) {
      auto s = make_setup(abp_o, abp_pfaff);
      ABP target = abp_from_json(read_json(abp_path));
      emit(abp_pfaff ? abp_pfaff_oracle_circuit(s.params, s.field, s.oracle, target)
                     : abp_oracle_circuit(s.params, s.field, s.oracle, target),
           abp_o);
    } else if (*extract) {
      auto s = make_setup(ex_o, ex_pfaff);
      emit(ex_pfaff ? extract_canonical_pfaff(s.params, s.field, s.oracle)
                    : extract_canonical(s.params, s.field, s.oracle),
           ex_o);
    } else if (*verify) {
      return run_verify(v_circuit, v_f, v_target, v_points, v_seed, v_power, v_n, v_m, v_pfaff);
    } else if (*stats) {
      auto col = s_file.empty() ? adversarial_collection(s_collection, s_size)
                                : read_json(s_file).get<std::vector<std::vector<unsigned>>>();
      std::cout << isolation_stats_to_json(isolation_stats(col, s_trials, s_eps, s_seed, s_K)).dump(1) << "\n";
    }
  } catch (const IsolationFailure& e) {
    std::cerr << "isolation failure: " << e.what() << "\n";
    return kExitIsolation;
  } catch (const FieldTooSmall& e) {
    std::cerr << "field too small: " << e.what() << "\n";
    return kExitRejected;
  } catch (const ParameterRejected& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitRejected;
  } catch (const CapExceeded& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
