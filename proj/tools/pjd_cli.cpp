// Command-line front end: config ingestion, seeding, dispatch to the library
// modules, atomic artifact emission.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pjd/analytics.hpp"
#include "pjd/branching.hpp"
#include "pjd/csbp.hpp"
#include "pjd/drift.hpp"
#include "pjd/inhom.hpp"
#include "pjd/numeric.hpp"
#include "pjd/pjump.hpp"
#include "pjd/regvar.hpp"
#include "pjd/schedule.hpp"
#include "pjd/version.hpp"

using nlohmann::json;
using namespace pjd;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 12345;
  std::string config_path;
  std::string output_path;
  std::string format = "json";
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PJD_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw std::invalid_argument("PJD_SEED is not a valid 64-bit integer");
    }
  }
  return 12345;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  return cfg;
}

// CLI flags > config file > compiled defaults. The variable already holds
// the CLI value (or the default); the config only fills untouched options.
template <typename T>
void fill_from_config(const CLI::App* cmd, const json& cfg, const json& cfg_cmd,
                      const std::string& flag, const std::string& key, T& var) {
  if (cmd->count(flag) > 0) return;
  const json* src = nullptr;
  if (cfg_cmd.contains(key)) src = &cfg_cmd.at(key);
  else if (cfg.contains(key)) src = &cfg.at(key);
  if (!src) return;
  try {
    var = src->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config key '" + key + "' has the wrong type");
  }
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

// Emits the envelope {version, command, config, result}; the config block is
// the fully resolved parameter set so a run record is self-describing.
int emit(const GlobalOpts& g, const std::string& command, const json& config,
         const json& result, const std::string& summary,
         const std::string& csv = "") {
  json doc;
  doc["version"] = PJD_VERSION;
  doc["command"] = command;
  doc["config"] = config;
  doc["result"] = result;
  std::string body;
  if (g.format == "csv" && !csv.empty()) {
    body = csv;
  } else if (g.format == "table") {
    std::ostringstream os;
    for (auto it = result.begin(); it != result.end(); ++it)
      os << it.key() << "\t" << it.value().dump() << "\n";
    body = os.str();
  } else {
    body = doc.dump(2) + "\n";
  }
  std::cout << summary << "\n";
  if (!g.output_path.empty())
    atomic_write(g.output_path, body);
  else
    std::cout << body;
  return 0;
}

OffspringLaw law_from(double mu, double q0, double q2, bool mu_given) {
  if (!mu_given) return OffspringLaw::binary(q0, q2);
  if (mu < 0) throw std::invalid_argument("mu must be non-negative");
  if (mu <= 2.0) return OffspringLaw::binary(1.0 - mu / 2.0, mu / 2.0);
  if (mu <= 3.0) return OffspringLaw({1.0 - mu / 3.0, 0.0, 0.0, mu / 3.0});
  throw std::invalid_argument("mu > 3 needs explicit offspring probabilities");
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty time list");
  return out;
}

std::string read_schedule_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;  // inline JSON
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("schedule file not found: " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branching processes with binomial disasters and their multiplicative-jump duals"};
  app.require_subcommand(1);

  GlobalOpts g;
  try {
    g.seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  app.add_option("--seed", g.seed, "RNG seed (default from PJD_SEED, else 12345)");
  app.add_option("--config", g.config_path, "JSON config file; CLI flags take precedence");
  app.add_option("--output", g.output_path, "output artifact path (written atomically)");
  app.add_option("--format", g.format, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  // phase
  auto* phase = app.add_subcommand("phase", "classify the homogeneous phase and closed-form rates");
  double ph_lambda = 1, ph_mu = 1, ph_q0 = 0.5, ph_q2 = 0.5, ph_kappa = 1, ph_p = 0.5;
  std::uint64_t ph_z0 = 1;
  phase->add_option("--lambda", ph_lambda, "per-capita branching rate");
  phase->add_option("--mu", ph_mu, "offspring mean (binary law synthesized)");
  phase->add_option("--q0", ph_q0, "P(0 offspring)");
  phase->add_option("--q2", ph_q2, "P(2 offspring)");
  phase->add_option("--kappa", ph_kappa, "disaster rate");
  phase->add_option("--p", ph_p, "per-individual disaster survival probability");
  phase->add_option("--z0", ph_z0, "initial population");

  // rates
  auto* rates = app.add_subcommand("rates", "closed-form birth-death decay rate and survival");
  double rt_b = 1, rt_d = 0.5, rt_kappa = 1, rt_p = 0.5;
  std::uint64_t rt_k = 1;
  rates->add_option("--b", rt_b, "per-capita birth rate");
  rates->add_option("--d", rt_d, "per-capita death rate");
  rates->add_option("--kappa", rt_kappa, "disaster rate");
  rates->add_option("--p", rt_p, "disaster survival probability");
  rates->add_option("--k", rt_k, "initial population for the survival column");

  // simulate-bp
  auto* sbp = app.add_subcommand("simulate-bp", "Monte Carlo of the disaster-hit branching process");
  double bp_lambda = 1, bp_q0 = 0.5, bp_q2 = 0.5, bp_kappa = 1, bp_p = 0.5, bp_tend = 10;
  std::uint64_t bp_z0 = 1, bp_replicas = 10000, bp_cap = 10000000;
  std::string bp_times = "";
  sbp->add_option("--lambda", bp_lambda, "per-capita branching rate");
  sbp->add_option("--q0", bp_q0, "P(0 offspring)");
  sbp->add_option("--q2", bp_q2, "P(2 offspring)");
  sbp->add_option("--kappa", bp_kappa, "disaster rate");
  sbp->add_option("--p", bp_p, "disaster survival probability");
  sbp->add_option("--z0", bp_z0, "initial population");
  sbp->add_option("--t-end", bp_tend, "horizon");
  sbp->add_option("--times", bp_times, "comma-separated checkpoint times (default: t-end)");
  sbp->add_option("--replicas", bp_replicas, "Monte Carlo replicas");
  sbp->add_option("--pop-cap", bp_cap, "explosion guard");

  // simulate-pjump
  auto* spj = app.add_subcommand("simulate-pjump", "moments of the logistic-drift multiplicative-jump process");
  double pj_delta = 1, pj_theta = 1, pj_kappa = 1, pj_p = 0.5, pj_x0 = 0.5, pj_tend = 10;
  int pj_k = 1;
  std::uint64_t pj_replicas = 10000;
  std::string pj_times = "";
  spj->add_option("--delta", pj_delta, "linear drift coefficient");
  spj->add_option("--theta", pj_theta, "quadratic drift coefficient");
  spj->add_option("--kappa", pj_kappa, "jump rate");
  spj->add_option("--p", pj_p, "multiplicative jump factor");
  spj->add_option("--x0", pj_x0, "initial state");
  spj->add_option("--t-end", pj_tend, "horizon");
  spj->add_option("--times", pj_times, "comma-separated checkpoint times (default: t-end)");
  spj->add_option("--k", pj_k, "moment order");
  spj->add_option("--replicas", pj_replicas, "Monte Carlo replicas");

  // duality-check
  auto* dual = app.add_subcommand("duality-check", "two-sided Monte Carlo check of the pgf duality");
  double du_lambda = 1, du_q0 = 0.5, du_q2 = 0.5, du_kappa = 1, du_p = 0.5, du_x = 0.5, du_t = 2;
  std::uint64_t du_z0 = 1, du_replicas = 100000;
  dual->add_option("--lambda", du_lambda, "per-capita branching rate");
  dual->add_option("--q0", du_q0, "P(0 offspring)");
  dual->add_option("--q2", du_q2, "P(2 offspring)");
  dual->add_option("--kappa", du_kappa, "disaster rate");
  dual->add_option("--p", du_p, "disaster survival probability");
  dual->add_option("--z0", du_z0, "initial population");
  dual->add_option("--x", du_x, "dual starting point in [0,1]");
  dual->add_option("--t", du_t, "evaluation time");
  dual->add_option("--replicas", du_replicas, "replicas per side");

  // survival
  auto* surv = app.add_subcommand("survival", "survival probability, direct or by splitting");
  double sv_lambda = 1, sv_q0 = 0.5, sv_q2 = 0.5, sv_kappa = 1, sv_p = 0.5, sv_t = 10;
  std::uint64_t sv_z0 = 1, sv_replicas = 10000, sv_cap = 10000000;
  bool sv_split = false;
  std::string sv_checkpoints = "";
  surv->add_option("--lambda", sv_lambda, "per-capita branching rate");
  surv->add_option("--q0", sv_q0, "P(0 offspring)");
  surv->add_option("--q2", sv_q2, "P(2 offspring)");
  surv->add_option("--kappa", sv_kappa, "disaster rate");
  surv->add_option("--p", sv_p, "disaster survival probability");
  surv->add_option("--z0", sv_z0, "initial population");
  surv->add_option("--t", sv_t, "horizon");
  surv->add_option("--replicas", sv_replicas, "Monte Carlo replicas / particles");
  surv->add_option("--pop-cap", sv_cap, "explosion guard");
  surv->add_flag("--splitting", sv_split, "fixed-effort splitting for deep tails");
  surv->add_option("--checkpoints", sv_checkpoints, "splitting checkpoints (comma-separated)");

  // inhom
  auto* inh = app.add_subcommand("inhom", "inhomogeneous survival via the conditioned dual");
  std::string in_sched = "";
  double in_t = 10;
  std::uint64_t in_k = 1, in_replicas = 2000;
  inh->add_option("--schedule", in_sched, "rate schedule: JSON file or inline JSON")->required();
  inh->add_option("--t", in_t, "horizon");
  inh->add_option("--k", in_k, "initial population");
  inh->add_option("--replicas", in_replicas, "disaster-path samples");

  // csbp
  auto* cs = app.add_subcommand("csbp", "continuous-state extinction functionals via the dual");
  double cs_b = 1, cs_c = 1, cs_kappa = 1, cs_p = 0.5, cs_z = 1, cs_t = 10, cs_xmax = 20;
  std::uint64_t cs_replicas = 10000;
  std::string cs_atoms = "";
  cs->add_option("--b", cs_b, "linear mechanism coefficient");
  cs->add_option("--c", cs_c, "quadratic mechanism coefficient");
  cs->add_option("--atoms", cs_atoms, "jump measure atoms y:mass[,y:mass...]");
  cs->add_option("--kappa", cs_kappa, "disaster rate");
  cs->add_option("--p", cs_p, "disaster survival factor");
  cs->add_option("--z", cs_z, "initial mass");
  cs->add_option("--t", cs_t, "horizon");
  cs->add_option("--x-max", cs_xmax, "dual start standing in for infinity");
  cs->add_option("--replicas", cs_replicas, "Monte Carlo replicas");

  // ldp-check
  auto* ldp = app.add_subcommand("ldp-check", "empirical Poisson large-deviation rate");
  double ld_x = 0.5, ld_t = 10;
  std::uint64_t ld_replicas = 1000000;
  std::string ld_event = "lower";
  ldp->add_option("--x", ld_x, "slope of the rare event");
  ldp->add_option("--t", ld_t, "horizon");
  ldp->add_option("--replicas", ld_replicas, "Monte Carlo replicas");
  ldp->add_option("--event", ld_event, "upper | lower | pathwise")
      ->check(CLI::IsMember({"upper", "lower", "pathwise"}));

  // regvar-check
  auto* rv = app.add_subcommand("regvar-check", "random sums over disaster times vs their compensator");
  double rv_beta = 0, rv_scale = 1, rv_tmax = 10000, rv_kappa = 1;
  std::uint64_t rv_replicas = 100;
  std::string rv_family = "const";
  rv->add_option("--beta", rv_beta, "regular-variation exponent of f(s) = scale*s^beta");
  rv->add_option("--scale", rv_scale, "scale of f");
  rv->add_option("--kappa", rv_kappa, "disaster rate level");
  rv->add_option("--kappa-family", rv_family, "const | linear")
      ->check(CLI::IsMember({"const", "linear"}));
  rv->add_option("--t-max", rv_tmax, "end of the geometric time grid");
  rv->add_option("--replicas", rv_replicas, "Monte Carlo replicas");

  for (CLI::App* sub : {phase, rates, sbp, spj, dual, surv, inh, cs, ldp, rv})
    sub->fallthrough();  // global flags may follow the subcommand

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    json cfg = load_config(g.config_path);
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    json cfg_cmd = cfg.contains(name) && cfg.at(name).is_object() ? cfg.at(name) : json::object();
    fill_from_config(&app, cfg, cfg_cmd, "--seed", "seed", g.seed);
    fill_from_config(&app, cfg, cfg_cmd, "--format", "format", g.format);
    fill_from_config(&app, cfg, cfg_cmd, "--output", "output", g.output_path);

    auto fill = [&](const std::string& flag, const std::string& key, auto& var) {
      fill_from_config(cmd, cfg, cfg_cmd, flag, key, var);
    };

    if (cmd == phase) {
      fill("--lambda", "lambda", ph_lambda);
      fill("--mu", "mu", ph_mu);
      fill("--q0", "q0", ph_q0);
      fill("--q2", "q2", ph_q2);
      fill("--kappa", "kappa", ph_kappa);
      fill("--p", "p", ph_p);
      fill("--z0", "z0", ph_z0);
      bool mu_given = phase->count("--mu") > 0 || cfg_cmd.contains("mu") || cfg.contains("mu");
      auto law = law_from(ph_mu, ph_q0, ph_q2, mu_given);
      auto rep = classify_homogeneous(ph_lambda, law, ph_kappa, ph_p);
      json config = {{"seed", g.seed}, {"lambda", ph_lambda}, {"kappa", ph_kappa},
                     {"p", ph_p}, {"z0", ph_z0}, {"mu", law.mean()},
                     {"q0", law.probs()[0]}, {"q2", law.probs().size() > 2 ? law.probs()[2] : 0.0}};
      json result = {{"regime", regime_name(rep.regime)}, {"nu", rep.nu},
                     {"formula_id", rep.formula_id}};
      if (rep.decay_rate) result["decay_rate"] = *rep.decay_rate;
      if (rep.survival_prob) result["survival_prob"] = *rep.survival_prob;
      std::ostringstream sum;
      sum << "phase: regime=" << regime_name(rep.regime) << " nu=" << rep.nu;
      if (rep.decay_rate) sum << " rate=" << *rep.decay_rate;
      if (rep.survival_prob) sum << " survival=" << *rep.survival_prob;
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == rates) {
      fill("--b", "b", rt_b);
      fill("--d", "d", rt_d);
      fill("--kappa", "kappa", rt_kappa);
      fill("--p", "p", rt_p);
      fill("--k", "k", rt_k);
      json config = {{"seed", g.seed}, {"b", rt_b}, {"d", rt_d},
                     {"kappa", rt_kappa}, {"p", rt_p}, {"k", rt_k}};
      json result;
      double surv_p = bd_survival_probability(rt_k, rt_b, rt_d, rt_kappa, rt_p);
      result["survival_prob"] = surv_p;
      bool super = rt_b - rt_d > rt_kappa * std::log(1.0 / rt_p);
      std::ostringstream sum;
      if (super) {
        result["regime"] = "supercritical";
        sum << "rates: supercritical survival=" << surv_p;
      } else {
        double rate = bd_decay_rate(rt_b, rt_d, rt_kappa, rt_p);
        result["regime"] = "extinction";
        result["decay_rate"] = rate;
        sum << "rates: extinction decay_rate=" << rate;
      }
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == sbp) {
      fill("--lambda", "lambda", bp_lambda);
      fill("--q0", "q0", bp_q0);
      fill("--q2", "q2", bp_q2);
      fill("--kappa", "kappa", bp_kappa);
      fill("--p", "p", bp_p);
      fill("--z0", "z0", bp_z0);
      fill("--t-end", "t_end", bp_tend);
      fill("--times", "times", bp_times);
      fill("--replicas", "replicas", bp_replicas);
      fill("--pop-cap", "pop_cap", bp_cap);
      if (bp_replicas < 1) throw std::invalid_argument("replicas must be >= 1");
      BranchingConfig c;
      c.lambda = bp_lambda;
      c.law = OffspringLaw::binary(bp_q0, bp_q2);
      c.kappa = bp_kappa;
      c.p = bp_p;
      c.z0 = bp_z0;
      c.t_end = bp_tend;
      c.pop_cap = bp_cap;
      validate_branching(c);
      std::vector<double> times = bp_times.empty() ? std::vector<double>{bp_tend}
                                                   : parse_times(bp_times);
      std::sort(times.begin(), times.end());
      std::vector<Accum> mean_acc(times.size());
      std::vector<Accum> surv_acc(times.size());
      for (std::uint64_t r = 0; r < bp_replicas; ++r) {
        RngStream rng(g.seed, r);
        auto zs = branching_state_at(c, times, rng);
        for (std::size_t i = 0; i < times.size(); ++i) {
          mean_acc[i].add(static_cast<double>(zs[i]));
          surv_acc[i].add(zs[i] > 0 ? 1.0 : 0.0);
        }
      }
      json config = {{"seed", g.seed}, {"lambda", bp_lambda}, {"q0", bp_q0},
                     {"q2", bp_q2}, {"kappa", bp_kappa}, {"p", bp_p},
                     {"z0", bp_z0}, {"t_end", bp_tend}, {"replicas", bp_replicas},
                     {"pop_cap", bp_cap}};
      json rows = json::array();
      std::ostringstream csv;
      csv << "t,mean,mean_se,survival,survival_se\n";
      for (std::size_t i = 0; i < times.size(); ++i) {
        rows.push_back({{"t", times[i]}, {"mean", mean_acc[i].mean},
                        {"mean_se", mean_acc[i].std_err()},
                        {"survival", surv_acc[i].mean},
                        {"survival_se", surv_acc[i].std_err()}});
        csv << times[i] << "," << mean_acc[i].mean << "," << mean_acc[i].std_err()
            << "," << surv_acc[i].mean << "," << surv_acc[i].std_err() << "\n";
      }
      json result = {{"rows", rows}};
      std::ostringstream sum;
      sum << "simulate-bp: t=" << times.back() << " mean=" << mean_acc.back().mean
          << " survival=" << surv_acc.back().mean;
      return emit(g, name, config, result, sum.str(), csv.str());
    }

    if (cmd == spj) {
      fill("--delta", "delta", pj_delta);
      fill("--theta", "theta", pj_theta);
      fill("--kappa", "kappa", pj_kappa);
      fill("--p", "p", pj_p);
      fill("--x0", "x0", pj_x0);
      fill("--t-end", "t_end", pj_tend);
      fill("--times", "times", pj_times);
      fill("--k", "k", pj_k);
      fill("--replicas", "replicas", pj_replicas);
      PJumpConfig c;
      c.drift = logistic_drift(pj_delta, pj_theta);
      c.p = pj_p;
      c.kappa = pj_kappa;
      c.x0 = pj_x0;
      c.t_end = pj_tend;
      validate_pjump(c);
      std::vector<double> times = pj_times.empty() ? std::vector<double>{pj_tend}
                                                   : parse_times(pj_times);
      auto ms = estimate_moment(c, pj_k, times, pj_replicas, g.seed);
      json config = {{"seed", g.seed}, {"delta", pj_delta}, {"theta", pj_theta},
                     {"kappa", pj_kappa}, {"p", pj_p}, {"x0", pj_x0},
                     {"t_end", pj_tend}, {"k", pj_k}, {"replicas", pj_replicas}};
      json rows = json::array();
      std::ostringstream csv;
      csv << "t,k,value,std_err\n";
      for (const auto& m : ms) {
        rows.push_back({{"t", m.t}, {"k", m.k}, {"value", m.value},
                        {"std_err", m.std_err}});
        csv << m.t << "," << m.k << "," << m.value << "," << m.std_err << "\n";
      }
      json result = {{"rows", rows}};
      std::ostringstream sum;
      sum << "simulate-pjump: t=" << ms.back().t << " E[X^" << pj_k
          << "]=" << ms.back().value << " se=" << ms.back().std_err;
      return emit(g, name, config, result, sum.str(), csv.str());
    }

    if (cmd == dual) {
      fill("--lambda", "lambda", du_lambda);
      fill("--q0", "q0", du_q0);
      fill("--q2", "q2", du_q2);
      fill("--kappa", "kappa", du_kappa);
      fill("--p", "p", du_p);
      fill("--z0", "z0", du_z0);
      fill("--x", "x", du_x);
      fill("--t", "t", du_t);
      fill("--replicas", "replicas", du_replicas);
      if (du_x < 0 || du_x > 1) throw std::invalid_argument("x must lie in [0,1]");
      BranchingConfig c;
      c.lambda = du_lambda;
      c.law = OffspringLaw::binary(du_q0, du_q2);
      c.kappa = du_kappa;
      c.p = du_p;
      c.z0 = du_z0;
      c.t_end = du_t;
      validate_branching(c);
      auto rep = duality_check(c, du_x, du_t, du_replicas, g.seed);
      json config = {{"seed", g.seed}, {"lambda", du_lambda}, {"q0", du_q0},
                     {"q2", du_q2}, {"kappa", du_kappa}, {"p", du_p},
                     {"z0", du_z0}, {"x", du_x}, {"t", du_t},
                     {"replicas", du_replicas}};
      json result = {{"x", rep.x}, {"t", rep.t}, {"lhs", rep.lhs},
                     {"lhs_se", rep.lhs_se}, {"rhs", rep.rhs},
                     {"rhs_se", rep.rhs_se}, {"z_score", rep.z_score}};
      std::ostringstream sum;
      sum << "duality-check: lhs=" << rep.lhs << " rhs=" << rep.rhs
          << " z=" << rep.z_score;
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == surv) {
      fill("--lambda", "lambda", sv_lambda);
      fill("--q0", "q0", sv_q0);
      fill("--q2", "q2", sv_q2);
      fill("--kappa", "kappa", sv_kappa);
      fill("--p", "p", sv_p);
      fill("--z0", "z0", sv_z0);
      fill("--t", "t", sv_t);
      fill("--replicas", "replicas", sv_replicas);
      fill("--pop-cap", "pop_cap", sv_cap);
      fill("--checkpoints", "checkpoints", sv_checkpoints);
      BranchingConfig c;
      c.lambda = sv_lambda;
      c.law = OffspringLaw::binary(sv_q0, sv_q2);
      c.kappa = sv_kappa;
      c.p = sv_p;
      c.z0 = sv_z0;
      c.t_end = sv_t;
      c.pop_cap = sv_cap;
      validate_branching(c);
      json config = {{"seed", g.seed}, {"lambda", sv_lambda}, {"q0", sv_q0},
                     {"q2", sv_q2}, {"kappa", sv_kappa}, {"p", sv_p},
                     {"z0", sv_z0}, {"t", sv_t}, {"replicas", sv_replicas},
                     {"pop_cap", sv_cap}, {"splitting", sv_split}};
      if (sv_split) {
        std::vector<double> cps = sv_checkpoints.empty()
                                      ? std::vector<double>{sv_t}
                                      : parse_times(sv_checkpoints);
        auto curve = survival_curve_splitting(c, cps, sv_replicas, g.seed);
        json rows = json::array();
        for (auto& [t, logp] : curve)
          rows.push_back({{"t", t}, {"log_survival", logp}});
        json result = {{"rows", rows}};
        std::ostringstream sum;
        sum << "survival: t=" << curve.back().first
            << " log_survival=" << curve.back().second;
        return emit(g, name, config, result, sum.str());
      }
      auto [prob, se] = survival_probability_mc(c, sv_t, sv_replicas, g.seed);
      json result = {{"survival", prob}, {"std_err", se}};
      std::ostringstream sum;
      sum << "survival: t=" << sv_t << " prob=" << prob << " se=" << se;
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == inh) {
      fill("--schedule", "schedule", in_sched);
      fill("--t", "t", in_t);
      fill("--k", "k", in_k);
      fill("--replicas", "replicas", in_replicas);
      std::string text = read_schedule_arg(in_sched);
      auto sched = RateSchedule::from_json_text(text);
      auto [prob, se] = inhom_survival_mc(sched, in_t, in_k, in_replicas, g.seed);
      auto crit = check_inhom_criterion(sched, [](double t) { return t; }, 0.1);
      json config = {{"seed", g.seed}, {"schedule", json::parse(text)},
                     {"t", in_t}, {"k", in_k}, {"replicas", in_replicas}};
      const char* verdict = crit.verdict == CriterionVerdict::survival_possible
                                ? "survival-possible"
                                : crit.verdict == CriterionVerdict::extinction_sure
                                      ? "extinction-sure"
                                      : "inconclusive";
      json result = {{"survival", prob}, {"std_err", se},
                     {"criterion", verdict}, {"iota", crit.iota}};
      std::ostringstream sum;
      sum << "inhom: t=" << in_t << " survival=" << prob << " criterion=" << verdict;
      int rc = emit(g, name, config, result, sum.str());
      if (rc == 0 && crit.verdict == CriterionVerdict::inconclusive) return 3;
      return rc;
    }

    if (cmd == cs) {
      fill("--b", "b", cs_b);
      fill("--c", "c", cs_c);
      fill("--atoms", "atoms", cs_atoms);
      fill("--kappa", "kappa", cs_kappa);
      fill("--p", "p", cs_p);
      fill("--z", "z", cs_z);
      fill("--t", "t", cs_t);
      fill("--x-max", "x_max", cs_xmax);
      fill("--replicas", "replicas", cs_replicas);
      BranchingMechanism m;
      m.b = cs_b;
      m.c = cs_c;
      m.kappa = cs_kappa;
      m.p = cs_p;
      if (!cs_atoms.empty()) {
        std::stringstream ss(cs_atoms);
        std::string item;
        while (std::getline(ss, item, ',')) {
          auto pos = item.find(':');
          if (pos == std::string::npos)
            throw std::invalid_argument("atom must look like y:mass");
          m.atoms.emplace_back(std::stod(item.substr(0, pos)),
                               std::stod(item.substr(pos + 1)));
        }
      }
      validate_mechanism(m);
      auto est = extinction_probability(m, cs_z, cs_t, cs_xmax, cs_replicas, g.seed);
      json config = {{"seed", g.seed}, {"b", cs_b}, {"c", cs_c},
                     {"atoms", cs_atoms}, {"kappa", cs_kappa}, {"p", cs_p},
                     {"z", cs_z}, {"t", cs_t}, {"x_max", cs_xmax},
                     {"replicas", cs_replicas}};
      json result = {{"extinction", est.value}, {"std_err", est.std_err},
                     {"sensitivity", est.sensitivity},
                     {"xi", largest_root(m)}};
      bool super = m.b > m.kappa * std::log(1.0 / m.p);
      if (!super) result["decay_rate"] = csbp_decay_rate(m);
      std::ostringstream sum;
      sum << "csbp: extinction=" << est.value << " se=" << est.std_err
          << " sensitivity=" << est.sensitivity;
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == ldp) {
      fill("--x", "x", ld_x);
      fill("--t", "t", ld_t);
      fill("--replicas", "replicas", ld_replicas);
      fill("--event", "event", ld_event);
      LdpEvent ev = ld_event == "upper" ? LdpEvent::upper
                    : ld_event == "lower" ? LdpEvent::lower
                                          : LdpEvent::pathwise_lower;
      auto est = ldp_empirical(ld_x, ld_t, ld_replicas, ev, g.seed);
      json config = {{"seed", g.seed}, {"x", ld_x}, {"t", ld_t},
                     {"replicas", ld_replicas}, {"event", ld_event}};
      json result = {{"rate", est.rate}, {"std_err", est.std_err},
                     {"frequency", est.frequency}, {"hits", est.hits},
                     {"rate_function", ldp_rate(ld_x)}};
      std::ostringstream sum;
      sum << "ldp-check: empirical=" << est.rate << " limit=" << ldp_rate(ld_x);
      return emit(g, name, config, result, sum.str());
    }

    if (cmd == rv) {
      fill("--beta", "beta", rv_beta);
      fill("--scale", "scale", rv_scale);
      fill("--kappa", "kappa", rv_kappa);
      fill("--kappa-family", "kappa_family", rv_family);
      fill("--t-max", "t_max", rv_tmax);
      fill("--replicas", "replicas", rv_replicas);
      if (rv_scale <= 0) throw std::invalid_argument("scale must be positive");
      if (rv_tmax <= 1) throw std::invalid_argument("t-max must exceed 1");
      double beta = rv_beta, scale = rv_scale;
      RegVarFunction f{[beta, scale](double s) { return scale * std::pow(s, beta); },
                       beta, "scale*s^beta"};
      RateSchedule sched =
          rv_family == "const"
              ? RateSchedule::constant(0.0, 0.0, rv_kappa, 0.5)
              : RateSchedule::callables_with_intensity(
                    [](double) { return 0.0; }, [](double) { return 0.0; },
                    [k = rv_kappa](double s) { return k * s; },
                    [](double) { return 0.5; },
                    [k = rv_kappa](double t) { return 0.5 * k * t * t; },
                    [k = rv_kappa](double u) { return std::sqrt(2.0 * u / k); });
      std::vector<double> grid;
      const int n_pts = 9;
      for (int i = 0; i < n_pts; ++i)
        grid.push_back(std::pow(rv_tmax, static_cast<double>(i + 1) / n_pts));
      auto rep = d_integral_check(f, sched, grid, rv_replicas, g.seed);
      json config = {{"seed", g.seed}, {"beta", rv_beta}, {"scale", rv_scale},
                     {"kappa", rv_kappa}, {"kappa_family", rv_family},
                     {"t_max", rv_tmax}, {"replicas", rv_replicas}};
      json result;
      result["t_max"] = rep.t_grid.back();
      if (rv_beta > -1.0) {
        result["ratio_mean"] = rep.ratio_mean.back();
        result["ratio_sd"] = rep.ratio_sd.back();
        result["expected"] = rep.expected;
        result["mc_mean"] = rep.mc_mean;
        result["mc_se"] = rep.mc_se;
      } else {
        double worst = 0;
        for (double v : rep.tail_increments) worst = std::max(worst, v);
        result["max_tail_increment"] = worst;
      }
      std::ostringstream sum;
      if (rv_beta > -1.0)
        sum << "regvar-check: ratio=" << rep.ratio_mean.back()
            << " sd=" << rep.ratio_sd.back();
      else
        sum << "regvar-check: max_tail_increment=" << result["max_tail_increment"].get<double>();
      return emit(g, name, config, result, sum.str());
    }

    throw std::logic_error("unreachable: unknown subcommand");
  } catch (const RegimeError& e) {
    std::cerr << "inconclusive-regime refusal: " << e.what() << "\n";
    return 3;
  } catch (const IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
