#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace levydrift::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw std::runtime_error("config: unknown key '" + item.key() + "' in " +
                               where);
    }
  }
}

std::vector<double> get_vec(const json& obj, const std::string& key,
                            const std::string& where) {
  if (!obj.contains(key)) {
    throw std::runtime_error("config: missing '" + key + "' in " + where);
  }
  return obj.at(key).get<std::vector<double>>();
}

JumpLaw parse_jump_law(const json& j, const std::string& where) {
  if (!j.contains("law")) {
    throw std::runtime_error("config: missing 'law' in " + where);
  }
  const std::string law = j.at("law").get<std::string>();
  if (law == "gaussian") {
    check_keys(j, {"law", "mu", "sd"}, where);
    GaussianJumps g;
    g.mu = j.value("mu", 0.0);
    g.sd = j.value("sd", 1.0);
    return g;
  }
  if (law == "uniform") {
    check_keys(j, {"law", "lo", "hi"}, where);
    UniformJumps u;
    u.lo = j.value("lo", -1.0);
    u.hi = j.value("hi", 1.0);
    return u;
  }
  throw std::runtime_error("config: unknown jump law '" + law + "' in " + where);
}

Component parse_component(const json& j, const std::string& where) {
  if (!j.contains("type")) {
    throw std::runtime_error("config: missing 'type' in " + where);
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "wiener") {
    check_keys(j, {"type", "coord", "sigma"}, where);
    return Wiener{j.value("sigma", 1.0)};
  }
  if (type == "drift") {
    check_keys(j, {"type", "coord", "rate"}, where);
    return LinearDrift{j.value("rate", 0.0)};
  }
  if (type == "compound_poisson") {
    check_keys(j, {"type", "coord", "rate", "jumps"}, where);
    CompoundPoisson cp;
    cp.rate = j.value("rate", 1.0);
    if (!j.contains("jumps")) {
      throw std::runtime_error("config: missing 'jumps' in " + where);
    }
    cp.law = parse_jump_law(j.at("jumps"), where + ".jumps");
    return cp;
  }
  if (type == "variance_gamma") {
    check_keys(j, {"type", "coord", "kappa", "xi"}, where);
    VarianceGamma vg;
    vg.kappa = j.value("kappa", 1.0);
    vg.xi = j.value("xi", 1.0);
    return vg;
  }
  if (type == "stable") {
    check_keys(j, {"type", "coord", "alpha", "scale", "skew"}, where);
    Stable s;
    s.alpha = j.value("alpha", 1.5);
    s.scale = j.value("scale", 1.0);
    s.skew = j.value("skew", 0.0);
    return s;
  }
  throw std::runtime_error("config: unknown component type '" + type + "' in " +
                           where);
}

std::uint64_t get_seed(const json& j, const std::string& key,
                       std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

RunConfig load_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(root, {"model", "noise", "simulate", "estimate", "mc", "output"},
             "top level");

  RunConfig cfg;

  if (root.contains("model")) {
    const json& m = root.at("model");
    check_keys(m, {"id", "theta0", "x0", "theta_box", "theta1_min"}, "model");
    if (!m.contains("id")) throw std::runtime_error("config: model.id required");
    const std::string id = m.at("id").get<std::string>();
    if (id == "example2d" && m.contains("theta1_min")) {
      cfg.model = make_example2d(m.at("theta1_min").get<double>());
    } else {
      cfg.model = model_by_id(id);
    }
    cfg.theta0 = get_vec(m, "theta0", "model");
    cfg.x0 = get_vec(m, "x0", "model");
    if (m.contains("theta_box")) {
      const json& box = m.at("theta_box");
      check_keys(box, {"lo", "hi"}, "model.theta_box");
      cfg.model.theta_lo = get_vec(box, "lo", "model.theta_box");
      cfg.model.theta_hi = get_vec(box, "hi", "model.theta_box");
    }
    cfg.model.validate();
    if (static_cast<int>(cfg.theta0.size()) != cfg.model.p ||
        static_cast<int>(cfg.x0.size()) != cfg.model.d) {
      throw std::runtime_error("config: model.theta0 / x0 have wrong sizes");
    }
    cfg.has_model = true;
  }

  if (root.contains("noise")) {
    const json& nz = root.at("noise");
    check_keys(nz, {"components", "dim"}, "noise");
    cfg.noise.dim = nz.value("dim", cfg.has_model ? cfg.model.d : 1);
    if (nz.contains("components")) {
      int idx = 0;
      for (const json& cj : nz.at("components")) {
        const std::string where = "noise.components[" + std::to_string(idx) + "]";
        PlacedComponent pc;
        pc.component = parse_component(cj, where);
        pc.coord = cj.value("coord", 0);
        cfg.noise.components.push_back(pc);
        ++idx;
      }
    }
    cfg.noise.validate();
    cfg.has_noise = true;
  }

  if (root.contains("simulate")) {
    const json& s = root.at("simulate");
    check_keys(s, {"n", "eps", "refinement", "tau", "seed", "jump_log"},
               "simulate");
    cfg.n = s.value("n", 1000);
    cfg.eps = s.value("eps", 0.1);
    cfg.refinement = s.value("refinement", 10);
    cfg.tau = s.value("tau", 0.0);
    cfg.sim_seed = get_seed(s, "seed", 1);
    cfg.jump_log = s.value("jump_log", false);
    if (cfg.n < 1 || !(cfg.eps >= 0.0) || cfg.refinement < 1) {
      throw std::runtime_error(
          "config: simulate needs n>=1, eps>=0, refinement>=1");
    }
    cfg.has_simulate = true;
  }

  if (root.contains("estimate")) {
    const json& e = root.at("estimate");
    check_keys(e,
               {"rule", "estimator", "grad_tol", "step_tol", "max_iter",
                "starts_per_axis"},
               "estimate");
    cfg.rule = ThresholdRule::parse(e.value("rule", std::string("none")));
    const std::string est = e.value("estimator", std::string("generic"));
    if (est == "closed_form") {
      cfg.closed_form = true;
    } else if (est != "generic") {
      throw std::runtime_error(
          "config: estimate.estimator must be generic or closed_form");
    }
    cfg.optimizer.grad_tol = e.value("grad_tol", 1e-10);
    cfg.optimizer.step_tol = e.value("step_tol", 1e-12);
    cfg.optimizer.max_iter = e.value("max_iter", 100);
    cfg.optimizer.starts_per_axis = e.value("starts_per_axis", 3);
    cfg.has_estimate = true;
  }

  if (root.contains("mc")) {
    const json& mc = root.at("mc");
    check_keys(mc, {"cells", "rules", "reps", "seed", "gamma", "rho"}, "mc");
    if (!mc.contains("cells") || !mc.contains("rules")) {
      throw std::runtime_error("config: mc.cells and mc.rules are required");
    }
    int idx = 0;
    for (const json& cj : mc.at("cells")) {
      check_keys(cj, {"n", "eps"}, "mc.cells[" + std::to_string(idx) + "]");
      if (!cj.contains("n") || !cj.contains("eps")) {
        throw std::runtime_error("config: every mc cell needs n and eps");
      }
      MCCell cell;
      cell.n = cj.at("n").get<int>();
      cell.eps = cj.at("eps").get<double>();
      cfg.cells.push_back(cell);
      ++idx;
    }
    for (const json& rj : mc.at("rules")) {
      cfg.mc_rules.push_back(ThresholdRule::parse(rj.get<std::string>()));
    }
    cfg.reps = mc.value("reps", 2000);
    cfg.mc_seed = get_seed(mc, "seed", 1);
    cfg.gamma = mc.value("gamma", 0.5);
    cfg.rho = mc.value("rho", 0.5);
    cfg.has_mc = true;
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, {"directory", "formats"}, "output");
    cfg.out_dir = o.value("directory", std::string("out"));
    if (o.contains("formats")) {
      cfg.fmt_csv = cfg.fmt_md = false;
      for (const json& fj : o.at("formats")) {
        const std::string f = fj.get<std::string>();
        if (f == "csv") {
          cfg.fmt_csv = true;
        } else if (f == "md") {
          cfg.fmt_md = true;
        } else {
          throw std::runtime_error("config: unknown output format '" + f + "'");
        }
      }
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return load_config_text(os.str());
}

LevySpec coordinate_spec(const LevySpec& spec, int coord) {
  LevySpec out;
  out.dim = 1;
  for (const auto& pc : spec.components) {
    if (pc.coord == coord) out.components.push_back({pc.component, 0});
  }
  return out;
}

}  // namespace levydrift::cli
