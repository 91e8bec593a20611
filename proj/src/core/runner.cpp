#include "runner.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>

#include "conservation.hpp"
#include "descent.hpp"
#include "lower_bound.hpp"

namespace fel {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), ErrorCode::invalid_argument, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(allowed.count(it.key()) > 0, ErrorCode::invalid_argument,
            where + ": unknown key '" + it.key() + "'");
  }
}

GridPtr grid_for(const Json& grid_spec, const Json& imm_spec) {
  check_keys(grid_spec, {"n1", "n2", "tau"}, "grid");
  const int n1 = grid_spec.value("n1", 64);
  const int n2 = grid_spec.value("n2", 64);
  const std::string kind = imm_spec.value("kind", "clifford");
  if (kind == "rotational") {
    const double R = imm_spec.at("R").get<double>();
    const double r = imm_spec.at("r").get<double>();
    return make_grid(n1, n2, ModuliPoint{0.0, rotational_conformal_tau2(R, r)});
  }
  if (kind == "fourier") return grid_for(grid_spec, imm_spec.at("base"));
  if (grid_spec.contains("tau")) {
    return make_grid(n1, n2, ModuliPoint{grid_spec["tau"][0].get<double>(), grid_spec["tau"][1].get<double>()});
  }
  return make_grid(n1, n2, ModuliPoint{0.0, 1.0});
}

int threads_cap() {
  const char* env = std::getenv("FEL_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  void add(const std::string& name, const std::string& content) { files.emplace_back(name, content); }
  void add_json(const std::string& name, const Json& j) { files.emplace_back(name, j.dump(2) + "\n"); }
  void flush(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : files) write_text_file(out_dir + "/" + name, content);
  }
};

Json base_report(const Json& config) {
  Json j;
  j["config_hash"] = config_hash(config);
  j["threads"] = threads_cap();
  j["tolerances"] = {{"bound_slack", kBoundVerdictSlack},
                     {"conformality_threshold", kConformalityThreshold},
                     {"critical_el_threshold", kCriticalElThreshold}};
  return j;
}

// ---- commands -------------------------------------------------------------

int cmd_energy(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid", "coulomb"}, "energy config");
  auto imm = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));
  auto cache = build_geometry(imm);
  Frame frame = coordinate_frame(cache);
  double coulomb_residual = 0.0;
  if (config.value("coulomb", false)) {
    auto cp = coulomb_project(cache, frame);
    frame = cp.frame;
    coulomb_residual = cp.residual;
  }
  auto b = frame_energy(cache, frame);

  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*imm.grid());
  rep["immersion"] = imm.label;
  rep["energy"] = {{"F", b.F},
                   {"F_T", b.F_T},
                   {"W", b.W},
                   {"quarter_II2", b.quarter_II2},
                   {"gap", b.decomposition_gap}};
  rep["lambda_bar"] = cache.lam_bar;
  rep["conformality_residual"] = cache.conformality_residual;
  if (config.value("coulomb", false)) rep["coulomb_residual"] = coulomb_residual;
  out.add_json("energy.json", rep);
  return std::isfinite(b.F) ? 0 : 1;
}

int cmd_bound(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid", "count", "seed", "amplitude", "max_mode", "gauge_target"},
             "bound config");
  const int count = config.value("count", 1);
  const uint64_t seed0 = config.value("seed", 1ull);
  const double amplitude = config.value("amplitude", 0.03);
  const int max_mode = config.value("max_mode", 3);
  const double gauge_target = config.value("gauge_target", kConformalityThreshold);

  auto base = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));

  std::ostringstream csv;
  csv << "index,label,F,F_T,W,tau1,tau2,theta,f,lhs_LB0,rhs_LB0,fenchel_min,in_omega,branch,verdict\n";
  bool all_pass = true;
  Json first_report;
  for (int k = 0; k < count; ++k) {
    Immersion imm = base;
    if (count > 1 || config.contains("seed")) {
      imm = fourier_perturb(base, seed0 + static_cast<uint64_t>(k), amplitude, max_mode);
    }
    auto gauged = restore_conformal_gauge(imm, gauge_target);
    auto cache = build_geometry(gauged.immersion);
    auto frame = coordinate_frame(cache);
    auto rep = verify_theorem_LB(gauged.immersion, cache, frame);
    all_pass = all_pass && rep.verdict && rep.lb0_ok && rep.fenchel_ok;
    csv << k << ',' << imm.label << ',' << fmt(rep.F) << ',' << fmt(rep.F_T) << ',' << fmt(rep.W) << ','
        << fmt(rep.tau1) << ',' << fmt(rep.tau2) << ',' << fmt(rep.theta) << ',' << fmt(rep.f_value) << ','
        << fmt(rep.lhs_LB0) << ',' << fmt(rep.rhs_LB0) << ',' << fmt(rep.fenchel_min) << ','
        << (rep.in_omega ? 1 : 0) << ',' << rep.branch << ',' << (rep.verdict && rep.lb0_ok && rep.fenchel_ok)
        << '\n';
    if (k == 0) {
      first_report = Json{{"F", rep.F},
                          {"F_T", rep.F_T},
                          {"W", rep.W},
                          {"lhs_LB0", rep.lhs_LB0},
                          {"rhs_LB0", rep.rhs_LB0},
                          {"f", rep.f_value},
                          {"tau", {rep.tau1, rep.tau2}},
                          {"theta", rep.theta},
                          {"in_omega", rep.in_omega},
                          {"omega_distance", rep.omega_distance},
                          {"branch", rep.branch},
                          {"fenchel_min", rep.fenchel_min},
                          {"verdict", rep.verdict}};
    }
  }
  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*base.grid());
  rep["count"] = count;
  rep["first"] = first_report;
  rep["all_pass"] = all_pass;
  out.add_json("bound.json", rep);
  out.add("bound.csv", csv.str());
  return all_pass ? 0 : 1;
}

int cmd_gradcheck(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid", "pairs", "seed"}, "gradcheck config");
  const int pairs = config.value("pairs", 5);
  const uint64_t seed0 = config.value("seed", 100ull);
  auto imm = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));
  require(imm.dim() == 3, ErrorCode::invalid_argument, "gradcheck: m = 3 immersions only");
  auto gauged = restore_conformal_gauge(imm);
  auto cache = build_geometry(gauged.immersion);
  auto frame = coordinate_frame(cache);
  auto e = discrete_energy(gauged.immersion, true);

  const auto& g = gauged.immersion.grid();
  std::mt19937_64 rng(seed0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_dir = [&](int kmax) {
    VectorField w(g, 3);
    for (int c = 0; c < 3; ++c)
      for (int k = -kmax; k <= kmax; ++k)
        for (int l = -kmax; l <= kmax; ++l) {
          if (k < 0 || (k == 0 && l < 0)) continue;
          const double ca = u(rng), cb = u(rng);
          for (int j = 0; j < g->n2(); ++j)
            for (int i = 0; i < g->n1(); ++i) {
              const double ph = kTwoPi * (k * g->a_of(i) + l * g->b_of(j));
              w.at(c, g->index(i, j)) += ca * std::cos(ph) + cb * std::sin(ph);
            }
        }
    const double mx = max_abs(w);
    for (auto& v : w.data) v /= mx;
    return w;
  };
  auto displaced = [&](const VectorField& w, double t) {
    Immersion d = gauged.immersion;
    for (size_t k = 0; k < d.phi.data.size(); ++k) d.phi.data[k] += t * w.data[k];
    return d;
  };
  auto richardson = [](const std::function<double(double)>& f, double h) {
    const double d1 = (f(h) - f(-h)) / (2 * h);
    const double d2 = (f(h / 2) - f(-h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
  };

  double worst_ft = 0, worst_w = 0, worst_f = 0, worst_coeff = 0;
  for (int k = 0; k < pairs; ++k) {
    auto w = random_dir(3);
    const double aft = first_variation_FT(cache, frame, w);
    const double fft_fd = richardson([&](double t) { return discrete_energy(displaced(w, t), false).F_T; }, 1e-3);
    worst_ft = std::max(worst_ft, std::abs(aft - fft_fd) / std::max(1.0, std::abs(fft_fd)));

    const double aw = first_variation_W(cache, w);
    const double w_fd =
        richardson([&](double t) { return willmore_energy(build_geometry(displaced(w, t))).W; }, 1e-3);
    worst_w = std::max(worst_w, std::abs(aw - w_fd) / std::max(1.0, std::abs(w_fd)));

    const double af = first_variation_F(cache, frame, w);
    const double f_fd = richardson([&](double t) { return discrete_energy(displaced(w, t), false).value; }, 1e-3);
    worst_f = std::max(worst_f, std::abs(af - f_fd) / std::max(1.0, std::abs(f_fd)));

    // exact discrete coefficient gradient against coefficient FD
    const double grad_dir = discrete_directional(e, w);
    const double coeff_fd =
        richardson([&](double t) { return discrete_energy(displaced(w, t), false).value; }, 1e-4);
    worst_coeff = std::max(worst_coeff, std::abs(grad_dir - coeff_fd) / std::max(1.0, std::abs(coeff_fd)));
  }

  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*g);
  rep["pairs"] = pairs;
  rep["analytic_vs_fd"] = {{"F_T", worst_ft}, {"W", worst_w}, {"F", worst_f}};
  rep["coefficient_gradient_vs_fd"] = worst_coeff;
  const bool pass = worst_ft < 1e-4 && worst_w < 1e-4 && worst_f < 1e-4 && worst_coeff < 1e-6;
  rep["pass"] = pass;
  out.add_json("gradcheck.json", rep);
  return pass ? 0 : 1;
}

int cmd_minimize(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid", "opts"}, "minimize config");
  auto imm = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));
  DescentOptions opts;
  if (config.contains("opts")) {
    const Json& o = config["opts"];
    check_keys(o, {"max_iter", "grad_tol", "check_class_every", "seed", "gauge_trigger", "band_limit"},
               "minimize opts");
    opts.max_iter = o.value("max_iter", opts.max_iter);
    opts.grad_tol = o.value("grad_tol", opts.grad_tol);
    opts.check_class_every = o.value("check_class_every", opts.check_class_every);
    opts.seed = o.value("seed", opts.seed);
    opts.gauge_trigger = o.value("gauge_trigger", opts.gauge_trigger);
    opts.band_limit = o.value("band_limit", opts.band_limit);
  }
  auto res = minimize(imm, opts);

  std::ostringstream csv;
  csv << "step,F,F_T,W,EL_residual,gauge_residual,tau2,class_label\n";
  for (const auto& s : res.trajectory) {
    csv << s.step << ',' << fmt(s.F) << ',' << fmt(s.F_T) << ',' << fmt(s.W) << ',' << fmt(s.el_residual)
        << ',' << fmt(s.gauge_residual) << ',' << fmt(s.tau2) << ',' << s.class_label << '\n';
  }

  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*res.immersion.grid());
  rep["steps"] = res.trajectory.size() - 1;
  rep["stop_reason"] = res.stop_reason;
  rep["class_flip"] = res.class_flip;
  rep["initial"] = {{"F", res.trajectory.front().F}, {"el_residual", res.trajectory.front().el_residual}};
  rep["final"] = {{"F", res.trajectory.back().F},
                  {"F_T", res.trajectory.back().F_T},
                  {"W", res.trajectory.back().W},
                  {"el_residual", res.trajectory.back().el_residual},
                  {"class", res.trajectory.back().class_label}};
  out.add_json("minimize.json", rep);
  out.add("trajectory.csv", csv.str());
  out.add_json("final_immersion.json", immersion_to_json(res.immersion));
  return res.class_flip ? 1 : 0;
}

int cmd_conservation(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid", "el_threshold"}, "conservation config");
  auto imm = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));
  const double el_threshold = config.value("el_threshold", kCriticalElThreshold);
  auto gauged = restore_conformal_gauge(imm);
  auto cache = build_geometry(gauged.immersion);
  auto frame = coordinate_frame(cache);

  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*gauged.immersion.grid());
  rep["el_threshold"] = el_threshold;

  auto D = build_D(cache, kConformalityThreshold * 10);
  const double el = el_residual_norm(cache, frame, kConformalityThreshold * 10);
  rep["el_residual"] = el;
  rep["residuals"] = {{"identity1", identity_residual(cache, kConformalityThreshold * 10)},
                      {"deltaLambda_eq", delta_lambda_residual(cache, frame)},
                      {"D_compatibility", D.compatibility}};

  if (el <= el_threshold) {
    auto L = build_L(cache, frame, el_threshold);
    auto pots = build_potentials(cache, L, D);
    auto sys = system_residuals(cache, frame, L, D, pots);
    rep["potentials_built"] = true;
    rep["residuals"] = {{"identity1", sys.identity1},   {"curlL", sys.curlL},
                        {"curlS", sys.curlS},           {"curlR", sys.curlR},
                        {"gradS_eq", sys.gradS_eq},     {"gradR_eq", sys.gradR_eq},
                        {"deltaS_eq", sys.deltaS_eq},   {"deltaR_eq", sys.deltaR_eq},
                        {"deltaD_eq", sys.deltaD_eq},   {"deltaPhi_eq", sys.deltaPhi_eq},
                        {"deltaLambda_eq", sys.deltaLambda_eq}, {"D_compatibility", D.compatibility}};
  } else {
    rep["potentials_built"] = false;
    rep["refusal"] = "EL residual above threshold; potentials exist only near critical points";
  }
  out.add_json("conservation.json", rep);
  return 0;
}

int cmd_classify(const Json& config, Outputs& out) {
  check_keys(config, {"command", "immersion", "grid"}, "classify config");
  auto imm = immersion_from_config(config.at("immersion"), config.value("grid", Json::object()));
  auto cache = build_geometry(imm);
  auto lab = classify(imm, cache);

  Json rep = base_report(config);
  rep["grid"] = grid_to_json(*imm.grid());
  rep["arf"] = lab.arf;
  rep["label"] = lab.label;
  rep["q"] = {lab.q[0], lab.q[1]};
  rep["margins"] = {lab.margins[0], lab.margins[1]};
  rep["self_linking"] = {lab.self_linking[0], lab.self_linking[1]};
  out.add_json("classify.json", rep);
  return 0;
}

int cmd_sweep(const Json& config, Outputs& out) {
  check_keys(config, {"command", "tau2", "theta"}, "sweep config");
  auto parse_axis = [](const Json& j, const char* name) {
    require(j.is_array() && j.size() == 3, ErrorCode::invalid_argument,
            std::string("sweep axis ") + name + " must be [min, max, count]");
    return std::tuple<double, double, int>(j[0].get<double>(), j[1].get<double>(), j[2].get<int>());
  };
  auto [t2min, t2max, t2count] = parse_axis(config.at("tau2"), "tau2");
  auto [thmin, thmax, thcount] = parse_axis(config.at("theta"), "theta");

  std::ostringstream csv;
  csv << "tau2,theta,f,in_strip,in_omega\n";
  double min_outside = std::numeric_limits<double>::infinity();
  double arg_t2 = 0, arg_th = 0;
  for (int a = 0; a < t2count; ++a) {
    const double t2 = (t2count == 1) ? t2min : t2min + (t2max - t2min) * a / (t2count - 1);
    for (int b = 0; b < thcount; ++b) {
      const double th = (thcount == 1) ? thmin : thmin + (thmax - thmin) * b / (thcount - 1);
      const double t1 = std::cos(th);
      const ModuliPoint tau{t1, t2};
      const bool in_strip = tau.in_strip(1e-12) || std::abs(t1 - 0.5) < 1e-12;
      const auto om = in_omega_LYMR(tau);
      const double fv = f_moduli(t2, th);
      csv << fmt(t2) << ',' << fmt(th) << ',' << fmt(fv) << ',' << (in_strip ? 1 : 0) << ','
          << (om.member ? 1 : 0) << '\n';
      if (in_strip && !om.member && fv < min_outside) {
        min_outside = fv;
        arg_t2 = t2;
        arg_th = th;
      }
    }
  }
  Json rep = base_report(config);
  rep["rows"] = t2count * thcount;
  if (t2count * thcount > 0 && std::isfinite(min_outside)) {
    rep["min_f_outside_omega"] = min_outside;
    rep["argmin"] = {{"tau2", arg_t2}, {"theta", arg_th}};
  }
  out.add_json("sweep.json", rep);
  out.add("sweep.csv", csv.str());
  return 0;
}

}  // namespace

Immersion immersion_from_config(const Json& spec, const Json& grid_spec) {
  require(spec.is_object() && spec.contains("kind"), ErrorCode::invalid_argument,
          "immersion spec: object with 'kind' required");
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "clifford") {
    check_keys(spec, {"kind"}, "clifford spec");
    return clifford(grid_for(grid_spec, spec));
  }
  if (kind == "rotational") {
    check_keys(spec, {"kind", "R", "r"}, "rotational spec");
    return rotational_conformal(spec.at("R").get<double>(), spec.at("r").get<double>(), grid_for(grid_spec, spec));
  }
  if (kind == "figure8") {
    check_keys(spec, {"kind", "scale"}, "figure8 spec");
    return twisted_figure_eight(grid_for(grid_spec, spec), spec.value("scale", 0.35));
  }
  if (kind == "fourier") {
    check_keys(spec, {"kind", "base", "seed", "amplitude", "max_mode"}, "fourier spec");
    auto base = immersion_from_config(spec.at("base"), grid_spec);
    return fourier_perturb(base, spec.value("seed", 1ull), spec.value("amplitude", 0.05),
                           spec.value("max_mode", 3));
  }
  if (kind == "file") {
    check_keys(spec, {"kind", "path"}, "file spec");
    return immersion_from_json(Json::parse(read_text_file(spec.at("path").get<std::string>())));
  }
  fail(ErrorCode::invalid_argument, "immersion spec: unknown kind '" + kind + "'");
}

int run_config(const Json& config, const std::string& out_dir) {
  require(config.is_object() && config.contains("command"), ErrorCode::invalid_argument,
          "config: 'command' required");
  const std::string cmd = config["command"].get<std::string>();

  Outputs out;
  int code = 0;
  if (cmd == "energy") {
    code = cmd_energy(config, out);
  } else if (cmd == "bound") {
    code = cmd_bound(config, out);
  } else if (cmd == "gradcheck") {
    code = cmd_gradcheck(config, out);
  } else if (cmd == "minimize") {
    code = cmd_minimize(config, out);
  } else if (cmd == "conservation") {
    code = cmd_conservation(config, out);
  } else if (cmd == "classify") {
    code = cmd_classify(config, out);
  } else if (cmd == "sweep") {
    code = cmd_sweep(config, out);
  } else {
    fail(ErrorCode::invalid_argument, "config: unknown command '" + cmd + "'");
  }
  out.flush(out_dir);  // no partial outputs: writes happen only after success
  return code;
}

int run_config_text(const std::string& command, const std::string& config_text, const std::string& out_dir,
                    std::string* error_message) {
  try {
    Json config = Json::parse(config_text, nullptr, /*allow_exceptions=*/false);
    if (config.is_discarded()) {
      if (error_message) *error_message = "config: malformed JSON";
      return 2;
    }
    if (!command.empty()) {
      if (!config.is_object() || config.value("command", "") != command) {
        if (error_message) *error_message = "config: 'command' does not match the requested subcommand";
        return 2;
      }
    }
    return run_config(config, out_dir);
  } catch (const Error& e) {
    if (error_message) *error_message = e.what();
    return (e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::io_failure) ? 2 : 1;
  } catch (const std::exception& e) {
    if (error_message) *error_message = e.what();
    return 1;
  }
}

}  // namespace fel
