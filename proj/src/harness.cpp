#include "igo/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "igo/csv.hpp"
#include "igo/graduated.hpp"
#include "igo/metrics.hpp"
#include "igo/noise.hpp"
#include "igo/rng.hpp"
#include "igo/smoothing.hpp"
#include "igo/stats.hpp"

namespace igo {

using nlohmann::json;

namespace {

enum class FieldType { String, Number, Integer, Boolean, StringArray, NumberArray, IntArray };

struct Field {
  const char* name;
  FieldType type;
  bool required;
};

const std::map<std::string, std::vector<Field>>& schemas() {
  static const std::map<std::string, std::vector<Field>> s = {
      {"smooth-sweep",
       {{"objective", FieldType::String, true},
        {"delta", FieldType::Number, true},
        {"distributions", FieldType::StringArray, true},
        {"grid_lo", FieldType::Number, true},
        {"grid_hi", FieldType::Number, true},
        {"grid_points", FieldType::Integer, true},
        {"n_samples", FieldType::Integer, true},
        {"normalize", FieldType::Boolean, false}}},
      {"equivalence",
       {{"objective", FieldType::String, true},
        {"spread", FieldType::Number, true},
        {"eta", FieldType::Number, true},
        {"batch", FieldType::Integer, true},
        {"n_runs", FieldType::Integer, true},
        {"steps", FieldType::Integer, true}}},
      {"graduated",
       {{"objective", FieldType::String, true},
        {"mode", FieldType::String, true},
        {"eps", FieldType::Number, true},
        {"gamma", FieldType::Number, true},
        {"x1", FieldType::Number, true},
        {"sigma", FieldType::Number, false},  // omit for measured sigma
        {"delta1", FieldType::Number, false},
        {"eta1", FieldType::Number, false},
        {"cap_eta", FieldType::Boolean, false},
        {"preset", FieldType::String, false},
        {"b1", FieldType::Integer, false},
        {"C", FieldType::Number, false},
        {"n_components", FieldType::Integer, false}}},
      {"variance",
       {{"objective", FieldType::String, false},
        {"spread", FieldType::Number, true},
        {"n_components", FieldType::Integer, true},
        {"eta", FieldType::Number, true},
        {"eps_threshold", FieldType::Number, true},
        {"batches", FieldType::IntArray, true},
        {"x0", FieldType::Number, true},
        {"iter_cap", FieldType::Integer, false}}},
      {"sharpness-sweep",
       {{"objective", FieldType::String, false},
        {"dim", FieldType::Integer, false},
        {"spread", FieldType::Number, true},
        {"n_components", FieldType::Integer, true},
        {"etas", FieldType::NumberArray, true},
        {"batches", FieldType::IntArray, true},
        {"iters", FieldType::Integer, true},
        {"x0", FieldType::Number, true},
        {"rho", FieldType::Number, true}}},
      {"tail-test",
       {{"distributions", FieldType::StringArray, true},
        {"n_samples", FieldType::Integer, true},
        {"n_seeds", FieldType::Integer, true}}},
      {"compare",
       {{"objective", FieldType::String, false},
        {"spread", FieldType::Number, true},
        {"n_components", FieldType::Integer, true},
        {"presets", FieldType::StringArray, true},
        {"eta1", FieldType::Number, true},
        {"b1", FieldType::Integer, true},
        {"phases", FieldType::Integer, true},
        {"t1", FieldType::Integer, true},
        {"n_seeds", FieldType::Integer, true},
        {"x1", FieldType::Number, true},
        {"gamma", FieldType::Number, false}}}};
  return s;
}

bool type_ok(const json& v, FieldType t) {
  switch (t) {
    case FieldType::String: return v.is_string();
    case FieldType::Number: return v.is_number();
    case FieldType::Integer: return v.is_number_integer();
    case FieldType::Boolean: return v.is_boolean();
    case FieldType::StringArray:
    case FieldType::NumberArray:
    case FieldType::IntArray: {
      if (!v.is_array() || v.empty()) return false;
      for (const auto& e : v) {
        if (t == FieldType::StringArray && !e.is_string()) return false;
        if (t == FieldType::NumberArray && !e.is_number()) return false;
        if (t == FieldType::IntArray && !e.is_number_integer()) return false;
      }
      return true;
    }
  }
  return false;
}

const char* type_name(FieldType t) {
  switch (t) {
    case FieldType::String: return "string";
    case FieldType::Number: return "number";
    case FieldType::Integer: return "integer";
    case FieldType::Boolean: return "boolean";
    case FieldType::StringArray: return "non-empty string array";
    case FieldType::NumberArray: return "non-empty number array";
    case FieldType::IntArray: return "non-empty integer array";
  }
  return "?";
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int use = std::min<std::size_t>(workers, n);
  for (int w = 0; w < use; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  if (out_dir.empty() || out_dir == ".") return name;
  return out_dir + "/" + name;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
}

void write_trace_csv(const std::string& path, const RunTrace& tr, const Schedule& sch) {
  CsvWriter w(path);
  w.row({"t", "phase", "eta", "batch", "delta", "value", "grad_norm"});
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const auto& ph = sch.phases[static_cast<std::size_t>(tr.phase_index[i])];
    w.row({std::to_string(tr.t[i]), std::to_string(tr.phase_index[i] + 1),
           format_double(ph.eta), std::to_string(ph.batch), format_double(tr.delta[i]),
           format_double(tr.values[i]), format_double(tr.grad_norms[i])});
  }
}

struct CheckList {
  json checks = json::object();
  bool all_ok = true;
  void add(const std::string& name, bool ok) {
    checks[name] = ok;
    if (!ok) {
      all_ok = false;
      std::cerr << "property check failed: " << name << '\n';
    }
  }
};

// ---- individual experiment runners ------------------------------------

void run_smooth_sweep(const json& cfg, const std::string& out_dir, const std::string& prefix,
                      std::uint64_t seed, json& summary, CheckList& checks) {
  const auto obj = objective_by_id(cfg.at("objective"));
  std::vector<NoiseDistribution> dists;
  for (const auto& name : cfg.at("distributions")) {
    auto d = NoiseDistribution::from_name(name, obj.dim);
    if (cfg.value("normalize", true))
      d = normalize_unit_expectation(d, 100000, Rng::derive(seed, 0x71u + dists.size()));
    dists.push_back(d);
  }
  const int np = cfg.at("grid_points");
  const double lo = cfg.at("grid_lo"), hi = cfg.at("grid_hi");
  std::vector<double> grid(np);
  for (int i = 0; i < np; ++i) grid[i] = np == 1 ? lo : lo + (hi - lo) * i / (np - 1);
  const auto rows = smoothing_sweep(obj, cfg.at("delta"), dists,
                                    grid, cfg.at("n_samples").get<std::size_t>(), seed);
  write_sweep_csv(out_path(out_dir, prefix + ".csv"), rows);
  summary["rows"] = rows.size();
  bool light_finite = true;
  for (const auto& r : rows)
    if (family_is_light_tailed(family_from_name(r.dist)) && !std::isfinite(r.estimate))
      light_finite = false;
  checks.add("light_tailed_estimates_finite", light_finite);
}

void run_equivalence(const json& cfg, const std::string& out_dir, const std::string& prefix,
                     std::uint64_t seed, json& summary, CheckList& checks) {
  const auto obj = objective_by_id(cfg.at("objective"));
  const auto rep = sgd_gd_equivalence(obj, cfg.at("spread"), cfg.at("eta"), cfg.at("batch"),
                                      cfg.at("n_runs"), cfg.at("steps"), seed);
  CsvWriter w(out_path(out_dir, prefix + ".csv"));
  w.row({"t", "gd", "sgd_mean", "deviation", "tolerance"});
  for (std::size_t t = 0; t < rep.gd_path.size(); ++t)
    w.row({std::to_string(t), format_double(rep.gd_path[t]), format_double(rep.sgd_mean[t]),
           format_double(rep.deviation[t]), format_double(rep.tolerance[t])});
  summary["delta"] = rep.delta;
  summary["steps_within"] = rep.steps_within;
  checks.add("mean_sgd_path_matches_gd", rep.all_within);
}

PlanParams graduated_params(const json& cfg, const SmoothedFamily& fam, std::string* err) {
  PlanParams p;
  p.eps = cfg.at("eps");
  p.gamma = cfg.at("gamma");
  const std::string mode = cfg.at("mode");
  const auto obj = objective_by_id(cfg.at("objective"));
  p.lipschitz_f = obj.meta.lipschitz_f;
  p.lipschitz_g = obj.meta.lipschitz_g;
  double x_star = 0.0;
  if (obj.meta.minimizer) x_star = (*obj.meta.minimizer)[0];
  p.sigma = cfg.contains("sigma") ? constant_sigma(cfg.at("sigma").get<double>())
                                  : measured_sigma(fam, x_star);
  if (mode == "explicit") {
    p.mode = PlanMode::Explicit;
    if (!cfg.contains("delta1")) {
      *err = "explicit mode requires 'delta1'";
      return p;
    }
    p.delta1 = cfg.at("delta1");
    p.cap_eta = cfg.value("cap_eta", true);
    p.eta1 = cfg.value("eta1", 0.9 * 2.0 / p.lipschitz_g);
  } else if (mode == "implicit") {
    p.mode = PlanMode::Implicit;
    for (const char* k : {"preset", "eta1", "b1", "C", "n_components"})
      if (!cfg.contains(k)) {
        *err = std::string("implicit mode requires '") + k + "'";
        return p;
      }
    const auto [kappa, lambda] =
        preset_multipliers(preset_from_name(cfg.at("preset")), p.gamma);
    p.kappa = kappa;
    p.lambda = lambda;
    p.eta1 = cfg.at("eta1");
    p.b1 = cfg.at("b1");
    p.C = cfg.at("C");
  } else {
    *err = "mode must be 'explicit' or 'implicit'";
  }
  return p;
}

void write_phases_csv(const std::string& path, const GraduatedPlan& plan,
                      const std::vector<double>& phase_inputs,
                      const std::vector<double>& phase_values) {
  CsvWriter w(path);
  w.row({"phase", "delta", "eta", "batch", "eps_m", "T_m", "x_in", "value_end"});
  for (std::size_t m = 0; m < plan.phases.size(); ++m) {
    const auto& ph = plan.phases[m];
    w.row({std::to_string(m + 1), format_double(ph.delta), format_double(ph.eta),
           std::to_string(ph.batch), format_double(ph.eps), std::to_string(ph.iters),
           m < phase_inputs.size() ? format_double(phase_inputs[m]) : "",
           m < phase_values.size() ? format_double(phase_values[m]) : ""});
  }
}

int run_graduated(const json& cfg, const std::string& out_dir, const std::string& prefix,
                  std::uint64_t seed, json& summary, CheckList& checks) {
  const std::string obj_id = cfg.at("objective");
  const auto fam = smoothed_family(obj_id);
  const auto obj = objective_by_id(obj_id);
  std::string err;
  PlanParams p = graduated_params(cfg, fam, &err);
  if (!err.empty()) {
    std::cerr << "config error: " << err << '\n';
    return kExitConfigError;
  }
  GraduatedPlan plan;
  try {
    plan = build_plan(p);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  summary["alpha0"] = plan.alpha0;
  summary["M"] = plan.M;
  summary["total_iters"] = plan.total_iters();
  auto& ladder = summary["delta_ladder"] = json::array();
  auto& hs = summary["H_m"] = json::array();
  for (const auto& ph : plan.phases) {
    ladder.push_back(ph.delta);
    hs.push_back(ph.H);
  }
  const auto& box = obj.meta.domain_box[0];
  const double x1 = cfg.at("x1");
  if (p.mode == PlanMode::Explicit) {
    const auto res = run_explicit(plan, fam, x1);
    write_phases_csv(out_path(out_dir, prefix + "_phases.csv"), plan, res.phase_inputs,
                     res.phase_values);
    const auto cont = check_basin_containment(res.phase_inputs, plan, fam, box.first, box.second);
    summary["x_final"] = res.x_final;
    summary["steps_executed"] = res.steps_executed;
    checks.add("basin_containment", cont.ok);
  } else {
    const auto fs = make_finite_sum(obj, cfg.at("n_components"), p.C, Rng::derive(seed, 0xF5));
    ImplicitResult res;
    try {
      const long stride = std::max<long>(1, plan.total_iters() / 2000);
      res = run_implicit(plan, fs, x1, seed, stride);
    } catch (const DivergenceError& e) {
      std::cerr << e.what() << '\n';
      checks.add("run_converged", false);
      return kExitPropertyFailure;
    }
    write_trace_csv(out_path(out_dir, prefix + "_trace.csv"), res.trace, plan.schedule());
    write_phases_csv(out_path(out_dir, prefix + "_phases.csv"), plan, res.phase_inputs, {});
    summary["x_final"] = res.trace.final_x[0];
    summary["final_value"] = res.trace.final_value;
    // recorded delta per step must equal the plan ladder
    bool ladder_ok = true;
    for (std::size_t i = 0; i < res.trace.delta.size(); ++i) {
      const auto m = static_cast<std::size_t>(res.trace.phase_index[i]);
      if (std::fabs(res.trace.delta[i] - plan.phases[m].delta) > 1e-12) ladder_ok = false;
    }
    checks.add("implicit_delta_ladder_exact", ladder_ok);
  }
  return kExitOk;
}

int run_variance(const json& cfg, const std::string& out_dir, const std::string& prefix,
                 std::uint64_t seed, json& summary, CheckList& checks) {
  const auto obj = objective_by_id(cfg.value("objective", "quadratic"));
  const auto fs = make_finite_sum(obj, cfg.at("n_components"), cfg.at("spread"),
                                  Rng::derive(seed, 0xBB));
  const std::vector<double> x0{cfg.at("x0").get<double>()};
  VarianceEstimate est;
  try {
    est = estimate_C2(fs, cfg.at("eta"), cfg.at("eps_threshold"),
                      cfg.at("batches").get<std::vector<int>>(), x0, seed,
                      cfg.value("iter_cap", 200000L));
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << '\n';
    checks.add("threshold_reachable", false);
    return kExitPropertyFailure;
  }
  CsvWriter w(out_path(out_dir, prefix + ".csv"));
  w.row({"batch", "steps", "evals"});
  for (const auto& [b, s] : est.steps_per_batch)
    w.row({std::to_string(b), std::to_string(s), std::to_string(s > 0 ? s * b : -1)});
  summary["C2_hat"] = est.C2_hat;
  summary["b_star"] = est.b_star;
  checks.add("threshold_reachable", true);
  return kExitOk;
}

void run_sharpness_sweep(const json& cfg, const std::string& out_dir, const std::string& prefix,
                         std::uint64_t seed, json& summary) {
  const std::string obj_id = cfg.value("objective", "rastrigin");
  const int dim = cfg.value("dim", 1);
  Objective obj;
  if (dim == 1) {
    obj = objective_by_id(obj_id);
  } else if (obj_id == "rastrigin") {
    obj = make_rastrigin(dim);
  } else if (obj_id == "quadratic") {
    obj = make_quadratic(dim);
  } else {
    throw std::invalid_argument("sharpness-sweep: dim > 1 needs rastrigin or quadratic");
  }
  const auto fs = make_finite_sum(obj, cfg.at("n_components"), cfg.at("spread"),
                                  Rng::derive(seed, 0x5A));
  const auto rows = sharpness_sweep(fs, cfg.at("etas").get<std::vector<double>>(),
                                    cfg.at("batches").get<std::vector<int>>(), cfg.at("iters"),
                                    cfg.at("x0"), cfg.at("rho"), seed);
  write_sharpness_csv(out_path(out_dir, prefix + ".csv"), rows);
  std::vector<double> deltas, sharp;
  for (const auto& r : rows) {
    deltas.push_back(r.delta);
    sharp.push_back(r.sharpness);
  }
  summary["rows"] = rows.size();
  summary["spearman_delta_sharpness"] = stats::spearman(deltas, sharp);
}

int run_tail_test(const json& cfg, const std::string& out_dir, const std::string& prefix,
                  std::uint64_t seed, json& summary, CheckList& checks) {
  const auto n = cfg.at("n_samples").get<std::size_t>();
  const int n_seeds = cfg.at("n_seeds");
  CsvWriter w(out_path(out_dir, prefix + ".csv"));
  w.row({"distribution", "seed", "kurtosis", "hill_index", "analytic", "empirical", "agree"});
  bool all_agree = true;
  std::uint64_t stream = 0;
  for (const auto& name : cfg.at("distributions")) {
    const auto dist = NoiseDistribution::from_name(name, 1);
    const auto analytic = classify_tail(dist);
    for (int s = 0; s < n_seeds; ++s) {
      const auto draws = sample(dist, n, Rng::derive(seed, stream++));
      const auto emp = empirical_tail_test(draws);
      const bool agree = emp.label == analytic.label;
      all_agree = all_agree && agree;
      const auto lbl = [](TailLabel l) { return l == TailLabel::Light ? "light" : "heavy"; };
      w.row({name, std::to_string(s), format_double(emp.kurtosis),
             format_double(emp.hill_index), lbl(analytic.label), lbl(emp.label),
             agree ? "1" : "0"});
    }
  }
  summary["families"] = cfg.at("distributions").size();
  checks.add("empirical_matches_analytic", all_agree);
  return kExitOk;
}

int run_compare(const json& cfg, const std::string& out_dir, const std::string& prefix,
                std::uint64_t seed, json& summary, CheckList& checks, int workers) {
  const auto obj = objective_by_id(cfg.value("objective", "rastrigin"));
  const auto fs = make_finite_sum(obj, cfg.at("n_components"), cfg.at("spread"),
                                  Rng::derive(seed, 0xC0));
  const double gamma = cfg.value("gamma", 1.0 / std::sqrt(2.0));
  const int phases = cfg.at("phases");
  const long t1 = cfg.at("t1");
  const int b1 = cfg.at("b1");
  const double eta1 = cfg.at("eta1");
  const long phase_budget = t1 * b1;  // gradient evaluations per phase

  std::vector<std::string> names;
  std::vector<Schedule> schedules;
  std::vector<long> budgets;
  for (const auto& pname : cfg.at("presets")) {
    const auto [kappa, lambda] = preset_multipliers(preset_from_name(pname), gamma);
    Schedule sch;
    double eta = eta1, b_real = b1;
    long total = 0;
    for (int m = 0; m < phases; ++m) {
      const int b = std::max(1, static_cast<int>(std::lround(b_real)));
      const long T = std::max(1L, std::lround(static_cast<double>(phase_budget) / b));
      sch.phases.push_back({eta, b, T, 0.0});
      total += T * b;
      eta *= kappa;
      b_real *= lambda;
    }
    names.push_back(pname);
    schedules.push_back(sch);
    budgets.push_back(total);
  }
  const long b_min = *std::min_element(budgets.begin(), budgets.end());
  const long b_max = *std::max_element(budgets.begin(), budgets.end());
  if (b_max - b_min > b_max / 100) {
    std::cerr << "config error: total gradient-evaluation budgets differ by more than 1% "
              << "across presets (" << b_min << " vs " << b_max << ")\n";
    return kExitConfigError;
  }

  const int n_seeds = cfg.at("n_seeds");
  const double x1 = cfg.at("x1");
  const std::size_t cells = names.size() * static_cast<std::size_t>(n_seeds);
  std::vector<double> finals(cells, std::numeric_limits<double>::quiet_NaN());
  parallel_for(cells, workers, [&](std::size_t i) {
    const std::size_t mi = i / n_seeds;
    const std::size_t si = i % n_seeds;
    std::vector<double> start{x1};
    try {
      const auto tr = sgd_run(fs, start, schedules[mi], Rng::derive(seed, 0xE0 + i),
                              schedules[mi].phases.back().iters * phases);
      finals[i] = tr.final_value;
    } catch (const DivergenceError&) {
      // NaN marks the diverged cell in the CSV
    }
  });

  CsvWriter w(out_path(out_dir, prefix + ".csv"));
  w.row({"method", "seed", "final_value"});
  for (std::size_t mi = 0; mi < names.size(); ++mi)
    for (int s = 0; s < n_seeds; ++s)
      w.row({names[mi], std::to_string(s), format_double(finals[mi * n_seeds + s])});

  auto& methods = summary["methods"] = json::array();
  for (std::size_t mi = 0; mi < names.size(); ++mi) {
    std::span<const double> vals(finals.data() + mi * n_seeds, n_seeds);
    methods.push_back({{"name", names[mi]},
                       {"mean", stats::mean(vals)},
                       {"min", *std::min_element(vals.begin(), vals.end())},
                       {"max", *std::max_element(vals.begin(), vals.end())},
                       {"total_evals", budgets[mi]}});
  }
  // pairwise bootstrap comparison of mean final values
  if (names.size() >= 2) {
    auto& order = summary["partial_order"] = json::array();
    Rng boot(Rng::derive(seed, 0xB007));
    for (std::size_t a = 0; a < names.size(); ++a)
      for (std::size_t b = a + 1; b < names.size(); ++b) {
        int wins = 0;
        const int resamples = 1000;
        for (int r = 0; r < resamples; ++r) {
          double ma = 0.0, mb = 0.0;
          for (int s = 0; s < n_seeds; ++s) {
            ma += finals[a * n_seeds + boot.next_u64() % n_seeds];
            mb += finals[b * n_seeds + boot.next_u64() % n_seeds];
          }
          if (ma < mb) ++wins;
        }
        const double p_a_better = static_cast<double>(wins) / resamples;
        order.push_back({{"a", names[a]},
                         {"b", names[b]},
                         {"p_a_better", p_a_better},
                         {"significant", p_a_better >= 0.95 || p_a_better <= 0.05}});
      }
  }
  checks.add("all_runs_finished", std::none_of(finals.begin(), finals.end(),
                                               [](double v) { return std::isnan(v); }));
  return kExitOk;
}

}  // namespace

std::optional<std::string> validate_config(const json& cfg) {
  if (!cfg.is_object()) return "config root must be an object";
  if (!cfg.contains("kind") || !cfg.at("kind").is_string())
    return "field 'kind': required string";
  const std::string kind = cfg.at("kind");
  const auto it = schemas().find(kind);
  if (it == schemas().end()) return "field 'kind': unknown experiment kind '" + kind + "'";
  for (const auto& f : it->second) {
    if (!cfg.contains(f.name)) {
      if (f.required) return std::string("field '") + f.name + "': required " + type_name(f.type);
      continue;
    }
    if (!type_ok(cfg.at(f.name), f.type))
      return std::string("field '") + f.name + "': expected " + type_name(f.type);
  }
  for (const auto& [key, val] : cfg.items()) {
    if (key == "kind" || key == "seed" || key == "prefix" || key == "workers") {
      if (key == "seed" && (!val.is_number_integer() || val.get<long long>() < 0))
        return "field 'seed': expected non-negative integer";
      if (key == "prefix" && !val.is_string()) return "field 'prefix': expected string";
      if (key == "workers" && !val.is_number_integer()) return "field 'workers': expected integer";
      continue;
    }
    bool known = false;
    for (const auto& f : it->second) known = known || key == f.name;
    if (!known) return "field '" + key + "': unknown key for kind '" + kind + "'";
  }
  return std::nullopt;
}

int run_experiment(json cfg, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override) {
  if (const auto err = validate_config(cfg)) {
    std::cerr << "config error: " << *err << '\n';
    return kExitConfigError;
  }
  if (seed_override) cfg["seed"] = *seed_override;
  if (!cfg.contains("seed")) cfg["seed"] = 12345u;
  const std::string kind = cfg.at("kind");
  std::string default_prefix = kind;
  for (auto& ch : default_prefix)
    if (ch == '-') ch = '_';
  if (!cfg.contains("prefix")) cfg["prefix"] = default_prefix;
  if (!cfg.contains("workers")) cfg["workers"] = 1;
  const std::string prefix = cfg.at("prefix");
  const std::uint64_t seed = cfg.at("seed");
  const int workers = cfg.at("workers");

  // the manifest is the fully resolved config; re-running it reproduces the CSVs
  try {
    write_json(out_path(out_dir, prefix + "_manifest.json"), cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  json summary;
  summary["config"] = cfg;
  CheckList checks;
  const auto t0 = std::chrono::steady_clock::now();
  int status = kExitOk;
  try {
    if (kind == "smooth-sweep") {
      run_smooth_sweep(cfg, out_dir, prefix, seed, summary, checks);
    } else if (kind == "equivalence") {
      run_equivalence(cfg, out_dir, prefix, seed, summary, checks);
    } else if (kind == "graduated") {
      status = run_graduated(cfg, out_dir, prefix, seed, summary, checks);
    } else if (kind == "variance") {
      status = run_variance(cfg, out_dir, prefix, seed, summary, checks);
    } else if (kind == "sharpness-sweep") {
      run_sharpness_sweep(cfg, out_dir, prefix, seed, summary);
    } else if (kind == "tail-test") {
      status = run_tail_test(cfg, out_dir, prefix, seed, summary, checks);
    } else if (kind == "compare") {
      status = run_compare(cfg, out_dir, prefix, seed, summary, checks, workers);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitPropertyFailure;
  }
  summary["checks"] = checks.checks;
  summary["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(out_path(out_dir, prefix + "_summary.json"), summary);
  if (status != kExitOk) return status;
  return checks.all_ok ? kExitOk : kExitPropertyFailure;
}

namespace {

std::optional<json> load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "config error: cannot open " << path << '\n';
    return std::nullopt;
  }
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int run_experiment_file(const std::string& config_path, const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override) {
  const auto cfg = load_config(config_path);
  if (!cfg) return kExitConfigError;
  return run_experiment(*cfg, out_dir, seed_override);
}

int validate_config_file(const std::string& config_path) {
  const auto cfg = load_config(config_path);
  if (!cfg) return kExitConfigError;
  if (const auto err = validate_config(*cfg)) {
    std::cerr << "config error: " << *err << '\n';
    return kExitConfigError;
  }
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace igo
