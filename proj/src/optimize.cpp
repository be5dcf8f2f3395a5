#include "cstirap/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace cstirap {

unsigned default_workers() {
  if (const char* env = std::getenv("CSTIRAP_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = default_workers();
  const std::size_t threads = std::min<std::size_t>(workers, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.axes.empty()) throw ValidationError("sweep needs at least one parameter axis");
  for (const SweepAxis& a : spec.axes) {
    if (!is_parameter(a.parameter)) throw ValidationError("unknown sweep parameter '" + a.parameter + "'");
    if (a.values.empty()) throw ValidationError("sweep axis '" + a.parameter + "' has no values");
    for (double v : a.values)
      if (!std::isfinite(v)) throw ValidationError("sweep axis '" + a.parameter + "' has a non-finite value");
  }
}

std::vector<SweepCell> sweep(const ScenarioPreset& preset, const SweepSpec& spec) {
  validate_sweep(spec);
  std::size_t total = 1;
  for (const SweepAxis& a : spec.axes) total *= a.values.size();

  std::vector<SweepCell> cells(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    std::vector<double> values(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& axis = spec.axes[k].values;
      values[k] = axis[rest % axis.size()];
      rest /= axis.size();
    }
    cells[i].values = std::move(values);
  }

  parallel_for(total, spec.workers, [&](std::size_t i) {
    SweepCell& cell = cells[i];
    try {
      ScenarioPreset local = preset;
      for (std::size_t k = 0; k < spec.axes.size(); ++k) set_parameter(local, spec.axes[k].parameter, cell.values[k]);
      cell.report = simulate(local).report;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  });
  return cells;
}

void validate_optimize(const OptimizeSpec& spec) {
  if (spec.parameters.empty()) throw ValidationError("optimize needs at least one free parameter");
  for (const FreeParameter& p : spec.parameters) {
    if (!is_parameter(p.name)) throw ValidationError("unknown optimize parameter '" + p.name + "'");
    if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.upper > p.lower))
      throw ValidationError("bounds of '" + p.name + "' must be finite with lower < upper");
    if (!(p.start >= p.lower && p.start <= p.upper))
      throw ValidationError("start of '" + p.name + "' lies outside its bounds");
    if (p.initial_step < 0.0) throw ValidationError("initial step of '" + p.name + "' must be >= 0");
  }
  if (!(spec.tolerance > 0.0)) throw ValidationError("optimize tolerance must be > 0");
  if (spec.rabi_cap && !(*spec.rabi_cap > 0.0)) throw ValidationError("Rabi cap must be > 0");
}

namespace {

struct Evaluation {
  double objective = 0.0;
  bool simulated = false;
  TransferReport report;
};

class Objective {
 public:
  Objective(const ScenarioPreset& preset, const OptimizeSpec& spec) : preset_(preset), spec_(spec) {}

  [[nodiscard]] std::vector<double> to_params(const std::vector<double>& u) const {
    std::vector<double> x(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const FreeParameter& p = spec_.parameters[k];
      x[k] = p.lower + std::clamp(u[k], 0.0, 1.0) * (p.upper - p.lower);
    }
    return x;
  }

  [[nodiscard]] Evaluation operator()(const std::vector<double>& u) const {
    Evaluation e;
    try {
      ScenarioPreset local = preset_;
      const std::vector<double> x = to_params(u);
      for (std::size_t k = 0; k < x.size(); ++k) set_parameter(local, spec_.parameters[k].name, x[k]);
      if (spec_.rabi_cap) {
        const double peak = max_omega_eff(local);
        if (peak > *spec_.rabi_cap) {
          e.objective = -1.0 - (peak - *spec_.rabi_cap) / *spec_.rabi_cap;
          return e;
        }
      }
      e.report = simulate(local).report;
      e.simulated = true;
      e.objective = e.report.efficiency.value;
    } catch (const std::exception&) {
      e.objective = -2.0;
    }
    return e;
  }

 private:
  const ScenarioPreset& preset_;
  const OptimizeSpec& spec_;
};

struct Vertex {
  std::vector<double> u;
  double cost = 0.0;  // minimized: -objective
};

}  // namespace

OptimizeResult optimize(const ScenarioPreset& preset, const OptimizeSpec& spec) {
  validate_optimize(spec);
  const std::size_t dim = spec.parameters.size();
  const Objective objective(preset, spec);

  OptimizeResult result;
  bool have_best = false;
  std::vector<double> best_u;

  auto record = [&](const std::vector<double>& u, Evaluation& e) {
    ++result.evaluations;
    if (!have_best || e.objective > result.best_objective) {
      have_best = true;
      result.best_objective = e.objective;
      result.report = std::move(e.report);
      best_u = u;
    }
  };
  auto evaluate_many = [&](std::vector<Vertex*> vertices) {
    std::vector<Evaluation> evals(vertices.size());
    parallel_for(vertices.size(), spec.workers, [&](std::size_t i) { evals[i] = objective(vertices[i]->u); });
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      vertices[i]->cost = -evals[i].objective;
      record(vertices[i]->u, evals[i]);
    }
  };
  auto evaluate_one = [&](Vertex& v) {
    Evaluation e = objective(v.u);
    v.cost = -e.objective;
    record(v.u, e);
  };
  auto finish = [&] {
    result.best = objective.to_params(best_u);
    return result;
  };

  std::vector<Vertex> simplex(dim + 1);
  for (std::size_t k = 0; k < dim; ++k) {
    const FreeParameter& p = spec.parameters[k];
    simplex[0].u.push_back((p.start - p.lower) / (p.upper - p.lower));
  }
  evaluate_one(simplex[0]);
  result.incumbents.push_back(result.best_objective);
  if (spec.max_evaluations <= result.evaluations) {
    result.budget_exhausted = true;
    return finish();
  }

  for (std::size_t k = 0; k < dim; ++k) {
    const FreeParameter& p = spec.parameters[k];
    const double step = (p.initial_step > 0.0 ? p.initial_step : 0.1 * (p.upper - p.lower)) / (p.upper - p.lower);
    simplex[k + 1].u = simplex[0].u;
    double& uk = simplex[k + 1].u[k];
    uk = uk + step <= 1.0 ? uk + step : uk - step;
  }
  {
    std::vector<Vertex*> rest;
    for (std::size_t i = 1; i <= dim; ++i) rest.push_back(&simplex[i]);
    if (result.evaluations + rest.size() > spec.max_evaluations) {
      result.budget_exhausted = true;
      return finish();
    }
    evaluate_many(rest);
  }

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double coef) {
    // a + coef * (a - b), clamped to the unit box
    std::vector<double> out(dim);
    for (std::size_t k = 0; k < dim; ++k) out[k] = std::clamp(a[k] + coef * (a[k] - b[k]), 0.0, 1.0);
    return out;
  };
  auto budget_left = [&](std::size_t needed) { return result.evaluations + needed <= spec.max_evaluations; };

  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.cost < b.cost; });
    result.incumbents.push_back(result.best_objective);

    double diameter = 0.0;
    for (std::size_t i = 1; i <= dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) diameter = std::max(diameter, std::abs(simplex[i].u[k] - simplex[0].u[k]));
    if (simplex.back().cost - simplex.front().cost <= spec.tolerance || diameter < 1e-9) {
      result.converged = true;
      break;
    }
    if (!budget_left(1)) {
      result.budget_exhausted = true;
      break;
    }
    ++result.iterations;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i].u[k] / static_cast<double>(dim);

    Vertex& worst = simplex.back();
    Vertex reflected{combine(centroid, worst.u, kReflect), 0.0};
    evaluate_one(reflected);

    if (reflected.cost < simplex.front().cost) {
      if (!budget_left(1)) {
        worst = reflected;
        continue;
      }
      Vertex expanded{combine(centroid, worst.u, kReflect * kExpand), 0.0};
      evaluate_one(expanded);
      worst = expanded.cost < reflected.cost ? expanded : reflected;
      continue;
    }
    if (reflected.cost < simplex[dim - 1].cost) {
      worst = reflected;
      continue;
    }
    if (!budget_left(1)) continue;
    const bool outside = reflected.cost < worst.cost;
    Vertex contracted{outside ? combine(centroid, worst.u, kReflect * kContract)
                              : combine(centroid, worst.u, -kContract),
                      0.0};
    evaluate_one(contracted);
    if (contracted.cost < std::min(reflected.cost, worst.cost)) {
      worst = contracted;
      continue;
    }
    if (outside && reflected.cost < worst.cost) worst = reflected;
    if (!budget_left(dim)) continue;
    std::vector<Vertex*> shrunk;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k)
        simplex[i].u[k] = simplex[0].u[k] + kShrink * (simplex[i].u[k] - simplex[0].u[k]);
      shrunk.push_back(&simplex[i]);
    }
    evaluate_many(shrunk);
  }
  return finish();
}

}  // namespace cstirap
