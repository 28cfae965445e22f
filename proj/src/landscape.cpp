#include "motifbp/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "motifbp/errors.hpp"
#include "motifbp/rng.hpp"

namespace motifbp {

namespace {

constexpr std::size_t kPartner[3][2] = {{1, 2}, {0, 2}, {0, 1}};

Messages uniform_box(Rng& rng, std::size_t n_triangles, double lo, double hi) {
  Messages m(n_triangles, lo);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// Lower end of the sampling box; kept strictly below 1 so [x*, 1) is non-empty.
double box_floor(double xstar) { return std::clamp(xstar, 0.0, 1.0 - 1e-9); }

}  // namespace

double g_function(double x, double h, std::size_t effective_degree, double theta, double c) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("g_function needs x in (0, 1)");
  const double f = std::tanh(h + static_cast<double>(effective_degree) * std::atanh(theta * x * x));
  if (f == 0.0) throw DomainError("g_function: surrogate f(x) is zero");
  return 1.0 / x + x - 2.0 * f * (1.0 + c * (1.0 - x / f));
}

XStarEstimate estimate_xstar(const Instance& instance, const XStarOptions& options) {
  if (options.grid_points < 2) throw InvalidInput("x* grid needs at least 2 points");
  XStarEstimate est;
  if (options.c_override) est.c_policy = "override";
  const std::size_t n_grid = options.grid_points;

  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    const Triangle& tri = instance.triangle(t);
    for (std::size_t p = 0; p < 3; ++p) {
      PairRoot pr;
      pr.pair = {t, p};
      const VertexId i = tri.vertices[p];
      const double qi = static_cast<double>(instance.incidence(i).size());
      const double qj = static_cast<double>(std::max(instance.incidence(tri.vertices[kPartner[p][0]]).size(),
                                                     instance.incidence(tri.vertices[kPartner[p][1]]).size()));
      pr.effective_degree = instance.incidence(i).size() - 1;
      pr.theta = tri.theta;
      pr.field = instance.beta() * instance.field(i);
      pr.c = options.c_override.value_or(2.0 / std::sqrt(qi * qj));

      const bool degenerate = pr.theta <= 0.0 || (pr.effective_degree == 0 && pr.field == 0.0);
      if (!degenerate) {
        auto g = [&](double x) { return g_function(x, pr.field, pr.effective_degree, pr.theta, pr.c); };
        // grid x_k = k / (n_grid + 1), k = 1..n_grid
        std::vector<double> xs(n_grid), gs(n_grid);
        for (std::size_t k = 0; k < n_grid; ++k) {
          xs[k] = static_cast<double>(k + 1) / static_cast<double>(n_grid + 1);
          gs[k] = g(xs[k]);
        }
        std::optional<std::size_t> bracket;
        for (std::size_t k = 0; k + 1 < n_grid; ++k) {
          if ((gs[k] > 0.0) != (gs[k + 1] > 0.0)) pr.sign_changes.push_back(0.5 * (xs[k] + xs[k + 1]));
        }
        for (std::size_t k = n_grid - 1; k-- > 0;) {
          if (gs[k] > 0.0 && gs[k + 1] <= 0.0) {
            bracket = k;
            break;
          }
        }
        if (bracket) {
          double lo = xs[*bracket], hi = xs[*bracket + 1];
          while (hi - lo > options.bisection_tol) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
          }
          pr.root = 0.5 * (lo + hi);
        }
      }
      est.value = std::max(est.value, pr.root);
      est.per_pair.push_back(std::move(pr));
    }
  }
  return est;
}

std::string to_string(Region region) {
  switch (region) {
    case Region::pre_fixpoint: return "pre_fixpoint";
    case Region::post_fixpoint: return "post_fixpoint";
    case Region::fixed_point: return "fixed_point";
    case Region::neither: return "neither";
  }
  return "neither";
}

RegionLabel classify_point(const Instance& instance, const Messages& messages, double xstar, double tol) {
  const Messages phi = bp_map(instance, messages);
  RegionLabel label;
  for (std::size_t e = 0; e < messages.size(); ++e) {
    const bool pre_ok = xstar <= phi[e] && phi[e] <= messages[e] + tol;
    const bool post_ok = xstar <= messages[e] && messages[e] <= phi[e] + tol;
    if (!pre_ok && !label.pre_witness) label.pre_witness = e;
    if (!post_ok && !label.post_witness) label.post_witness = e;
  }
  const bool pre = !label.pre_witness, post = !label.post_witness;
  label.region = pre && post ? Region::fixed_point
                 : pre       ? Region::pre_fixpoint
                 : post      ? Region::post_fixpoint
                             : Region::neither;
  return label;
}

AuditReport gradient_sign_audit(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed) {
  AuditReport report;
  Rng rng(seed);
  const std::size_t nt = instance.n_triangles();
  const double lo = box_floor(xstar);

  BPConfig cfg;
  cfg.record_trace = true;
  const BPRunResult run = run_bp(instance, cfg);
  const std::vector<Messages>& trajectory = *run.message_trace;
  const Messages& fixed = run.final_messages;

  for (std::size_t s = 0; s < samples; ++s) {
    Messages point(nt, 0.0);
    switch (s % 5) {
      case 0:
        point = uniform_box(rng, nt, lo, 1.0);
        break;
      case 1:
        point = trajectory[rng.index(trajectory.size())];
        break;
      case 2:  // between the fixed point and 1, per coordinate
        for (std::size_t e = 0; e < point.size(); ++e) point[e] = fixed[e] + rng.uniform01() * (1.0 - fixed[e]);
        break;
      case 3: {  // scalar step from the floor towards the fixed point
        const double w = rng.uniform01();
        for (std::size_t e = 0; e < point.size(); ++e) point[e] = lo + w * (std::max(fixed[e], lo) - lo);
        break;
      }
      default:  // per coordinate, below the fixed point
        for (std::size_t e = 0; e < point.size(); ++e) point[e] = lo + rng.uniform01() * (std::max(fixed[e], lo) - lo);
        break;
    }
    ++report.samples;
    const RegionLabel label = classify_point(instance, point, xstar, kAuditClassifyTol);
    if (label.region == Region::neither) {
      ++report.neither;
      continue;
    }
    const DualGradient grad = dual_gradient(instance, point);
    const bool as_pre = label.region != Region::post_fixpoint;
    const bool as_post = label.region != Region::pre_fixpoint;
    for (double g : grad.values) {
      if (as_pre) report.max_pre_violation = std::max(report.max_pre_violation, g);
      if (as_post) report.max_post_violation = std::max(report.max_post_violation, -g);
    }
    switch (label.region) {
      case Region::pre_fixpoint: ++report.pre; break;
      case Region::post_fixpoint: ++report.post; break;
      default: ++report.fixed; break;
    }
  }
  report.passed = report.max_pre_violation <= kAuditSignTol && report.max_post_violation <= kAuditSignTol;
  return report;
}

FixedPointCensus fixed_point_census(const Instance& instance, std::size_t n_inits, std::uint64_t seed,
                                    const BPConfig& bp_config, double xstar) {
  FixedPointCensus census;
  Rng rng(seed);
  const std::size_t nt = instance.n_triangles();

  struct Start {
    std::string label;
    Messages messages;
  };
  std::vector<Start> starts;
  starts.push_back({"ones", init_messages(instance, 1.0)});
  for (std::size_t k = 0; k < n_inits; ++k) starts.push_back({"unit#" + std::to_string(k), uniform_box(rng, nt, 0.0, 1.0)});
  for (std::size_t k = 0; k < n_inits; ++k) {
    starts.push_back({"signed#" + std::to_string(k), uniform_box(rng, nt, -1.0, 1.0)});
  }

  BPConfig cfg = bp_config;
  cfg.record_trace = false;
  std::vector<CensusPoint> points;
  std::optional<std::size_t> ones_index;
  for (Start& start : starts) {
    ++census.runs;
    BPRunResult run = run_bp(instance, cfg, std::move(start.messages));
    const double residual = run.converged ? max_abs_diff(bp_map(instance, run.final_messages), run.final_messages) : 1.0;
    if (!run.converged || residual > kCensusResidualTol) {
      ++census.nonconverged;
      continue;
    }
    auto same = std::find_if(points.begin(), points.end(), [&](const CensusPoint& p) {
      return max_abs_diff(p.messages, run.final_messages) <= kCensusDedupTol;
    });
    if (same == points.end()) {
      CensusPoint p;
      p.messages = std::move(run.final_messages);
      p.residual = residual;
      p.dual_nu = dual_free_energy_nu(instance, p.messages);
      p.dual_lambda = dual_free_energy_lambda(instance, p.messages);
      p.in_region = p.messages.size() == 0 || p.messages.min() >= xstar;
      points.push_back(std::move(p));
      same = points.end() - 1;
    }
    same->reached_from.push_back(start.label);
    if (start.label == "ones") ones_index = static_cast<std::size_t>(same - points.begin());
  }

  if (ones_index) {
    const Messages& top = points[*ones_index].messages;
    const double top_nu = points[*ones_index].dual_nu;
    for (CensusPoint& p : points) {
      p.dominated = true;
      for (std::size_t e = 0; e < p.messages.size(); ++e) {
        if (p.messages[e] > top[e] + kDominanceSlack) p.dominated = false;
      }
      if (p.in_region && !p.dominated) census.dominance_holds = false;
      census.max_dual_nu_gap = std::max(census.max_dual_nu_gap, p.dual_nu - top_nu);
    }
    census.optimal = census.max_dual_nu_gap <= kOptimalityTol;
  } else {
    census.dominance_holds = false;
  }

  std::stable_sort(points.begin(), points.end(), [](const CensusPoint& a, const CensusPoint& b) {
    if (a.dual_nu != b.dual_nu) return a.dual_nu > b.dual_nu;
    return std::lexicographical_compare(a.messages.values().begin(), a.messages.values().end(),
                                        b.messages.values().begin(), b.messages.values().end());
  });
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& from = points[k].reached_from;
    if (std::find(from.begin(), from.end(), "ones") != from.end()) census.dominant = k;
  }
  census.fixed_points = std::move(points);
  return census;
}

DualGradient finite_diff_gradient(const Instance& instance, const Messages& messages, double step) {
  if (!(step > 0.0)) throw DomainError("finite difference step must be positive");
  for (double v : messages.values()) {
    if (std::abs(v) > 1.0 - 2.0 * step) throw DomainError("finite difference step too large for the message domain");
  }
  DualGradient grad;
  grad.values.resize(messages.size());
  Messages probe = messages;
  for (std::size_t e = 0; e < messages.size(); ++e) {
    probe[e] = messages[e] + step;
    const double up = dual_free_energy_nu(instance, probe);
    probe[e] = messages[e] - step;
    const double down = dual_free_energy_nu(instance, probe);
    probe[e] = messages[e];
    grad.values[e] = (up - down) / (2.0 * step);
  }
  return grad;
}

ProbeReport monotonicity_probe(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed) {
  ProbeReport r;
  Rng rng(seed);
  const double lo = box_floor(xstar);
  for (std::size_t s = 0; s < samples; ++s) {
    const Messages y = uniform_box(rng, instance.n_triangles(), lo, 1.0);
    Messages x = y;
    for (std::size_t e = 0; e < x.size(); ++e) x[e] = y[e] + rng.uniform01() * (1.0 - y[e]);
    const Messages fx = bp_map(instance, x), fy = bp_map(instance, y);
    double shortfall = 0.0;
    for (std::size_t e = 0; e < x.size(); ++e) shortfall = std::max(shortfall, fy[e] - fx[e]);
    ++r.samples;
    r.worst = std::max(r.worst, shortfall);
    if (shortfall > kProbeTol) ++r.violations;
  }
  return r;
}

ProbeReport concavity_probe(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed) {
  ProbeReport r;
  Rng rng(seed);
  const double lo = box_floor(xstar);
  for (std::size_t s = 0; s < samples; ++s) {
    const Messages x = uniform_box(rng, instance.n_triangles(), lo, 1.0);
    const Messages y = uniform_box(rng, instance.n_triangles(), lo, 1.0);
    const double t = rng.uniform01();
    Messages mid = x;
    for (std::size_t e = 0; e < mid.size(); ++e) mid[e] = t * x[e] + (1.0 - t) * y[e];
    const Messages fx = bp_map(instance, x), fy = bp_map(instance, y), fm = bp_map(instance, mid);
    double shortfall = 0.0;
    for (std::size_t e = 0; e < mid.size(); ++e) shortfall = std::max(shortfall, t * fx[e] + (1.0 - t) * fy[e] - fm[e]);
    ++r.samples;
    r.worst = std::max(r.worst, shortfall);
    if (shortfall > kProbeTol) ++r.violations;
  }
  return r;
}

}  // namespace motifbp
