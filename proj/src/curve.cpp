#include "mbrc/curve.hpp"

#include <exception>

#include "mbrc/errors.hpp"
#include "mbrc/text.hpp"

namespace mbrc {

double MbrcCurve::total_cost() const noexcept {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.cost;
  return sum;
}

MbrcCurve build_curve(std::span<const RestorationStep> sequence, double baseline, double z) {
  MbrcCurve curve;
  curve.z_used = z;
  curve.baseline_index = baseline;
  double cumulative = baseline;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const auto& st = sequence[k];
    if (!(st.marginal_benefit > 0.0))
      throw DomainError("step " + std::to_string(k + 1) + " has non-positive index gain");
    cumulative += st.marginal_benefit;
    CurveStep c;
    c.step = k + 1;
    c.cell_id = st.action.cell_id;
    c.technology_id = st.action.technology_id;
    c.cost = st.action.cost;
    c.delta_index = st.marginal_benefit;
    c.cumulative_index = cumulative;
    c.mbrc = st.action.cost == 0.0 ? 0.0 : st.action.cost / st.marginal_benefit;
    curve.steps.push_back(std::move(c));
  }
  return curve;
}

MbrcCurve build_curve(const RestorationPlan& plan) { return build_curve(plan.steps, plan.baseline_index, plan.z); }

namespace {

// Index of the marginal step for `target`, or npos when target <= baseline.
std::size_t marginal_index(const MbrcCurve& curve, double target) {
  if (target <= curve.baseline_index + kIndexEpsilon) return static_cast<std::size_t>(-1);
  for (std::size_t k = 0; k < curve.steps.size(); ++k)
    if (curve.steps[k].cumulative_index >= target - kIndexEpsilon) return k;
  throw TargetUnreachable(target, curve.final_index());
}

}  // namespace

ShadowPriceQuote shadow_price(const MbrcCurve& curve, double target) {
  if (!(target > 0.0 && target <= 1.0)) throw DomainError("target must lie in (0, 1]");
  ShadowPriceQuote q;
  q.target = target;
  q.z = curve.z_used;
  const auto k = marginal_index(curve, target);
  if (k == static_cast<std::size_t>(-1)) {
    q.achieved_index = curve.baseline_index;
    return q;
  }
  const auto& st = curve.steps[k];
  q.price_per_unit_index = st.mbrc;
  q.price_per_pp = st.mbrc_per_pp();
  q.marginal_step = st.step;
  q.achieved_index = st.cumulative_index;
  return q;
}

double cost_to_reach(const MbrcCurve& curve, double target) {
  const auto k = marginal_index(curve, target);
  if (k == static_cast<std::size_t>(-1)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) sum += curve.steps[i].cost;
  return sum;
}

MbrcCurve lower_convex_envelope(const MbrcCurve& curve) {
  struct Point {
    double x, y;
  };
  std::vector<Point> pts{{curve.baseline_index, 0.0}};
  double y = 0.0;
  for (const auto& s : curve.steps) {
    y += s.cost;
    pts.push_back({s.cumulative_index, y});
  }
  // Andrew's monotone chain, lower hull only; x is strictly increasing.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2) {
      const auto& a = pts[hull[hull.size() - 2]];
      const auto& b = pts[hull.back()];
      const auto& c = pts[i];
      const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  MbrcCurve out = curve;
  out.smoothed = true;
  std::size_t seg = 0;
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    // step k spans points k -> k+1
    while (hull[seg + 1] < k + 1) ++seg;
    const auto& a = pts[hull[seg]];
    const auto& b = pts[hull[seg + 1]];
    out.steps[k].mbrc = (b.y - a.y) / (b.x - a.x);
  }
  return out;
}

MbrcCurve combined_curve(const PreparedScenario& prepared, double z, PrioritizerMode mode) {
  SequenceOptions opt;
  opt.mode = mode;
  return build_curve(build_sequence(prepared, z, opt));
}

std::map<std::string, MbrcCurve> per_technology_curves(const PreparedScenario& prepared, double z,
                                                       PrioritizerMode mode) {
  if (prepared.scenario->technologies.empty()) throw DomainError("scenario has no technologies");
  std::map<std::string, MbrcCurve> out;
  for (const auto& t : prepared.scenario->technologies) {
    SequenceOptions opt;
    opt.mode = mode;
    opt.technology = t.technology_id;
    out.emplace(t.technology_id, build_curve(build_sequence(prepared, z, opt)));
  }
  return out;
}

std::vector<SweepEntry> sweep_z(const PreparedScenario& prepared, const ZConfig& zconfig, double target,
                                PrioritizerMode mode) {
  zconfig.validate();
  if (!(target > 0.0 && target <= 1.0)) throw DomainError("target must lie in (0, 1]");
  const double zs[3] = {zconfig.low, zconfig.central, zconfig.high};
  std::vector<SweepEntry> out(3);
  std::exception_ptr failure[3];
#pragma omp parallel for schedule(static, 1)
  for (int i = 0; i < 3; ++i) {
    try {
      const auto curve = combined_curve(prepared, zs[i], mode);
      auto& e = out[static_cast<std::size_t>(i)];
      e.z = zs[i];
      e.baseline_index = curve.baseline_index;
      e.max_achievable_index = curve.final_index();
      if (target <= curve.final_index() + kIndexEpsilon) e.quote = shadow_price(curve, target);
    } catch (...) {
      failure[i] = std::current_exception();
    }
  }
  for (auto& f : failure)
    if (f) std::rethrow_exception(f);
  return out;
}

void write_curve_csv(std::ostream& out, const MbrcCurve& curve) {
  using text::format_double;
  out << "step,cell_id,technology_id,cost,delta_index,cumulative_index,mbrc,mbrc_per_pp\n";
  for (const auto& s : curve.steps) {
    out << s.step << ',' << s.cell_id << ',' << text::csv_field(s.technology_id) << ',' << format_double(s.cost) << ','
        << format_double(s.delta_index) << ',' << format_double(s.cumulative_index) << ',' << format_double(s.mbrc)
        << ',' << format_double(s.mbrc_per_pp()) << '\n';
  }
}

nlohmann::json to_json(const ShadowPriceQuote& q) {
  nlohmann::json j;
  j["target"] = q.target;
  j["z"] = q.z;
  j["price_per_unit_index"] = q.price_per_unit_index;
  j["price_per_pp"] = q.price_per_pp;
  j["marginal_step"] = q.marginal_step ? nlohmann::json(*q.marginal_step) : nlohmann::json(nullptr);
  j["achieved_index"] = q.achieved_index;
  return j;
}

}  // namespace mbrc
