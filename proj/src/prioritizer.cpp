#include "mbrc/prioritizer.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "mbrc/errors.hpp"

namespace mbrc {

std::string_view to_string(PrioritizerMode mode) { return mode == PrioritizerMode::kExact ? "exact" : "lazy"; }

std::optional<PrioritizerMode> parse_mode(std::string_view text) {
  if (text == "exact") return PrioritizerMode::kExact;
  if (text == "lazy") return PrioritizerMode::kLazy;
  return std::nullopt;
}

double RestorationPlan::total_cost() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.action.cost;
  return sum;
}

std::vector<CandidateAction> enumerate_candidates(const Scenario& s, const SpeciesDerivation& species) {
  for (const auto& t : s.technologies) {
    for (auto c : t.from_classes)
      if (!s.is_known_class(c))
        throw InputError(package_paths::kTechnologies,
                         "technology " + t.technology_id + " references unknown habitat class " + std::to_string(c));
    if (!s.is_known_class(t.to_class))
      throw InputError(package_paths::kTechnologies,
                       "technology " + t.technology_id + " references unknown habitat class " + std::to_string(t.to_class));
  }

  std::vector<std::vector<std::uint32_t>> cell_species(s.grid.cell_count());
  for (std::size_t k = 0; k < species.size(); ++k)
    for (auto cell : species.domains[k]) cell_species[static_cast<std::size_t>(cell)].push_back(static_cast<std::uint32_t>(k));

  const DecisionGrid grid(s);
  std::vector<CandidateAction> out;
  std::vector<std::int32_t> acc(species.size(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t block = 0; block < grid.block_count(); ++block) {
    for (std::size_t t = 0; t < s.technologies.size(); ++t) {
      const auto& tech = s.technologies[t];
      const auto cells = convertible_cells(s, grid, s.current_classes, static_cast<std::int64_t>(block), t);
      if (cells.empty()) continue;
      const auto& cost_layer = s.cost_layer(tech);
      CandidateAction a;
      a.cell_id = static_cast<std::int64_t>(block);
      a.technology = static_cast<std::uint32_t>(t);
      a.technology_id = tech.technology_id;
      touched.clear();
      for (auto cell : cells) {
        const auto idx = static_cast<std::size_t>(cell);
        a.cost += cost_layer[idx];
        const ClassCode pre = s.current_classes[idx];
        for (auto k : cell_species[idx]) {
          const auto& sp = s.species[species.catalog_index[k]];
          const int d = static_cast<int>(sp.suits(tech.to_class)) - static_cast<int>(sp.suits(pre));
          if (d == 0) continue;
          if (acc[k] == 0) touched.push_back(k);
          acc[k] += d;
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto k : touched) {
        if (acc[k] != 0) a.species_deltas.push_back({k, acc[k]});
        acc[k] = 0;
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<CandidateAction> enumerate_candidates(const Scenario& scenario) {
  return enumerate_candidates(scenario, derive_species_states(scenario));
}

PreparedScenario prepare(const Scenario& scenario) {
  PreparedScenario p;
  p.scenario = &scenario;
  p.species = derive_species_states(scenario);
  p.candidates = enumerate_candidates(scenario, p.species);
  return p;
}

void apply_action_in_place(std::span<std::int64_t> habitat, std::span<const std::int64_t> potential,
                           const CandidateAction& action) {
  for (const auto& d : action.species_deltas) {
    if (d.species >= habitat.size()) throw DomainError("action refers to an unknown species");
    const auto h = habitat[d.species] + d.delta;
    if (h < 0 || h > potential[d.species]) throw DomainError("action moves habitat outside [0, OH]");
  }
  for (const auto& d : action.species_deltas) habitat[d.species] += d.delta;
}

std::vector<SpeciesState> apply_action(std::vector<SpeciesState> states, const CandidateAction& action) {
  std::vector<std::int64_t> h, oh;
  for (const auto& s : states) {
    h.push_back(s.habitat);
    oh.push_back(s.potential);
  }
  apply_action_in_place(h, oh, action);
  for (std::size_t i = 0; i < states.size(); ++i) states[i].habitat = h[i];
  return states;
}

CandidateAction reversed(const CandidateAction& action) {
  CandidateAction r = action;
  for (auto& d : r.species_deltas) d.delta = -d.delta;
  return r;
}

Raster<ClassCode> classes_after(const Scenario& scenario, std::span<const RestorationStep> steps) {
  const DecisionGrid grid(scenario);
  auto classes = scenario.current_classes;
  for (const auto& st : steps) apply_technology(scenario, grid, classes, st.action.cell_id, st.action.technology);
  return classes;
}

namespace {

class Sequencer {
 public:
  Sequencer(const PreparedScenario& p, std::vector<CandidateAction> candidates, double z, const SequenceOptions& opt)
      : cands_(std::move(candidates)),
        opt_(opt),
        habitat_(p.species.habitat()),
        potential_(p.species.potential()),
        alive_(cands_.size(), 1),
        scores_(cands_.size()) {
    plan_.z = z;
    plan_.n_species = p.species.size();
    plan_.baseline_index = biodiversity_index(p.species.states, z).value;
    index_ = plan_.baseline_index;
    const DecisionGrid grid(*p.scenario);
    by_block_.resize(grid.block_count());
    for (std::size_t i = 0; i < cands_.size(); ++i) by_block_[static_cast<std::size_t>(cands_[i].cell_id)].push_back(i);
  }

  RestorationPlan run() {
    if (opt_.mode == PrioritizerMode::kExact)
      run_exact();
    else
      run_lazy();
    plan_.final_index = index_;
    plan_.final_habitat = habitat_;
    if (opt_.target && index_ < *opt_.target - kIndexEpsilon) throw TargetUnreachable(*opt_.target, index_);
    return std::move(plan_);
  }

 private:
  HabitatView view() const { return {habitat_, potential_, plan_.z, plan_.n_species}; }

  bool reached() const { return opt_.target && index_ >= *opt_.target - kIndexEpsilon; }

  void execute(std::size_t i) {
    const auto& a = cands_[i];
    apply_action_in_place(habitat_, potential_, a);
    index_ += scores_[i].marginal_benefit;
    plan_.steps.push_back({a, scores_[i].marginal_benefit, scores_[i].ce.as_double(), index_});
    for (auto j : by_block_[static_cast<std::size_t>(a.cell_id)]) alive_[j] = 0;
  }

  void run_exact() {
    while (!reached()) {
      std::optional<std::size_t> best;
      if (opt_.parallel) {
        kernels::score_all_parallel(cands_, alive_, view(), scores_);
        best = kernels::select_best_parallel(cands_, alive_, scores_);
      } else {
        kernels::score_all_serial(cands_, alive_, view(), scores_);
        best = kernels::select_best_serial(cands_, alive_, scores_);
      }
      if (!best) break;
      execute(*best);
    }
  }

  struct Entry {
    CandidateScore score;
    std::uint32_t candidate;
    std::uint32_t version;
  };

  void rescore(std::size_t i) {
    scores_[i] = score_candidate(cands_[i], view());
    scored_at_[i] = epoch_;
    ++version_[i];
    if (is_eligible(scores_[i])) heap_.push({scores_[i], static_cast<std::uint32_t>(i), version_[i]});
  }

  bool stale(std::size_t i) const {
    for (const auto& d : cands_[i].species_deltas)
      if (changed_at_[d.species] > scored_at_[i]) return true;
    return false;
  }

  void run_lazy() {
    const std::size_t n = cands_.size();
    version_.assign(n, 0);
    scored_at_.assign(n, 0);
    changed_at_.assign(plan_.n_species, 0);
    gains_.assign(plan_.n_species, {});
    losses_.assign(plan_.n_species, {});
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& d : cands_[i].species_deltas) (d.delta > 0 ? gains_ : losses_)[d.species].push_back(i);

    if (opt_.parallel)
      kernels::score_all_parallel(cands_, alive_, view(), scores_);
    else
      kernels::score_all_serial(cands_, alive_, view(), scores_);
    for (std::size_t i = 0; i < n; ++i)
      if (is_eligible(scores_[i])) heap_.push({scores_[i], static_cast<std::uint32_t>(i), 0});

    while (!reached() && !heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      const std::size_t i = top.candidate;
      if (!alive_[i] || top.version != version_[i]) continue;
      if (stale(i)) {
        rescore(i);
        continue;
      }
      execute(i);
      ++epoch_;
      // A species gaining habitat makes the losses of other candidates on it
      // less severe, and a species losing habitat makes gains on it worth
      // more. Those keys may have risen, so they are refreshed now; all
      // other affected keys can only have fallen and stay valid bounds.
      for (const auto& d : cands_[i].species_deltas) {
        changed_at_[d.species] = epoch_;
        for (auto j : (d.delta > 0 ? losses_ : gains_)[d.species])
          if (alive_[j]) rescore(j);
      }
    }
  }

  std::vector<CandidateAction> cands_;
  SequenceOptions opt_;
  std::vector<std::int64_t> habitat_;
  std::vector<std::int64_t> potential_;
  std::vector<std::uint8_t> alive_;
  std::vector<CandidateScore> scores_;
  std::vector<std::vector<std::size_t>> by_block_;
  RestorationPlan plan_;
  double index_ = 0.0;

  // lazy-mode bookkeeping
  struct HeapOrder {
    const Sequencer* self;
    bool operator()(const Entry& a, const Entry& b) const {
      return ranks_before(self->cands_[b.candidate], b.score, self->cands_[a.candidate], a.score);
    }
  };

  std::uint64_t epoch_ = 0;
  std::vector<std::uint32_t> version_;
  std::vector<std::uint64_t> scored_at_;
  std::vector<std::uint64_t> changed_at_;
  std::vector<std::vector<std::size_t>> gains_;
  std::vector<std::vector<std::size_t>> losses_;
  std::priority_queue<Entry, std::vector<Entry>, HeapOrder> heap_{HeapOrder{this}};
};

}  // namespace

RestorationPlan build_sequence(const PreparedScenario& prepared, double z, const SequenceOptions& options) {
  if (!prepared.scenario) throw DomainError("prepared scenario has no source scenario");
  if (!(z > 0.0 && z < 1.0)) throw DomainError("z must lie in (0, 1)");
  if (options.target && !(*options.target > 0.0 && *options.target <= 1.0))
    throw DomainError("target must lie in (0, 1]");
  if (prepared.species.size() == 0) throw DomainError("no species included; index undefined");

  std::vector<CandidateAction> candidates;
  if (options.technology) {
    const auto& techs = prepared.scenario->technologies;
    if (std::none_of(techs.begin(), techs.end(), [&](const TechnologySpec& t) { return t.technology_id == *options.technology; }))
      throw DomainError("unknown technology " + *options.technology);
    for (const auto& c : prepared.candidates)
      if (c.technology_id == *options.technology) candidates.push_back(c);
  } else {
    candidates = prepared.candidates;
  }
  return Sequencer(prepared, std::move(candidates), z, options).run();
}

RestorationPlan build_sequence(const Scenario& scenario, double z, const SequenceOptions& options) {
  return build_sequence(prepare(scenario), z, options);
}

}  // namespace mbrc
