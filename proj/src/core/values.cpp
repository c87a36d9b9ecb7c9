#include "core/values.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace uail {

namespace {

struct Ctx {
  const EnvClass& cls;
  const DiscountSchedule* discount = nullptr;
  const PlanLimits& limits;
  PlannerCache* cache = nullptr;
  const FuturePolicy* policy = nullptr;
  bool measures = false;
  uint64_t t0 = 1;
  uint64_t nodes = 0;
  std::vector<int32_t> path;

  bool memo() const { return cache != nullptr && policy == nullptr; }

  void count() {
    if (++nodes > limits.max_nodes)
      throw ResourceLimitError("planner exceeded " +
                               std::to_string(limits.max_nodes) + " nodes");
  }

  int32_t forced_action() const {
    return policy ? (*policy)(path) : int32_t{-1};
  }
};

std::string belief_key(const Belief& b, const Rat& total) {
  std::string k;
  for (size_t i = 0; i < b.masses.size(); ++i) {
    k += std::to_string(b.states[i]);
    k += ':';
    if (b.masses[i] == 0)
      k += '0';
    else
      k += rat_str(b.masses[i] / total);
    k += ';';
  }
  return k;
}

// One-step raw mixture masses v_e = sum_nu mu_nu nu(e | s_nu, a) from a
// belief, without dividing by the belief total.
std::vector<Rat> raw_step(const Ctx& ctx, const Belief& b, int32_t action) {
  std::vector<Rat> v(ctx.cls.n_percepts(), Rat(0));
  for (size_t i = 0; i < b.masses.size(); ++i) {
    if (b.masses[i] == 0) continue;
    for (const auto& tr : ctx.cls.members[i].rows[b.states[i]][action])
      v[tr.percept] += b.masses[i] * tr.prob;
  }
  return v;
}

Belief child_belief(const Ctx& ctx, const Belief& b, int32_t action,
                    int32_t percept) {
  Belief child = b;
  child.advance(ctx.cls, action, percept);
  return child;
}

void normalize_belief(Belief& b, const Rat& total) {
  for (auto& m : b.masses)
    if (m != 0) m /= total;
}

// ---------------------------------------------------------------------------
// Reward: expectimax on the discounted sum, truncated at the given depth.
// Beliefs are canonicalized to total mass 1 at every node, which makes the
// value a function of (states, posterior, depth) alone.
// ---------------------------------------------------------------------------

double reward_node(Ctx& ctx, const Belief& b, uint32_t depth_left,
                   uint64_t m_abs);

double reward_action(Ctx& ctx, const Belief& b, int32_t action,
                     uint32_t depth_left, uint64_t m_abs) {
  const std::vector<Rat> v = raw_step(ctx, b, action);
  const double w = ctx.discount->normalized_weight(ctx.t0, m_abs).get_d();
  double val = 0;
  for (size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    Belief child = child_belief(ctx, b, action, static_cast<int32_t>(e));
    const Rat p = v[e];  // parent is normalized, so this is the conditional
    normalize_belief(child, p);
    ctx.path.push_back(static_cast<int32_t>(e));
    const double cont = reward_node(ctx, child, depth_left - 1, m_abs + 1);
    ctx.path.pop_back();
    val += p.get_d() *
           (w * ctx.cls.percepts[e].reward.get_d() + cont);
  }
  return val;
}

double reward_node(Ctx& ctx, const Belief& b, uint32_t depth_left,
                   uint64_t m_abs) {
  if (depth_left == 0) return 0;
  ctx.count();
  std::string key;
  if (ctx.memo()) {
    key = "R|" + std::to_string(depth_left) + "|";
    if (!ctx.discount->is_geometric()) key += std::to_string(m_abs) + "|";
    key += belief_key(b, Rat(1));
    auto it = ctx.cache->values.find(key);
    if (it != ctx.cache->values.end()) return it->second;
  }
  double best;
  const int32_t forced = ctx.forced_action();
  if (forced >= 0) {
    best = reward_action(ctx, b, forced, depth_left, m_abs);
  } else {
    best = -1;
    for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
      best = std::max(best, reward_action(ctx, b, static_cast<int32_t>(a),
                                          depth_left, m_abs));
  }
  if (ctx.memo()) ctx.cache->values.emplace(std::move(key), best);
  return best;
}

// ---------------------------------------------------------------------------
// Information gain, measure-only fast path. For measure members the future
// survival mass of every branch is 1, so the per-step gains telescope and
// the value is linear in the (unnormalized) belief masses:
//
//   G(b) = max_a sum_e [ sum_nu mu'_nu (log2 nu(e) - log2 xinorm(e)) + G(b_e) ]
//
// Memoized on the normalized belief; G(b) = total(b) * G(b / total(b)).
// ---------------------------------------------------------------------------

double info_node_measures(Ctx& ctx, const Belief& b, uint32_t depth_left);

double info_action_measures(Ctx& ctx, const Belief& b, int32_t action,
                            uint32_t depth_left) {
  const std::vector<Rat> v = raw_step(ctx, b, action);
  // Measures: sum_e v_e equals the belief total (= 1 here), so the
  // normalized one-step conditional is v_e itself.
  double val = 0;
  for (size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    const double log_xinorm = std::log2(v[e].get_d());
    double gain = 0;
    for (size_t i = 0; i < b.masses.size(); ++i) {
      if (b.masses[i] == 0) continue;
      const Rat nu_e =
          ctx.cls.members[i].step_mass(b.states[i], action,
                                       static_cast<int32_t>(e));
      if (nu_e == 0) continue;
      const double mass = (b.masses[i] * nu_e).get_d();
      gain += mass * (std::log2(nu_e.get_d()) - log_xinorm);
    }
    Belief child = child_belief(ctx, b, action, static_cast<int32_t>(e));
    normalize_belief(child, v[e]);
    ctx.path.push_back(static_cast<int32_t>(e));
    const double sub = info_node_measures(ctx, child, depth_left - 1);
    ctx.path.pop_back();
    val += gain + v[e].get_d() * sub;
  }
  return val;
}

double info_node_measures(Ctx& ctx, const Belief& b, uint32_t depth_left) {
  if (depth_left == 0) return 0;
  ctx.count();
  std::string key;
  if (ctx.memo()) {
    key = "I|" + std::to_string(depth_left) + "|" + belief_key(b, Rat(1));
    auto it = ctx.cache->values.find(key);
    if (it != ctx.cache->values.end()) return it->second;
  }
  double best;
  const int32_t forced = ctx.forced_action();
  if (forced >= 0) {
    best = info_action_measures(ctx, b, forced, depth_left);
  } else {
    best = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
      best = std::max(best, info_action_measures(
                                ctx, b, static_cast<int32_t>(a), depth_left));
  }
  if (ctx.memo()) ctx.cache->values.emplace(std::move(key), best);
  return best;
}

// ---------------------------------------------------------------------------
// Information gain, literal path for semimeasure classes. Carries absolute
// member masses and per-member accumulated log ratios; a leaf contributes
// sum_nu mu_nu * c_nu. Exponential in the depth, so capped; the agent only
// needs this on classes with halting mass.
// ---------------------------------------------------------------------------

double info_node_literal(Ctx& ctx, const Belief& b, std::vector<double> cvec,
                         uint32_t depth_left);

double info_action_literal(Ctx& ctx, const Belief& b,
                           const std::vector<double>& cvec, int32_t action,
                           uint32_t depth_left) {
  const std::vector<Rat> v = raw_step(ctx, b, action);
  Rat step_total = 0;
  for (const auto& m : v) step_total += m;
  if (step_total == 0) return 0;  // mixture died: all leaf terms vanish
  double val = 0;
  for (size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    const double log_xinorm = std::log2((v[e] / step_total).get_d());
    std::vector<double> child_c = cvec;
    Belief child = b;
    for (size_t i = 0; i < b.masses.size(); ++i) {
      if (b.masses[i] == 0) continue;
      const Rat nu_e =
          ctx.cls.members[i].step_mass(b.states[i], action,
                                       static_cast<int32_t>(e));
      if (nu_e != 0)
        child_c[i] += std::log2(nu_e.get_d()) - log_xinorm;
    }
    child.advance(ctx.cls, action, static_cast<int32_t>(e));
    ctx.path.push_back(static_cast<int32_t>(e));
    val += info_node_literal(ctx, child, std::move(child_c), depth_left - 1);
    ctx.path.pop_back();
  }
  return val;
}

double info_node_literal(Ctx& ctx, const Belief& b, std::vector<double> cvec,
                         uint32_t depth_left) {
  if (depth_left == 0) {
    double leaf = 0;
    for (size_t i = 0; i < b.masses.size(); ++i)
      if (b.masses[i] != 0) leaf += b.masses[i].get_d() * cvec[i];
    return leaf;
  }
  ctx.count();
  const int32_t forced = ctx.forced_action();
  if (forced >= 0) return info_action_literal(ctx, b, cvec, forced, depth_left);
  double best = -std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
    best = std::max(best, info_action_literal(ctx, b, cvec,
                                              static_cast<int32_t>(a),
                                              depth_left));
  return best;
}

// ---------------------------------------------------------------------------
// Entropy of the joint future distribution. Under xi_norm the per-step
// chain rule applies and the recursion memoizes; under raw xi the weight of
// each -log2 term is the surviving future mass, so the accumulated code
// length c rides along and memoization is off.
// ---------------------------------------------------------------------------

double entropy_norm_node(Ctx& ctx, const Belief& b, uint32_t depth_left);

double entropy_norm_action(Ctx& ctx, const Belief& b, int32_t action,
                           uint32_t depth_left) {
  const std::vector<Rat> v = raw_step(ctx, b, action);
  Rat total = 0;
  for (const auto& m : v) total += m;
  if (total == 0)
    throw DeadEndError("normalization hit a zero-mass one-step map");
  double val = 0;
  for (size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    const double p = (v[e] / total).get_d();
    Belief child = child_belief(ctx, b, action, static_cast<int32_t>(e));
    normalize_belief(child, v[e]);
    ctx.path.push_back(static_cast<int32_t>(e));
    const double sub = entropy_norm_node(ctx, child, depth_left - 1);
    ctx.path.pop_back();
    val += p * (-std::log2(p) + sub);
  }
  return val;
}

double entropy_norm_node(Ctx& ctx, const Belief& b, uint32_t depth_left) {
  if (depth_left == 0) return 0;
  ctx.count();
  std::string key;
  if (ctx.memo()) {
    key = "E|" + std::to_string(depth_left) + "|" + belief_key(b, Rat(1));
    auto it = ctx.cache->values.find(key);
    if (it != ctx.cache->values.end()) return it->second;
  }
  double best;
  const int32_t forced = ctx.forced_action();
  if (forced >= 0) {
    best = entropy_norm_action(ctx, b, forced, depth_left);
  } else {
    best = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
      best = std::max(best, entropy_norm_action(
                                ctx, b, static_cast<int32_t>(a), depth_left));
  }
  if (ctx.memo()) ctx.cache->values.emplace(std::move(key), best);
  return best;
}

double entropy_raw_node(Ctx& ctx, const Belief& b, double c,
                        uint32_t depth_left);

double entropy_raw_action(Ctx& ctx, const Belief& b, double c, int32_t action,
                          uint32_t depth_left) {
  const std::vector<Rat> v = raw_step(ctx, b, action);
  double val = 0;
  for (size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    const double p = v[e].get_d();  // raw conditional: parent total is 1
    Belief child = child_belief(ctx, b, action, static_cast<int32_t>(e));
    normalize_belief(child, v[e]);
    ctx.path.push_back(static_cast<int32_t>(e));
    val += p * entropy_raw_node(ctx, child, c - std::log2(p), depth_left - 1);
    ctx.path.pop_back();
  }
  return val;
}

double entropy_raw_node(Ctx& ctx, const Belief& b, double c,
                        uint32_t depth_left) {
  if (depth_left == 0) return c;
  ctx.count();
  const int32_t forced = ctx.forced_action();
  if (forced >= 0) return entropy_raw_action(ctx, b, c, forced, depth_left);
  double best = -std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
    best = std::max(best, entropy_raw_action(ctx, b, c,
                                             static_cast<int32_t>(a),
                                             depth_left));
  return best;
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

struct RootPrep {
  Belief belief;
  Rat xinorm_mass;  // product of normalized step conditionals along h
};

RootPrep fold_with_normalizer(const EnvClass& cls, const History& h) {
  RootPrep prep{Belief::initial(cls), Rat(1)};
  for (const auto& step : h) {
    std::vector<Rat> v(cls.n_percepts(), Rat(0));
    for (size_t i = 0; i < prep.belief.masses.size(); ++i) {
      if (prep.belief.masses[i] == 0) continue;
      for (const auto& tr :
           cls.members[i].rows[prep.belief.states[i]][step.action])
        v[tr.percept] += prep.belief.masses[i] * tr.prob;
    }
    Rat total = 0;
    for (const auto& m : v) total += m;
    if (total == 0 || v[step.percept] == 0)
      throw DeadEndError("history has zero mass under the mixture");
    prep.xinorm_mass *= v[step.percept] / total;
    prep.belief.advance(cls, step.action, step.percept);
  }
  return prep;
}

uint32_t lifetime_to_depth(const History& h, uint64_t lifetime) {
  const uint64_t t = h.size() + 1;
  if (lifetime < t)
    throw SchemaError("lifetime m must be at least the current time t");
  return static_cast<uint32_t>(lifetime - t + 1);
}

PlanResult plan(Ctx& ctx, const ValueKind& kind, Belief root,
                const Rat& info_divisor, uint32_t depth) {
  if (depth > ctx.limits.max_depth)
    throw ResourceLimitError("plan depth exceeds cap");
  PlanResult res;
  res.action_values.assign(ctx.cls.n_actions(), 0.0);
  const Rat total = root.total();

  if (std::holds_alternative<RewardKind>(kind)) {
    if (ctx.discount == nullptr)
      throw SchemaError("reward planning needs a discount schedule");
    if (ctx.discount->Gamma(ctx.t0) == 0) {
      res.nodes = ctx.nodes;
      return res;  // V := 0 if Gamma_t = 0
    }
    if (total == 0) {
      res.nodes = ctx.nodes;
      return res;  // no continuation mass conditions on this history
    }
    normalize_belief(root, total);
    for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
      res.action_values[a] =
          reward_action(ctx, root, static_cast<int32_t>(a), depth, ctx.t0);
  } else if (std::holds_alternative<InformationKind>(kind)) {
    if (info_divisor == 0)
      throw DeadEndError("xi_norm mass of the history is zero");
    if (ctx.measures) {
      // Linear in the masses: evaluate on the normalized belief and scale
      // by total / divisor.
      if (total == 0) {
        res.nodes = ctx.nodes;
        return res;
      }
      Belief b = root;
      normalize_belief(b, total);
      const double scale = (total / info_divisor).get_d();
      for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
        res.action_values[a] =
            scale *
            info_action_measures(ctx, b, static_cast<int32_t>(a), depth);
    } else {
      Belief b = root;
      for (auto& m : b.masses)
        if (m != 0) m /= info_divisor;
      std::vector<double> cvec(b.masses.size(), 0.0);
      for (size_t a = 0; a < ctx.cls.n_actions(); ++a)
        res.action_values[a] =
            info_action_literal(ctx, b, cvec, static_cast<int32_t>(a), depth);
    }
  } else {
    const auto& ek = std::get<EntropyKind>(kind);
    if (total == 0)
      throw DeadEndError("xi mass of the history is zero");
    normalize_belief(root, total);
    for (size_t a = 0; a < ctx.cls.n_actions(); ++a) {
      if (ek.normalized)
        res.action_values[a] =
            entropy_norm_action(ctx, root, static_cast<int32_t>(a), depth);
      else
        res.action_values[a] =
            entropy_raw_action(ctx, root, 0.0, static_cast<int32_t>(a), depth);
    }
  }
  res.best_action = tie_break(res.action_values);
  res.value = *std::max_element(res.action_values.begin(),
                                res.action_values.end());
  res.nodes = ctx.nodes;
  return res;
}

}  // namespace

int32_t tie_break(const std::vector<double>& action_values) {
  const double vmax =
      *std::max_element(action_values.begin(), action_values.end());
  for (size_t a = 0; a < action_values.size(); ++a)
    if (action_values[a] >= vmax - 1e-12) return static_cast<int32_t>(a);
  return 0;
}

double entropy_value(const EnvClass& cls, const History& h, uint64_t lifetime,
                     bool normalized, const FuturePolicy* policy,
                     const PlanLimits& limits, PlannerCache* cache) {
  Ctx ctx{cls, nullptr, limits, cache, policy, cls.all_measures()};
  const uint32_t depth = lifetime_to_depth(h, lifetime);
  RootPrep prep = fold_with_normalizer(cls, h);
  if (policy) {
    // Value of the given policy: evaluate the root as a policy node.
    Belief b = prep.belief;
    const Rat total = b.total();
    if (total == 0) throw DeadEndError("xi mass of the history is zero");
    normalize_belief(b, total);
    if (normalized) return entropy_norm_node(ctx, b, depth);
    return entropy_raw_node(ctx, b, 0.0, depth);
  }
  return plan(ctx, EntropyKind{normalized}, prep.belief, Rat(1), depth).value;
}

double info_value(const EnvClass& cls, const History& h, uint64_t lifetime,
                  const FuturePolicy* policy, const PlanLimits& limits,
                  PlannerCache* cache) {
  Ctx ctx{cls, nullptr, limits, cache, policy, cls.all_measures()};
  const uint32_t depth = lifetime_to_depth(h, lifetime);
  RootPrep prep = fold_with_normalizer(cls, h);
  if (policy) {
    if (prep.xinorm_mass == 0)
      throw DeadEndError("xi_norm mass of the history is zero");
    if (ctx.measures) {
      Belief b = prep.belief;
      const Rat total = b.total();
      if (total == 0) return 0;
      normalize_belief(b, total);
      return (total / prep.xinorm_mass).get_d() *
             info_node_measures(ctx, b, depth);
    }
    Belief b = prep.belief;
    for (auto& m : b.masses)
      if (m != 0) m /= prep.xinorm_mass;
    return info_node_literal(ctx, b, std::vector<double>(b.masses.size(), 0.0),
                             depth);
  }
  return plan(ctx, InformationKind{}, prep.belief, prep.xinorm_mass, depth)
      .value;
}

double reward_value(const EnvClass& cls, int32_t member, const History& h,
                    const DiscountSchedule& discount, const Rat& trunc_eps,
                    const FuturePolicy* policy, const PlanLimits& limits,
                    PlannerCache* cache) {
  Ctx ctx{cls, &discount, limits, cache, policy, cls.all_measures()};
  ctx.t0 = h.size() + 1;
  if (discount.Gamma(ctx.t0) == 0) return 0;
  const uint64_t depth = discount.effective_horizon(ctx.t0, trunc_eps);
  Belief b = fold_history(cls, h);
  if (member >= 0) {
    for (size_t i = 0; i < b.masses.size(); ++i)
      b.masses[i] = (static_cast<int32_t>(i) == member && b.masses[i] != 0)
                        ? Rat(1)
                        : Rat(0);
  }
  const Rat total = b.total();
  if (total == 0) return 0;
  normalize_belief(b, total);
  if (policy)
    return reward_node(ctx, b, static_cast<uint32_t>(depth), ctx.t0);
  RewardKind kind{member};
  Belief root = b;
  return plan(ctx, kind, root, Rat(1), static_cast<uint32_t>(depth)).value;
}

PlanResult optimal_value(const EnvClass& cls, const ValueKind& kind,
                         const History& h, uint64_t horizon,
                         const DiscountSchedule* discount,
                         const PlanLimits& limits, PlannerCache* cache) {
  Ctx ctx{cls, discount, limits, cache, nullptr, cls.all_measures()};
  ctx.t0 = h.size() + 1;
  if (std::holds_alternative<RewardKind>(kind)) {
    Belief b = fold_history(cls, h);
    const int32_t member = std::get<RewardKind>(kind).member;
    if (member >= 0) {
      for (size_t i = 0; i < b.masses.size(); ++i)
        b.masses[i] = (static_cast<int32_t>(i) == member && b.masses[i] != 0)
                          ? Rat(1)
                          : Rat(0);
    }
    return plan(ctx, kind, std::move(b), Rat(1),
                static_cast<uint32_t>(horizon));
  }
  RootPrep prep = fold_with_normalizer(cls, h);
  const uint32_t depth = lifetime_to_depth(h, horizon);
  return plan(ctx, kind, std::move(prep.belief), prep.xinorm_mass, depth);
}

PlanResult optimal_value_belief(const EnvClass& cls, const ValueKind& kind,
                                const Belief& belief, uint64_t t0,
                                uint64_t horizon,
                                const DiscountSchedule* discount,
                                const PlanLimits& limits, PlannerCache* cache,
                                const Rat* info_root_divisor) {
  Ctx ctx{cls, discount, limits, cache, nullptr, cls.all_measures()};
  ctx.t0 = t0;
  uint32_t depth;
  Rat divisor(1);
  if (std::holds_alternative<RewardKind>(kind)) {
    depth = static_cast<uint32_t>(horizon);
  } else {
    if (horizon < t0) throw SchemaError("lifetime below current time");
    depth = static_cast<uint32_t>(horizon - t0 + 1);
    divisor = info_root_divisor ? *info_root_divisor : belief.total();
  }
  Belief b = belief;
  if (std::holds_alternative<RewardKind>(kind)) {
    const int32_t member = std::get<RewardKind>(kind).member;
    if (member >= 0) {
      for (size_t i = 0; i < b.masses.size(); ++i)
        b.masses[i] = (static_cast<int32_t>(i) == member && b.masses[i] != 0)
                          ? Rat(1)
                          : Rat(0);
    }
  }
  return plan(ctx, kind, std::move(b), divisor, depth);
}

int32_t eps_optimal_action(const EnvClass& cls, const ValueKind& kind,
                           const History& h, const Rat& eps, uint64_t horizon,
                           const DiscountSchedule* discount,
                           const PlanLimits& limits, PlannerCache* cache) {
  if (eps <= 0) throw SchemaError("eps must be positive");
  const PlanResult res =
      optimal_value(cls, kind, h, horizon, discount, limits, cache);
  const double eps_d = eps.get_d();
  for (size_t a = 0; a < res.action_values.size(); ++a)
    if (res.value - res.action_values[a] < eps_d)
      return static_cast<int32_t>(a);
  return res.best_action;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

struct OracleSetup {
  uint32_t depth;
  size_t n_actions;
  size_t n_percepts;
  std::vector<size_t> level_base;  // policy-node index base per level
  size_t total_nodes;
};

// Literal evaluation of one policy tree, walking every percept sequence.
struct OracleEval {
  const EnvClass& cls;
  const OracleSetup& setup;
  const DiscountSchedule* discount = nullptr;
  const std::vector<int32_t>* assignment = nullptr;
  uint64_t t0 = 1;

  // per-member folded state/mass at the planning root, plus root totals
  std::vector<int32_t> root_states;
  std::vector<Rat> root_masses;
  Rat root_total = 0;
  Rat root_xinorm = 1;

  Rat reward_acc = 0;
  double real_acc = 0;

  int32_t node_action(size_t level, size_t node_in_level) const {
    return (*assignment)[setup.level_base[level] + node_in_level];
  }

  void run_reward() {
    reward_acc = 0;
    walk_reward(root_states, root_masses, 0, 0, Rat(1));
  }

  void walk_reward(const std::vector<int32_t>& states,
                   const std::vector<Rat>& masses, size_t level,
                   size_t node_in_level, const Rat&) {
    if (level == setup.depth) return;
    const int32_t a = node_action(level, node_in_level);
    for (size_t e = 0; e < setup.n_percepts; ++e) {
      std::vector<int32_t> child_states = states;
      std::vector<Rat> child_masses = masses;
      Rat mass_e = 0;
      for (size_t i = 0; i < cls.members.size(); ++i) {
        if (child_masses[i] == 0) continue;
        const Rat p = cls.members[i].step_mass(child_states[i], a,
                                               static_cast<int32_t>(e));
        if (p == 0) {
          child_masses[i] = 0;
          continue;
        }
        child_masses[i] *= p;
        child_states[i] =
            cls.members[i].next_state(child_states[i], a,
                                      static_cast<int32_t>(e));
        mass_e += child_masses[i];
      }
      if (mass_e == 0) continue;
      // gamma(m) r_m rho(e_{1:m} | h) with m = t0 + level
      reward_acc += discount->normalized_weight(t0, t0 + level) *
                    cls.percepts[e].reward * (mass_e / root_total);
      walk_reward(child_states, child_masses, level + 1,
                  node_in_level * setup.n_percepts + e, Rat(1));
    }
  }

  void run_entropy(bool normalized) {
    real_acc = 0;
    walk_entropy(root_states, root_masses, 0, 0, Rat(1), normalized);
  }

  void walk_entropy(const std::vector<int32_t>& states,
                    const std::vector<Rat>& masses, size_t level,
                    size_t node_in_level, const Rat& pnorm, bool normalized) {
    if (level == setup.depth) {
      Rat joint = 0;
      for (const auto& m : masses) joint += m;
      const Rat p = normalized ? pnorm : joint / root_total;
      if (p != 0) {
        const double pd = p.get_d();
        real_acc += -pd * std::log2(pd);
      }
      return;
    }
    const int32_t a = node_action(level, node_in_level);
    Rat step_total = 0;
    std::vector<Rat> step(setup.n_percepts, Rat(0));
    for (size_t i = 0; i < cls.members.size(); ++i) {
      if (masses[i] == 0) continue;
      for (const auto& tr : cls.members[i].rows[states[i]][a])
        step[tr.percept] += masses[i] * tr.prob;
    }
    for (const auto& s : step) step_total += s;
    if (normalized && step_total == 0) {
      Rat joint = 0;
      for (const auto& m : masses) joint += m;
      if (joint != 0)
        throw DeadEndError("normalization hit a zero-mass one-step map");
      return;
    }
    for (size_t e = 0; e < setup.n_percepts; ++e) {
      if (step[e] == 0) continue;
      std::vector<int32_t> child_states = states;
      std::vector<Rat> child_masses = masses;
      for (size_t i = 0; i < cls.members.size(); ++i) {
        if (child_masses[i] == 0) continue;
        const Rat p = cls.members[i].step_mass(child_states[i], a,
                                               static_cast<int32_t>(e));
        if (p == 0) {
          child_masses[i] = 0;
          continue;
        }
        child_masses[i] *= p;
        child_states[i] =
            cls.members[i].next_state(child_states[i], a,
                                      static_cast<int32_t>(e));
      }
      walk_entropy(child_states, child_masses, level + 1,
                   node_in_level * setup.n_percepts + e,
                   pnorm * (step[e] / step_total), normalized);
    }
  }

  void run_info() {
    real_acc = 0;
    std::vector<Rat> nu_root(cls.members.size(), Rat(0));
    for (size_t i = 0; i < cls.members.size(); ++i) nu_root[i] = root_masses[i];
    walk_info(root_states, root_masses, 0, 0, Rat(1));
  }

  void walk_info(const std::vector<int32_t>& states,
                 const std::vector<Rat>& masses, size_t level,
                 size_t node_in_level, const Rat& pnorm) {
    if (level == setup.depth) {
      for (size_t i = 0; i < cls.members.size(); ++i) {
        if (masses[i] == 0 || root_masses[i] == 0) continue;
        // weight w_nu nu(e_{1:m} || a) / xinorm(h); ratio of conditionals
        const Rat weight = masses[i] / root_xinorm;
        const Rat ratio = (masses[i] / root_masses[i]) / pnorm;
        real_acc += weight.get_d() * std::log2(ratio.get_d());
      }
      return;
    }
    const int32_t a = node_action(level, node_in_level);
    std::vector<Rat> step(setup.n_percepts, Rat(0));
    Rat step_total = 0;
    for (size_t i = 0; i < cls.members.size(); ++i) {
      if (masses[i] == 0) continue;
      for (const auto& tr : cls.members[i].rows[states[i]][a])
        step[tr.percept] += masses[i] * tr.prob;
    }
    for (const auto& s : step) step_total += s;
    if (step_total == 0) return;
    for (size_t e = 0; e < setup.n_percepts; ++e) {
      if (step[e] == 0) continue;
      std::vector<int32_t> child_states = states;
      std::vector<Rat> child_masses = masses;
      for (size_t i = 0; i < cls.members.size(); ++i) {
        if (child_masses[i] == 0) continue;
        const Rat p = cls.members[i].step_mass(child_states[i], a,
                                               static_cast<int32_t>(e));
        if (p == 0) {
          child_masses[i] = 0;
          continue;
        }
        child_masses[i] *= p;
        child_states[i] =
            cls.members[i].next_state(child_states[i], a,
                                      static_cast<int32_t>(e));
      }
      walk_info(child_states, child_masses, level + 1,
                node_in_level * setup.n_percepts + e,
                pnorm * (step[e] / step_total));
    }
  }
};

}  // namespace

PlanResult brute_force_oracle(const EnvClass& cls, const ValueKind& kind,
                              const History& h, uint64_t horizon,
                              const DiscountSchedule* discount,
                              uint64_t max_policies) {
  OracleSetup setup;
  setup.n_actions = cls.n_actions();
  setup.n_percepts = cls.n_percepts();
  if (std::holds_alternative<RewardKind>(kind)) {
    setup.depth = static_cast<uint32_t>(horizon);
    if (discount == nullptr)
      throw SchemaError("reward oracle needs a discount schedule");
  } else {
    setup.depth = lifetime_to_depth(h, horizon);
  }

  setup.total_nodes = 0;
  size_t level_count = 1;
  for (uint32_t i = 0; i < setup.depth; ++i) {
    setup.level_base.push_back(setup.total_nodes);
    setup.total_nodes += level_count;
    if (setup.total_nodes > 64)
      throw ResourceLimitError("oracle policy tree too large");
    level_count *= setup.n_percepts;
  }
  double policies_d = std::pow(static_cast<double>(setup.n_actions),
                               static_cast<double>(setup.total_nodes));
  if (policies_d > static_cast<double>(max_policies))
    throw ResourceLimitError("oracle policy count exceeds cap");
  const uint64_t n_policies = static_cast<uint64_t>(policies_d + 0.5);

  OracleEval ev{cls, {}, setup, discount, h.size() + 1,
                {},  {},  Rat(0), Rat(1), Rat(0), 0.0};
  // Fold the history per member, tracking the xi_norm normalizer.
  ev.root_states.assign(cls.members.size(), 0);
  ev.root_masses = cls.weights;
  for (const auto& stp : h) {
    std::vector<Rat> step(setup.n_percepts, Rat(0));
    Rat step_total = 0;
    for (size_t i = 0; i < cls.members.size(); ++i) {
      if (ev.root_masses[i] == 0) continue;
      for (const auto& tr : cls.members[i].rows[ev.root_states[i]][stp.action])
        step[tr.percept] += ev.root_masses[i] * tr.prob;
    }
    for (const auto& s : step) step_total += s;
    if (step_total == 0 || step[stp.percept] == 0)
      throw DeadEndError("history has zero mass under the mixture");
    ev.root_xinorm *= step[stp.percept] / step_total;
    for (size_t i = 0; i < cls.members.size(); ++i) {
      if (ev.root_masses[i] == 0) continue;
      const Rat p = cls.members[i].step_mass(ev.root_states[i], stp.action,
                                             stp.percept);
      if (p == 0) {
        ev.root_masses[i] = 0;
        continue;
      }
      ev.root_masses[i] *= p;
      ev.root_states[i] = cls.members[i].next_state(ev.root_states[i],
                                                    stp.action, stp.percept);
    }
  }
  ev.root_total = 0;
  for (const auto& m : ev.root_masses) ev.root_total += m;

  if (std::holds_alternative<RewardKind>(kind)) {
    const int32_t member = std::get<RewardKind>(kind).member;
    if (member >= 0) {
      for (size_t i = 0; i < ev.root_masses.size(); ++i)
        ev.root_masses[i] =
            (static_cast<int32_t>(i) == member && ev.root_masses[i] != 0)
                ? Rat(1)
                : Rat(0);
      ev.root_total = ev.root_masses[member];
    }
    if (discount->Gamma(ev.t0) == 0 || ev.root_total == 0) {
      PlanResult res;
      res.action_values.assign(setup.n_actions, 0.0);
      return res;
    }
  }

  PlanResult res;
  res.action_values.assign(setup.n_actions,
                           -std::numeric_limits<double>::infinity());
  std::vector<int32_t> assignment(setup.total_nodes, 0);
  for (uint64_t pi = 0; pi < n_policies; ++pi) {
    uint64_t code = pi;
    for (size_t i = 0; i < setup.total_nodes; ++i) {
      assignment[i] = static_cast<int32_t>(code % setup.n_actions);
      code /= setup.n_actions;
    }
    OracleEval run = ev;
    run.assignment = assignment;
    double value;
    if (std::holds_alternative<RewardKind>(kind)) {
      run.run_reward();
      value = run.reward_acc.get_d();
    } else if (std::holds_alternative<InformationKind>(kind)) {
      run.run_info();
      value = run.real_acc;
    } else {
      run.run_entropy(std::get<EntropyKind>(kind).normalized);
      value = run.real_acc;
    }
    const int32_t root_action = assignment[0];
    res.action_values[root_action] =
        std::max(res.action_values[root_action], value);
  }
  res.best_action = tie_break(res.action_values);
  res.value =
      *std::max_element(res.action_values.begin(), res.action_values.end());
  return res;
}

}  // namespace uail
