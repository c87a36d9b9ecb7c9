#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "core/discount.hpp"
#include "core/env.hpp"

namespace uail {

/// Entropy gain of the joint future percept distribution, under raw xi or
/// under the per-step Solomonoff normalization xi_norm.
struct EntropyKind {
  bool normalized = false;
};

/// Expected information gain, evaluated literally: unconditional nu-mass
/// weights against xi_norm conditionals. On semimeasure classes individual
/// summands (and totals) may be negative; that is the definition as
/// written.
struct InformationKind {};

/// Discounted reward. member < 0 targets the mixture xi itself (the
/// Bayes-optimal planning target); member >= 0 targets that environment.
struct RewardKind {
  int32_t member = -1;
};

using ValueKind = std::variant<EntropyKind, InformationKind, RewardKind>;

struct PlanResult {
  double value = 0;
  int32_t best_action = 0;
  std::vector<double> action_values;
  uint64_t nodes = 0;
};

struct PlanLimits {
  uint64_t max_nodes = 50'000'000;
  uint32_t max_depth = 64;
};

/// Action chosen after seeing the given percepts (class indices) beyond the
/// planning root. Lets callers evaluate explicit policies.
using FuturePolicy = std::function<int32_t(const std::vector<int32_t>&)>;

/// Memo shared across planner calls. Keys capture the full node identity
/// (kind, canonicalized belief, member states, remaining depth), so reuse
/// never changes a value; share one cache only across calls with the same
/// class and discount schedule.
class PlannerCache {
 public:
  std::unordered_map<std::string, double> values;
  void clear() { values.clear(); }
};

/// Actions within 1e-12 of the maximum count as ties; the least index wins.
int32_t tie_break(const std::vector<double>& action_values);

/// Entropy-seeking value of a policy (nullptr = optimal search) with
/// absolute lifetime m >= t. Throws DeadEndError where normalization is
/// required but the mixture has died.
double entropy_value(const EnvClass& cls, const History& h, uint64_t lifetime,
                     bool normalized, const FuturePolicy* policy = nullptr,
                     const PlanLimits& limits = {},
                     PlannerCache* cache = nullptr);

/// Information-seeking value of a policy (nullptr = optimal) with absolute
/// lifetime m >= t.
double info_value(const EnvClass& cls, const History& h, uint64_t lifetime,
                  const FuturePolicy* policy = nullptr,
                  const PlanLimits& limits = {}, PlannerCache* cache = nullptr);

/// Reward-seeking value of a policy (nullptr = optimal) in the mixture
/// (member < 0) or one environment, truncated at t + H_t(trunc_eps) with
/// additive truncation error at most trunc_eps. Returns 0 when Gamma_t = 0.
double reward_value(const EnvClass& cls, int32_t member, const History& h,
                    const DiscountSchedule& discount, const Rat& trunc_eps,
                    const FuturePolicy* policy = nullptr,
                    const PlanLimits& limits = {},
                    PlannerCache* cache = nullptr);

/// Exact expectimax over all actions. `horizon` is the absolute lifetime m
/// for entropy/information kinds and the number of future steps (depth) for
/// reward kinds; reward kinds also need `discount`. `t0` is the absolute
/// time of the first planned step (defaults to |h|+1).
PlanResult optimal_value(const EnvClass& cls, const ValueKind& kind,
                         const History& h, uint64_t horizon,
                         const DiscountSchedule* discount = nullptr,
                         const PlanLimits& limits = {},
                         PlannerCache* cache = nullptr);

/// An action whose value is within eps of optimal: the least-indexed member
/// of { a : V* - V(a) < eps }.
int32_t eps_optimal_action(const EnvClass& cls, const ValueKind& kind,
                           const History& h, const Rat& eps, uint64_t horizon,
                           const DiscountSchedule* discount = nullptr,
                           const PlanLimits& limits = {},
                           PlannerCache* cache = nullptr);

/// Independent oracle: enumerates every deterministic policy tree and
/// evaluates the value definitions literally, sequence by sequence, with no
/// shared recursion. Reward values are exact rationals end to end.
/// Guarded by a hard work cap.
PlanResult brute_force_oracle(const EnvClass& cls, const ValueKind& kind,
                              const History& h, uint64_t horizon,
                              const DiscountSchedule* discount = nullptr,
                              uint64_t max_policies = 1ull << 22);

/// Planner entry point on a prepared belief (used by the agent to avoid
/// refolding histories). Semantics identical to optimal_value.
PlanResult optimal_value_belief(const EnvClass& cls, const ValueKind& kind,
                                const Belief& belief, uint64_t t0,
                                uint64_t horizon,
                                const DiscountSchedule* discount = nullptr,
                                const PlanLimits& limits = {},
                                PlannerCache* cache = nullptr,
                                const Rat* info_root_divisor = nullptr);

}  // namespace uail
