#include "core/prior.hpp"

#include <string>

#include "core/errors.hpp"

namespace uail {

namespace {

Rat kraft_mass(const std::vector<Bits>& prefixes) {
  Rat total = 0;
  for (const auto& p : prefixes) total += pow2_neg(p.size());
  return total;
}

enum class NodeVerdict { kConfirmed, kRefuted, kFrontier, kAlive };

// Classifies one prefix from its capped run. Reaching this node means the
// parent requested exactly this bit, so any confirmation seen here is
// automatically by a minimal program.
NodeVerdict classify(const ExecutionOutcome& out, const Bits& x) {
  if (out.output.size() >= x.size() && out.output.has_prefix(x))
    return NodeVerdict::kConfirmed;
  if (out.output.conflicts_with(x)) return NodeVerdict::kRefuted;
  if (out.status == RunStatus::kHalted || out.status == RunStatus::kCrashed)
    return NodeVerdict::kRefuted;  // final output, strictly short of x
  if (out.status == RunStatus::kNeedsMoreInput) return NodeVerdict::kFrontier;
  return NodeVerdict::kAlive;  // budget ran out mid-computation
}

void check_limits(uint32_t max_len, uint64_t steps, const EnumLimits& limits) {
  if (max_len > limits.max_prefix_len)
    throw ResourceLimitError("prefix length " + std::to_string(max_len) +
                             " exceeds cap " +
                             std::to_string(limits.max_prefix_len));
  if (steps > limits.max_step_budget)
    throw ResourceLimitError("step budget " + std::to_string(steps) +
                             " exceeds cap " +
                             std::to_string(limits.max_step_budget));
}

}  // namespace

BudgetSchedule::Phase BudgetSchedule::phase(uint32_t index) const {
  if (index >= 63) throw ResourceLimitError("budget index too large");
  return Phase{index, static_cast<uint64_t>(index) << index};
}

Rat PrefixPartition::confirmed_mass() const { return kraft_mass(confirmed); }
Rat PrefixPartition::unresolved_mass() const { return kraft_mass(unresolved); }

PrefixPartition enumerate_prefixes(const Machine& machine, const Bits& x,
                                   uint32_t max_len, uint64_t steps,
                                   const EnumLimits& limits) {
  check_limits(max_len, steps, limits);
  PrefixPartition part;
  if (steps == 0) {
    // Nothing can be decided without running; the whole tree is one
    // unresolved root.
    part.unresolved.push_back(Bits{});
    return part;
  }
  std::vector<Bits> pending;
  pending.push_back(Bits{});
  while (!pending.empty()) {
    Bits p = std::move(pending.back());
    pending.pop_back();
    const ExecutionOutcome out = machine.run(p, steps, x.size());
    switch (classify(out, x)) {
      case NodeVerdict::kConfirmed:
        part.confirmed.push_back(std::move(p));
        break;
      case NodeVerdict::kRefuted:
        part.refuted.push_back(std::move(p));
        break;
      case NodeVerdict::kFrontier:
        if (p.size() < max_len) {
          Bits p0 = p;
          p0.push_back(0);
          Bits p1 = std::move(p);
          p1.push_back(1);
          pending.push_back(std::move(p1));
          pending.push_back(std::move(p0));
        } else {
          part.unresolved.push_back(std::move(p));
        }
        break;
      case NodeVerdict::kAlive:
        part.unresolved.push_back(std::move(p));
        break;
    }
  }
  return part;
}

Bracket bracket_M(const Machine& machine, const Bits& x, uint32_t budget_index,
                  const BudgetSchedule& schedule, const EnumLimits& limits) {
  const auto ph = schedule.phase(budget_index);
  const PrefixPartition part =
      enumerate_prefixes(machine, x, ph.max_len, ph.steps, limits);
  Bracket b;
  b.lo = part.confirmed_mass();
  b.hi = b.lo + part.unresolved_mass();
  return b;
}

Bracket bracket_conditional_M(const Machine& machine, const Bits& x,
                              const Bits& y, uint32_t budget_index,
                              const BudgetSchedule& schedule,
                              const EnumLimits& limits) {
  const Bracket bx = bracket_M(machine, x, budget_index, schedule, limits);
  if (bx.lo == 0)
    throw InsufficientBudgetError("M(" + x.str() +
                                  ") not witnessed positive at this budget");
  const Bracket bxy =
      bracket_M(machine, x.concat(y), budget_index, schedule, limits);
  Bracket b;
  b.lo = bxy.lo / bx.hi;
  b.hi = bxy.hi / bx.lo;
  if (b.hi > 1) b.hi = 1;
  return b;
}

Bracket bracket_Mnorm(const Machine& machine, const Bits& x,
                      uint32_t budget_index, const BudgetSchedule& schedule,
                      const EnumLimits& limits) {
  Bracket result;
  result.lo = 1;
  result.hi = 1;
  for (size_t i = 1; i <= x.size(); ++i) {
    const Bits head = x.prefix(i - 1);
    Bits ext0 = head;
    ext0.push_back(0);
    Bits ext1 = head;
    ext1.push_back(1);
    const Bracket b0 = bracket_M(machine, ext0, budget_index, schedule, limits);
    const Bracket b1 = bracket_M(machine, ext1, budget_index, schedule, limits);
    const Bracket& num = (x.at(i - 1) == 0) ? b0 : b1;
    const Rat den_lo = b0.lo + b1.lo;
    const Rat den_hi = b0.hi + b1.hi;
    if (den_lo == 0)
      throw InsufficientBudgetError(
          "one-step masses after " + head.str() +
          " not witnessed positive at this budget");
    Rat ratio_lo = num.lo / den_hi;
    Rat ratio_hi = num.hi / den_lo;
    if (ratio_hi > 1) ratio_hi = 1;
    result.lo *= ratio_lo;
    result.hi *= ratio_hi;
  }
  return result;
}

Rat approx_MM(const Machine& machine, const Bits& x, uint32_t depth,
              uint32_t budget_index, const BudgetSchedule& schedule,
              const EnumLimits& limits) {
  if (depth > limits.max_mm_depth)
    throw ResourceLimitError("MM depth " + std::to_string(depth) +
                             " exceeds cap " +
                             std::to_string(limits.max_mm_depth));
  // Sum over all 2^depth extensions; no convergence claim in (depth, budget).
  Rat total = 0;
  const uint64_t count = 1ull << depth;
  for (uint64_t mask = 0; mask < count; ++mask) {
    Bits xy = x;
    for (uint32_t j = 0; j < depth; ++j)
      xy.push_back(static_cast<uint8_t>((mask >> j) & 1));
    total += bracket_M(machine, xy, budget_index, schedule, limits).lo;
  }
  return total;
}

AdversarialResult adversarial_sequence(const Machine& machine, uint32_t length,
                                       uint32_t budget_index,
                                       const BudgetSchedule& schedule,
                                       const EnumLimits& limits) {
  AdversarialResult res;
  const Rat half(1, 2);
  for (uint32_t i = 0; i < length; ++i) {
    const Bracket cond = bracket_conditional_M(
        machine, res.sequence, Bits::parse("1"), budget_index, schedule,
        limits);
    uint8_t bit;
    bool decided;
    if (cond.lo > half) {
      bit = 0;
      decided = true;
    } else if (cond.hi <= half) {
      bit = 1;
      decided = true;
    } else {
      // Not finitely decidable here; fall back to the midpoint and say so.
      bit = (cond.lo + cond.hi > 1) ? 0 : 1;
      decided = false;
    }
    res.sequence.push_back(bit);
    res.decided.push_back(decided);
  }
  return res;
}

Bracket exact_M_oracle(const Machine& machine, const Bits& x, uint32_t max_len,
                       uint64_t steps, const EnumLimits& limits) {
  check_limits(max_len, steps, limits);
  // Flat exhaustive enumeration, minimality applied by definition: p counts
  // iff its run reaches x and the run of its parent prefix does not.
  Bracket b;
  b.lo = 0;
  uint64_t open_at_frontier = 0;
  for (uint32_t len = 0; len <= max_len; ++len) {
    const uint64_t count = 1ull << len;
    for (uint64_t mask = 0; mask < count; ++mask) {
      Bits p;
      for (uint32_t j = 0; j < len; ++j)
        p.push_back(static_cast<uint8_t>((mask >> (len - 1 - j)) & 1));
      const ExecutionOutcome out = machine.run(p, steps);
      const bool reaches_x = out.output.has_prefix(x);
      if (reaches_x) {
        bool parent_reaches = false;
        if (len > 0) {
          const ExecutionOutcome parent =
              machine.run(p.prefix(len - 1), steps);
          parent_reaches = parent.output.has_prefix(x);
        }
        if (!parent_reaches) b.lo += pow2_neg(len);
      } else if (len == max_len && !out.output.conflicts_with(x) &&
                 (out.status == RunStatus::kNeedsMoreInput ||
                  out.status == RunStatus::kRunning)) {
        ++open_at_frontier;
      }
    }
  }
  b.hi = b.lo + Rat(open_at_frontier) * pow2_neg(max_len);
  return b;
}

}  // namespace uail
