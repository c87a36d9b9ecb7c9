#pragma once

#include <cstdint>
#include <vector>

#include "core/bits.hpp"
#include "core/machine.hpp"
#include "core/rational.hpp"

namespace uail {

/// Two-sided anytime bounds on a semimeasure value. lo is the classic
/// lower-semicomputation; hi adds the mass of prefixes that are still
/// undecided at this budget, so the true value always lies inside.
struct Bracket {
  Rat lo;
  Rat hi;
};

/// Hard caps on enumeration work. Exceeding them raises ResourceLimitError
/// rather than silently clamping.
struct EnumLimits {
  uint32_t max_prefix_len = 20;
  uint64_t max_step_budget = 20ull << 20;  // covers phase(20) of the dovetail
  uint32_t max_mm_depth = 16;
};

/// Maps one budget index to concrete enumeration effort. Both components
/// are nondecreasing and unbounded, so every (program, step) pair is
/// eventually covered.
struct BudgetSchedule {
  /// Standard dovetail: phase j explores prefixes of length <= j with
  /// j * 2^j steps each.
  struct Phase {
    uint32_t max_len;
    uint64_t steps;
  };
  Phase phase(uint32_t index) const;
};

/// Antichain of minimal decidable program prefixes for a target string x.
/// confirmed: the run's output extends x (these are exactly the minimal
/// programs of the machine for x, discovered so far). refuted: output
/// contradicts x, or the run halted/crashed short of x. unresolved: still
/// alive at the budget, or needing input at the length frontier.
struct PrefixPartition {
  std::vector<Bits> confirmed;
  std::vector<Bits> refuted;
  std::vector<Bits> unresolved;

  Rat confirmed_mass() const;
  Rat unresolved_mass() const;
};

/// Walks the binary prefix tree, running the machine on each node with the
/// given per-node step budget and pruning at the first decidable node.
/// Order-independent and deterministic by construction.
PrefixPartition enumerate_prefixes(const Machine& machine, const Bits& x,
                                   uint32_t max_len, uint64_t steps,
                                   const EnumLimits& limits = {});

/// Anytime bracket for M(x): lo is the Kraft mass of confirmed minimal
/// programs, hi adds the mass of unresolved prefixes. lo is nondecreasing
/// and hi nonincreasing in the budget index; M(x) is always inside.
Bracket bracket_M(const Machine& machine, const Bits& x, uint32_t budget_index,
                  const BudgetSchedule& schedule = {},
                  const EnumLimits& limits = {});

/// Bracket for the conditional M(xy | x) = M(xy) / M(x), formed as
/// [lo(xy)/hi(x), min(1, hi(xy)/lo(x))]. Throws InsufficientBudgetError
/// until M(x) > 0 has been witnessed.
Bracket bracket_conditional_M(const Machine& machine, const Bits& x,
                              const Bits& y, uint32_t budget_index,
                              const BudgetSchedule& schedule = {},
                              const EnumLimits& limits = {});

/// Bracket for the Solomonoff normalization M_norm(x): the product over
/// prefixes of bracketed ratios M(x_{1:i}) / (M(x_{<i}0) + M(x_{<i}1)),
/// with M_norm(empty) = 1 exactly.
Bracket bracket_Mnorm(const Machine& machine, const Bits& x,
                      uint32_t budget_index,
                      const BudgetSchedule& schedule = {},
                      const EnumLimits& limits = {});

/// Finite-budget approximant of the measure mixture: the sum of bracket
/// lower values of M(xy) over all depth-n extensions y.
///
/// This is NOT an anytime algorithm for MM(x) and offers no convergence
/// guarantee as (n, budget) grow jointly; no such algorithm exists. The
/// value is nonincreasing in n at fixed budget, and that is all.
Rat approx_MM(const Machine& machine, const Bits& x, uint32_t depth,
              uint32_t budget_index, const BudgetSchedule& schedule = {},
              const EnumLimits& limits = {});

/// The M-adversarial sequence z_1..z_t: bit i is 0 iff the bracket for
/// M(1 | z_{<i}) lies strictly above 1/2. Bits whose bracket straddles 1/2
/// fall back to the midpoint and are flagged undecided.
struct AdversarialResult {
  Bits sequence;
  std::vector<bool> decided;
};

AdversarialResult adversarial_sequence(const Machine& machine, uint32_t length,
                                       uint32_t budget_index,
                                       const BudgetSchedule& schedule = {},
                                       const EnumLimits& limits = {});

/// Independent brute-force oracle: runs every program of length <= max_len
/// with the given step budget, applies the minimal-program definition
/// directly, and bounds the remainder by (open length-L count) * 2^-L.
/// Intended for exhaustively decidable machines (toy3); used as ground
/// truth in tests. No tree pruning, no dovetailing shortcuts.
Bracket exact_M_oracle(const Machine& machine, const Bits& x, uint32_t max_len,
                       uint64_t steps, const EnumLimits& limits = {});

}  // namespace uail
