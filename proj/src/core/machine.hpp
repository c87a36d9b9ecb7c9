#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "core/bits.hpp"

namespace uail {

/// Final run states. Crashed (invalid op-code, blown stack) is a value, not
/// an error: crashed prefixes refute early and tighten upper brackets.
enum class RunStatus : uint8_t {
  kNeedsMoreInput,  // consumed the whole program, wants the next bit
  kRunning,         // alive when the step budget (or output cap) ran out
  kHalted,          // executed a halt instruction; final across budgets
  kCrashed,         // invalid op-code or resource blowout; final
};

const char* to_string(RunStatus s);

/// Result of a budgeted run. Re-running the same program with a larger
/// budget only ever extends `output` (monotone machine property).
struct ExecutionOutcome {
  Bits output;
  RunStatus status = RunStatus::kRunning;
  uint64_t steps_used = 0;
  size_t bits_consumed = 0;
};

constexpr size_t kNoOutputCap = std::numeric_limits<size_t>::max();

/// A monotone machine: one-way input of program bits, one-way binary output
/// tape. Implementations must be deterministic pure functions of
/// (program, budget, output_cap).
///
/// Budget semantics: one fetch-decode-execute per step. A fetch that cannot
/// complete because the program ran out suspends the machine with
/// kNeedsMoreInput and does not consume the partial fetch. When `output_cap`
/// bits have been emitted the run pauses with kRunning.
class Machine {
 public:
  virtual ~Machine() = default;

  virtual std::string id() const = 0;

  virtual ExecutionOutcome run(const Bits& program, uint64_t budget,
                               size_t output_cap = kNoOutputCap) const = 0;
};

/// Stack-machine reference interpreter ("brs1").
///
/// Self-delimiting op-codes over bits:
///   00   PUSH0      push a 0 on the work stack
///   01   PUSH1      push a 1
///   100  EMIT       pop the top of stack, append it to the output tape
///   101  LOOPEMIT   forever emit the stack bottom-to-top, one bit per step
///   110  HALT
///   111  (invalid -> Crashed)
///
/// EMIT on an empty stack and pushes beyond `stack_cap` crash. LOOPEMIT on
/// an empty stack spins silently, which is what keeps M genuinely
/// lower-semicomputable on this machine: those prefixes never resolve.
std::unique_ptr<Machine> make_reference_machine(size_t stack_cap = 64);

/// Exhaustively decidable toy machine ("toy3") for exact-oracle tests.
/// Three instructions, two bits each: 00 emit 0, 01 emit 1, 10 halt
/// (11 crashes). No loops, so every prefix resolves within |p|/2 + 1 steps
/// and the whole program space is enumerable.
std::unique_ptr<Machine> make_toy_machine();

/// Decidable ternary relation queried by probe programs; each query costs
/// one machine step. Must be total within the caller's step caps.
using ProbeRelation = std::function<bool(uint64_t n, uint64_t k, uint64_t i)>;

/// Looks up a machine by identifier: "toy3", "brs1", or "disp1" (the
/// dispatch construction over brs1 with the demo relation S(n,k,i) = (i==k)).
std::unique_ptr<Machine> make_machine(const std::string& id);

}  // namespace uail
