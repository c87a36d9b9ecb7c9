#include "core/machine.hpp"

#include <vector>

#include "core/dispatch.hpp"
#include "core/errors.hpp"

namespace uail {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kNeedsMoreInput:
      return "needs_more_input";
    case RunStatus::kRunning:
      return "running";
    case RunStatus::kHalted:
      return "halted";
    case RunStatus::kCrashed:
      return "crashed";
  }
  return "?";
}

namespace {

class ReferenceMachine final : public Machine {
 public:
  explicit ReferenceMachine(size_t stack_cap) : stack_cap_(stack_cap) {}

  std::string id() const override { return "brs1"; }

  ExecutionOutcome run(const Bits& program, uint64_t budget,
                       size_t output_cap) const override {
    ExecutionOutcome out;
    std::vector<uint8_t> stack;
    size_t ip = 0;          // next unread program bit
    size_t loop_pos = 0;    // emission cursor once LOOPEMIT is entered
    bool looping = false;

    while (out.steps_used < budget) {
      if (out.output.size() >= output_cap) {
        out.status = RunStatus::kRunning;
        return out;
      }
      if (looping) {
        ++out.steps_used;
        if (!stack.empty()) {
          out.output.push_back(stack[loop_pos]);
          loop_pos = (loop_pos + 1) % stack.size();
        }
        continue;
      }
      // Fetch one self-delimiting op-code; suspend without consuming if the
      // program ends mid-fetch.
      if (ip >= program.size()) {
        out.status = RunStatus::kNeedsMoreInput;
        return out;
      }
      const uint8_t b0 = program.at(ip);
      if (b0 == 0) {
        if (ip + 1 >= program.size()) {
          out.status = RunStatus::kNeedsMoreInput;
          return out;
        }
        const uint8_t b1 = program.at(ip + 1);
        ip += 2;
        out.bits_consumed = ip;
        ++out.steps_used;
        if (stack.size() >= stack_cap_) {
          out.status = RunStatus::kCrashed;
          return out;
        }
        stack.push_back(b1);  // PUSH0 / PUSH1
        continue;
      }
      if (ip + 2 >= program.size()) {
        out.status = RunStatus::kNeedsMoreInput;
        return out;
      }
      const uint8_t b1 = program.at(ip + 1);
      const uint8_t b2 = program.at(ip + 2);
      ip += 3;
      out.bits_consumed = ip;
      ++out.steps_used;
      if (b1 == 0 && b2 == 0) {  // EMIT
        if (stack.empty()) {
          out.status = RunStatus::kCrashed;
          return out;
        }
        out.output.push_back(stack.back());
        stack.pop_back();
      } else if (b1 == 0 && b2 == 1) {  // LOOPEMIT
        looping = true;
        loop_pos = 0;
      } else if (b1 == 1 && b2 == 0) {  // HALT
        out.status = RunStatus::kHalted;
        return out;
      } else {  // 111
        out.status = RunStatus::kCrashed;
        return out;
      }
    }
    out.status = RunStatus::kRunning;
    return out;
  }

 private:
  size_t stack_cap_;
};

class ToyMachine final : public Machine {
 public:
  std::string id() const override { return "toy3"; }

  ExecutionOutcome run(const Bits& program, uint64_t budget,
                       size_t output_cap) const override {
    ExecutionOutcome out;
    size_t ip = 0;
    while (out.steps_used < budget) {
      if (out.output.size() >= output_cap) {
        out.status = RunStatus::kRunning;
        return out;
      }
      if (ip >= program.size()) {
        out.status = RunStatus::kNeedsMoreInput;
        return out;
      }
      if (ip + 1 >= program.size()) {
        out.status = RunStatus::kNeedsMoreInput;
        return out;
      }
      const uint8_t b0 = program.at(ip);
      const uint8_t b1 = program.at(ip + 1);
      ip += 2;
      out.bits_consumed = ip;
      ++out.steps_used;
      if (b0 == 0) {
        out.output.push_back(b1);  // 00 -> emit 0, 01 -> emit 1
      } else if (b1 == 0) {
        out.status = RunStatus::kHalted;
        return out;
      } else {
        out.status = RunStatus::kCrashed;
        return out;
      }
    }
    out.status = RunStatus::kRunning;
    return out;
  }
};

}  // namespace

std::unique_ptr<Machine> make_reference_machine(size_t stack_cap) {
  return std::make_unique<ReferenceMachine>(stack_cap);
}

std::unique_ptr<Machine> make_toy_machine() {
  return std::make_unique<ToyMachine>();
}

std::unique_ptr<Machine> make_machine(const std::string& id) {
  if (id == "toy3") return make_toy_machine();
  if (id == "brs1") return make_reference_machine();
  if (id == "disp1") {
    // Demo dispatch machine: probes search the relation S(n,k,i) = (i==k),
    // which always finds a witness, so every probe emits 1^{n+1}0 0^inf.
    return make_dispatch_machine(
        make_reference_machine(), "disp1",
        [](uint64_t, uint64_t k, uint64_t i) { return i == k; });
  }
  throw SchemaError("unknown machine id '" + id +
                    "' (expected toy3, brs1 or disp1)");
}

}  // namespace uail
