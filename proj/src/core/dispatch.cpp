#include "core/dispatch.hpp"

#include <utility>

namespace uail {

ExecutionOutcome run_probe(uint64_t n, const ProbeRelation& S, uint64_t budget,
                           size_t output_cap) {
  ExecutionOutcome out;
  // Header 1^{n+1}0, one bit per step.
  for (uint64_t j = 0; j < n + 2; ++j) {
    if (out.steps_used >= budget || out.output.size() >= output_cap) {
      out.status = RunStatus::kRunning;
      return out;
    }
    out.output.push_back(j < n + 1 ? 1 : 0);
    ++out.steps_used;
  }
  // Dovetail: one 0 per k with a witness, searching i upward.
  for (uint64_t k = 0;; ++k) {
    for (uint64_t i = 0;; ++i) {
      if (out.steps_used >= budget) {
        out.status = RunStatus::kRunning;
        return out;
      }
      ++out.steps_used;  // one S query
      if (S(n, k, i)) break;
    }
    if (out.steps_used >= budget || out.output.size() >= output_cap) {
      out.status = RunStatus::kRunning;
      return out;
    }
    out.output.push_back(0);
    ++out.steps_used;
  }
}

namespace {

class DispatchMachine final : public Machine {
 public:
  DispatchMachine(std::shared_ptr<const Machine> base, std::string id,
                  ProbeRelation S)
      : base_(std::move(base)), id_(std::move(id)), relation_(std::move(S)) {}

  std::string id() const override { return id_; }

  ExecutionOutcome run(const Bits& program, uint64_t budget,
                       size_t output_cap) const override {
    if (program.empty()) return suspended();
    if (program.at(0) == 0) {
      if (program.size() < 2) return suspended();
      Bits rest;
      for (size_t i = 2; i < program.size(); ++i) rest.push_back(program.at(i));
      ExecutionOutcome out = base_->run(rest, budget, output_cap);
      if (program.at(1) == 1) out.output = out.output.inverted();
      out.bits_consumed += 2;
      return out;
    }
    // Count the 1-block; the terminating 0 selects probe n.
    size_t ones = 0;
    while (ones < program.size() && program.at(ones) == 1) ++ones;
    if (ones == program.size()) return suspended();
    const uint64_t n = static_cast<uint64_t>(ones) - 1;
    ExecutionOutcome out = run_probe(n, relation_, budget, output_cap);
    out.bits_consumed = ones + 1;
    return out;
  }

 private:
  static ExecutionOutcome suspended() {
    ExecutionOutcome out;
    out.status = RunStatus::kNeedsMoreInput;
    return out;
  }

  std::shared_ptr<const Machine> base_;
  std::string id_;
  ProbeRelation relation_;
};

}  // namespace

std::unique_ptr<Machine> make_dispatch_machine(
    std::shared_ptr<const Machine> base, std::string id, ProbeRelation S) {
  return std::make_unique<DispatchMachine>(std::move(base), std::move(id),
                                           std::move(S));
}

}  // namespace uail
