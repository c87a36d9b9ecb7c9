#pragma once

#include <memory>
#include <string>

#include "core/machine.hpp"

namespace uail {

/// Runs probe program p_n directly: emits 1^{n+1}0, then for k = 0,1,2,...
/// searches i upward for a witness of S(n,k,i) and emits one extra 0 per
/// witnessed k. Diverges silently at the first k with no witness. Every
/// emission and every S query costs one step. Never halts, never reads
/// input.
ExecutionOutcome run_probe(uint64_t n, const ProbeRelation& S, uint64_t budget,
                           size_t output_cap = kNoOutputCap);

/// The three-way dispatch construction over a base machine:
///
///   1^{n+1}0 ...  -> run probe n (remaining input is never read)
///   00 p          -> run base on p
///   01 p          -> run base on p and bitwise invert its output
///
/// Routing bits are a pure demux and cost no steps, so the delegated
/// outcome matches the base machine's bit for bit.
std::unique_ptr<Machine> make_dispatch_machine(
    std::shared_ptr<const Machine> base, std::string id, ProbeRelation S);

inline std::unique_ptr<Machine> make_dispatch_machine(
    std::unique_ptr<Machine> base, std::string id, ProbeRelation S) {
  return make_dispatch_machine(
      std::shared_ptr<const Machine>(std::move(base)), std::move(id),
      std::move(S));
}

}  // namespace uail
