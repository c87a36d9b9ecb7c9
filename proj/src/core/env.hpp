#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/bits.hpp"
#include "core/machine.hpp"
#include "core/rational.hpp"

namespace uail {

/// One percept: an observation symbol plus a reward in [0, 1].
struct Percept {
  std::string obs;
  Rat reward;

  bool operator==(const Percept& o) const {
    return obs == o.obs && reward == o.reward;
  }
};

/// One interaction cycle; indices refer to the owning class's action and
/// percept tables.
struct HistoryStep {
  int32_t action;
  int32_t percept;
};

/// Alternating action/percept record ae_{<t}.
using History = std::vector<HistoryStep>;

/// A finite-state chronological conditional semimeasure. Per (state,
/// action) the outgoing masses sum to at most 1; the deficit is the
/// probability that the percept stream ends there. Past percept
/// probabilities cannot depend on future actions by construction.
class FiniteStateEnv {
 public:
  struct Transition {
    int32_t percept;
    Rat prob;
    int32_t next_state;
  };

  std::string name;
  std::vector<std::string> state_names;  // state 0 is initial
  // rows[state][action] -> transitions with positive mass
  std::vector<std::vector<std::vector<Transition>>> rows;

  int32_t initial_state() const { return 0; }

  /// Mass of percept e in `state` under `action`; zero when absent.
  Rat step_mass(int32_t state, int32_t action, int32_t percept) const;

  /// Successor state, or -1 when the (state, action, percept) edge has no
  /// mass.
  int32_t next_state(int32_t state, int32_t action, int32_t percept) const;

  /// Total outgoing mass of (state, action); 1 - total is halting mass.
  Rat total_mass(int32_t state, int32_t action) const;
};

/// A finite Bayesian mixture xi over declared environments with positive
/// prior weights summing to at most 1. Immutable after construction.
struct EnvClass {
  std::string name;
  std::vector<std::string> actions;
  std::vector<Percept> percepts;
  std::vector<FiniteStateEnv> members;
  std::vector<Rat> weights;

  size_t n_actions() const { return actions.size(); }
  size_t n_percepts() const { return percepts.size(); }
  size_t n_members() const { return members.size(); }

  /// True when every reachable (state, action) row of every member sums to
  /// exactly 1 (no halting mass anywhere).
  bool all_measures() const;

  int32_t action_index(const std::string& name) const;
  int32_t percept_index(const std::string& obs, const Rat& reward) const;

  /// Throws SchemaError if any invariant fails (weights, mass sums,
  /// dangling indices, alternation of transitions).
  void validate() const;
};

/// Per-member states and unnormalized masses w_nu * nu(e_{<t} || a_{<t});
/// the planner's and agent's working representation of a history.
struct Belief {
  std::vector<int32_t> states;
  std::vector<Rat> masses;

  static Belief initial(const EnvClass& cls);
  /// Advances by one interaction; members that assign zero mass keep a
  /// zero-mass entry (their state no longer matters).
  void advance(const EnvClass& cls, int32_t action, int32_t percept);
  Rat total() const;
};

/// Folds a history into a belief; throws SchemaError on malformed indices.
Belief fold_history(const EnvClass& cls, const History& h);

/// Unnormalized one-step mixture map xi(e | h, a), one entry per percept in
/// the class table. Computed from joint-mass ratios, so the mixture follows
/// the posterior over members.
std::vector<Rat> mixture_step(const EnvClass& cls, const History& h,
                              int32_t action);
std::vector<Rat> mixture_step(const EnvClass& cls, const Belief& b,
                              int32_t action);

/// Divides a one-step map by its total so it sums to exactly 1.
/// Throws DeadEndError when the total mass is zero.
std::vector<Rat> normalize_step(const std::vector<Rat>& step);

/// Posterior weights w_nu nu(h) / xi(h) over mixture members.
/// Throws ZeroEvidenceError when xi(h) = 0.
std::vector<Rat> posterior_weights(const EnvClass& cls, const History& h);

/// Joint mass w_nu-weighted of the whole percept record of h (the xi-mass
/// of h); member >= 0 gives w_nu nu(h) for that member alone.
Rat joint_mass(const EnvClass& cls, const History& h, int32_t member = -1);

/// Draws one percept (index) or halting (nullopt) from a member's
/// conditional distribution. Deterministic given the rng state.
std::optional<int32_t> sample_percept(const EnvClass& cls, int32_t member,
                                      int32_t state, int32_t action,
                                      uint64_t& rng_state);

/// Splitmix-style deterministic generator state initialization.
uint64_t seed_rng(uint64_t seed);

/// The two-environment class of the entropy-trap example: alpha reveals the
/// member (percept 0 vs 1, each with mass 1/10), beta yields percept 0 with
/// mass 1/2 in both. Weights 1/2 each.
EnvClass example1_class();

/// Benchmark reward class for agent runs: two measures; alpha reveals the
/// member by observation (with noisy reward under nu1, mean 3/5), beta is a
/// safe arm paying 1/2 in both. The Bayes-optimal myopic exploiter never
/// tries alpha at the uniform prior, so identification requires directed
/// exploration.
EnvClass bandit2_class();

/// Derives a class of deterministic environments from machine programs:
/// every program of length <= max_len whose run emits at least two bits
/// within `budget` steps becomes an action-conditioned output table
/// (percept bit for action a at step t is output bit 2t + a), weighted
/// 2^-|p| and truncated to `horizon` steps (halting beyond). Duplicate
/// tables are kept: they are distinct programs.
EnvClass machine_derived_class(const Machine& machine, uint32_t max_len,
                               uint64_t budget, uint32_t horizon = 8);

/// JSON (de)serialization of environment-class files; schema documented in
/// the README. Unknown keys are rejected.
EnvClass env_class_from_json(const std::string& json_text);
std::string env_class_to_json(const EnvClass& cls);

/// Resolves "builtin:example1", "builtin:bandit2",
/// "machine:<id>:len=<L>[:horizon=<H>]" or a filesystem path.
EnvClass load_env_class(const std::string& spec);

}  // namespace uail
