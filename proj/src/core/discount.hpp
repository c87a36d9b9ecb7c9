#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace uail {

/// A computable discount function gamma(t) with finite tail sums
/// Gamma_t = sum_{i>=t} gamma(i). Geometric schedules have closed-form
/// tails; finite tables are summed directly and are zero beyond the table.
class DiscountSchedule {
 public:
  static DiscountSchedule geometric(const Rat& gamma0);
  static DiscountSchedule table(std::vector<Rat> gammas);

  /// Parses "geometric:0.5" or "table:1,1,1,1".
  static DiscountSchedule parse(const std::string& spec);

  bool is_geometric() const { return geometric_; }
  const Rat& base() const { return gamma0_; }

  /// gamma(t), t >= 1.
  Rat gamma(uint64_t t) const;

  /// Gamma_t; zero once a finite table is exhausted.
  Rat Gamma(uint64_t t) const;

  /// gamma(m) / Gamma_t as an exact rational (m >= t, Gamma_t > 0). For
  /// geometric schedules this depends only on m - t, which keeps planner
  /// memo keys time-independent.
  Rat normalized_weight(uint64_t t, uint64_t m) const;

  /// Effective horizon H_t(eps) = min{ k : Gamma_{t+k} / Gamma_t <= eps }.
  /// Exact scan; for geometric schedules a closed-form candidate seeds the
  /// scan so both routes must agree. Throws UndefinedHorizonError when
  /// Gamma_t = 0.
  uint64_t effective_horizon(uint64_t t, const Rat& eps) const;

  std::string str() const;

 private:
  DiscountSchedule() = default;

  bool geometric_ = true;
  Rat gamma0_;
  std::vector<Rat> table_;
  std::vector<Rat> tails_;  // tails_[i] = sum_{j>=i} table_[j]
};

}  // namespace uail
