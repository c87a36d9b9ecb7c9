#include "core/discount.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace uail {

DiscountSchedule DiscountSchedule::geometric(const Rat& gamma0) {
  if (gamma0 <= 0 || gamma0 >= 1)
    throw SchemaError("geometric discount base must be in (0,1), got " +
                      rat_str(gamma0));
  DiscountSchedule d;
  d.geometric_ = true;
  d.gamma0_ = gamma0;
  return d;
}

DiscountSchedule DiscountSchedule::table(std::vector<Rat> gammas) {
  DiscountSchedule d;
  d.geometric_ = false;
  for (const auto& g : gammas)
    if (g < 0) throw SchemaError("discount values must be nonnegative");
  d.table_ = std::move(gammas);
  d.tails_.assign(d.table_.size() + 1, Rat(0));
  for (size_t i = d.table_.size(); i-- > 0;)
    d.tails_[i] = d.tails_[i + 1] + d.table_[i];
  return d;
}

DiscountSchedule DiscountSchedule::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw SchemaError("discount spec must look like geometric:0.5 or "
                      "table:1,1,1");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "geometric") return geometric(parse_rat(args));
  if (kind == "table") {
    std::vector<Rat> gammas;
    size_t pos = 0;
    while (pos <= args.size()) {
      const auto comma = args.find(',', pos);
      const std::string tok =
          args.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      gammas.push_back(parse_rat(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return table(std::move(gammas));
  }
  throw SchemaError("unknown discount kind '" + kind + "'");
}

Rat DiscountSchedule::gamma(uint64_t t) const {
  if (geometric_) return rat_pow(gamma0_, static_cast<unsigned>(t));
  if (t == 0 || t > table_.size()) return Rat(0);
  return table_[t - 1];
}

Rat DiscountSchedule::Gamma(uint64_t t) const {
  if (geometric_) {
    // sum_{i>=t} g^i = g^t / (1-g)
    return rat_pow(gamma0_, static_cast<unsigned>(t)) / (Rat(1) - gamma0_);
  }
  if (t == 0) t = 1;
  if (t > table_.size()) return Rat(0);
  return tails_[t - 1];
}

Rat DiscountSchedule::normalized_weight(uint64_t t, uint64_t m) const {
  if (geometric_) {
    // gamma0^(m-t) * (1 - gamma0); independent of absolute time.
    return rat_pow(gamma0_, static_cast<unsigned>(m - t)) * (Rat(1) - gamma0_);
  }
  const Rat G = Gamma(t);
  if (G == 0) throw UndefinedHorizonError("Gamma_t = 0");
  return gamma(m) / G;
}

uint64_t DiscountSchedule::effective_horizon(uint64_t t, const Rat& eps) const {
  if (eps <= 0 || eps >= 1) {
    if (eps >= 1) return 0;
    throw SchemaError("effective horizon needs eps in (0,1)");
  }
  if (geometric_) {
    // Gamma_{t+k}/Gamma_t = gamma0^k. Seed with the closed form, then
    // verify exactly against neighbours so float error cannot leak in.
    const double guess =
        std::ceil(std::log(eps.get_d()) / std::log(gamma0_.get_d()));
    uint64_t k = guess > 0 ? static_cast<uint64_t>(guess) : 0;
    while (k > 0 && rat_pow(gamma0_, static_cast<unsigned>(k - 1)) <= eps) --k;
    while (rat_pow(gamma0_, static_cast<unsigned>(k)) > eps) ++k;
    return k;
  }
  const Rat G = Gamma(t);
  if (G == 0)
    throw UndefinedHorizonError("Gamma_" + std::to_string(t) + " = 0");
  uint64_t k = 0;
  while (Gamma(t + k) / G > eps) ++k;
  return k;
}

std::string DiscountSchedule::str() const {
  if (geometric_) return "geometric:" + rat_str(gamma0_);
  std::string s = "table:";
  for (size_t i = 0; i < table_.size(); ++i) {
    if (i) s += ",";
    s += rat_str(table_[i]);
  }
  return s;
}

}  // namespace uail
