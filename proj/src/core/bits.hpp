#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uail {

/// A finite binary string. Used both for machine programs and for output
/// tape contents; serialized everywhere as ASCII '0'/'1'.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::vector<uint8_t> bits) : v_(std::move(bits)) {}

  /// Parses "0101"; throws uail::SchemaError on any other character.
  static Bits parse(const std::string& text);

  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  uint8_t at(size_t i) const { return v_[i]; }

  void push_back(uint8_t b) { v_.push_back(b ? 1 : 0); }

  /// This string extends (or equals) the candidate prefix.
  bool has_prefix(const Bits& prefix) const;

  /// Neither string is a prefix of the other.
  bool conflicts_with(const Bits& other) const;

  Bits prefix(size_t len) const;
  Bits concat(const Bits& tail) const;
  Bits inverted() const;

  std::string str() const;

  bool operator==(const Bits& o) const { return v_ == o.v_; }
  auto operator<=>(const Bits& o) const = default;

 private:
  std::vector<uint8_t> v_;
};

}  // namespace uail
