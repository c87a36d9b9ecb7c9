#include "core/bits.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace uail {

Bits Bits::parse(const std::string& text) {
  Bits b;
  b.v_.reserve(text.size());
  for (char c : text) {
    if (c == '0')
      b.v_.push_back(0);
    else if (c == '1')
      b.v_.push_back(1);
    else
      throw SchemaError(std::string("bit string may contain only 0/1, got '") +
                        c + "'");
  }
  return b;
}

bool Bits::has_prefix(const Bits& prefix) const {
  if (prefix.v_.size() > v_.size()) return false;
  return std::equal(prefix.v_.begin(), prefix.v_.end(), v_.begin());
}

bool Bits::conflicts_with(const Bits& other) const {
  const size_t n = std::min(v_.size(), other.v_.size());
  for (size_t i = 0; i < n; ++i)
    if (v_[i] != other.v_[i]) return true;
  return false;
}

Bits Bits::prefix(size_t len) const {
  Bits b;
  b.v_.assign(v_.begin(), v_.begin() + std::min(len, v_.size()));
  return b;
}

Bits Bits::concat(const Bits& tail) const {
  Bits b = *this;
  b.v_.insert(b.v_.end(), tail.v_.begin(), tail.v_.end());
  return b;
}

Bits Bits::inverted() const {
  Bits b = *this;
  for (auto& x : b.v_) x ^= 1;
  return b;
}

std::string Bits::str() const {
  std::string s(v_.size(), '0');
  for (size_t i = 0; i < v_.size(); ++i)
    if (v_[i]) s[i] = '1';
  return s;
}

}  // namespace uail
