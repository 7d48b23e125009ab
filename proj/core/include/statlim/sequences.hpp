#pragma once
// A deterministic total map n -> rational together with the metadata needed
// to re-derive it. Evaluation is pure; any internal memoization is
// synchronized and semantically invisible.

#include "statlim/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace statlim {

class SeqGen {
 public:
  SeqGen() = default;
  SeqGen(std::function<Rational(uint64_t)> eval, nlohmann::json meta)
      : eval_(std::move(eval)), meta_(std::move(meta)) {}

  Rational operator()(uint64_t n) const {
    if (n == 0) throw precondition_error("sequence: index is 1-based");
    return eval_(n);
  }

  const nlohmann::json& meta() const { return meta_; }

  // Values x_1..x_n as a dense vector (index i holds x_{i+1}).
  std::vector<Rational> prefix(uint64_t n) const {
    std::vector<Rational> out;
    out.reserve(n);
    for (uint64_t i = 1; i <= n; ++i) out.push_back(eval_(i));
    return out;
  }

 private:
  std::function<Rational(uint64_t)> eval_;
  nlohmann::json meta_;
};

}  // namespace statlim
