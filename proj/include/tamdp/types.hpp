#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tamdp {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

/// Random source used everywhere an agent or environment samples.
using Rng = std::mt19937_64;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense (state, action) -> real table, row-major by state.
class StateActionTable {
 public:
  StateActionTable() = default;
  StateActionTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0)
      : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, fill) {}

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double& operator()(StateId s, ActionId a) { return values_[index(s, a)]; }
  double operator()(StateId s, ActionId a) const { return values_[index(s, a)]; }

  std::span<double> row(StateId s) { return {values_.data() + std::size_t{s} * num_actions_, num_actions_}; }
  std::span<const double> row(StateId s) const {
    return {values_.data() + std::size_t{s} * num_actions_, num_actions_};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const StateActionTable&) const = default;

 private:
  std::size_t index(StateId s, ActionId a) const { return std::size_t{s} * num_actions_ + a; }

  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

}  // namespace tamdp
