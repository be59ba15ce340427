#pragma once

#include <cstdint>

namespace sntp {

// Counter-based generator: every output is a hash of
// (master_seed, run_index, step, draw_counter), so a stream can be
// reconstructed anywhere without shared state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t step = 0);

  // Restarts the draw counter under a new step key.
  void set_step(std::uint64_t step);
  std::uint64_t step() const { return step_; }
  std::uint64_t draws() const { return counter_; }

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Standard normal via Box-Muller; both outputs of a pair are used.
  double normal();
  bool coin();

 private:
  std::uint64_t seed_;
  std::uint64_t run_;
  std::uint64_t step_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace sntp
