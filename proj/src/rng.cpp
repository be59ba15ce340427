#include "sntp/rng.hpp"

#include <cmath>
#include <numbers>

namespace sntp {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t step)
    : seed_(master_seed), run_(run_index) {
  set_step(step);
}

void CounterRng::set_step(std::uint64_t step) {
  step_ = step;
  key_ = mix64(mix64(mix64(seed_) ^ run_) ^ step_);
  counter_ = 0;
  has_spare_ = false;
}

CounterRng::result_type CounterRng::operator()() {
  return mix64(key_ ^ mix64(counter_++));
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open() {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

bool CounterRng::coin() {
  return ((*this)() >> 63) != 0;
}

}  // namespace sntp
