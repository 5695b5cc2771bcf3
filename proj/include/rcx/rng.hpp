#pragma once

#include <cstdint>

namespace rcx {

// Counter-based splittable generator. A stream is fully determined by
// (seed, stream_id), so chains can be replayed independently of thread
// scheduling. The mixing function is the splitmix64 finalizer.
class Rng {
 public:
  Rng() : Rng(0, 0) {}
  Rng(uint64_t seed, uint64_t stream_id) {
    state_ = mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream_id + 0xbf58476d1ce4e5b9ull);
  }

  static Rng stream(uint64_t seed, uint64_t stream_id) { return Rng(seed, stream_id); }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, n)
  uint64_t below(uint64_t n) {
    // rejection-free modulo is fine here; n is tiny compared to 2^64
    return next_u64() % n;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }
  uint64_t state_;
};

}  // namespace rcx
