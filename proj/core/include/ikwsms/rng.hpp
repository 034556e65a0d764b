#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ikwsms {

// Philox4x32-10 counter-based bijection.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

// Purpose tags separating independent streams drawn for the same replication.
enum class StreamTag : std::uint64_t {
  data = 1,
  bootstrap = 2,
  solver = 3,
  generic = 15,
};

// Random stream addressed by (seed, index, tag). Streams with different
// addresses are independent; the sequence of a stream is a pure function of its
// address, so replications can run in any order on any number of threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t index = 0,
               StreamTag tag = StreamTag::generic);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double a, double b);
  // Integer uniform on [0, bound).
  std::uint64_t below(std::uint64_t bound);
  double normal();
  // Logistic with location 0 and the given scale.
  double logistic(double scale);
  double student_t(int dof);

 private:
  void refill();

  PhiloxKey key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ikwsms
