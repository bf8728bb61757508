#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace uclso {

/// Mixes a base seed with a list of stream coordinates (label, repetition, fold, ...)
/// into an independent 64-bit seed. Pure function, so substreams do not depend on
/// the order in which jobs run.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) noexcept;

/// Seeded generator with platform-independent conversions. The std distributions are
/// implementation-defined, so all draws go through the raw 64-bit engine output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    [[nodiscard]] double uniform();
    /// Uniform in the open interval (0, 1).
    [[nodiscard]] double uniform_open();
    /// Uniform integer in [0, n); n must be positive.
    [[nodiscard]] std::size_t index(std::size_t n);
    /// Standard normal draw (Box-Muller, one value per call).
    [[nodiscard]] double normal();

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace uclso
