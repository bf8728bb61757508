#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uclso {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    [[nodiscard]] std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// @throws invalid_argument_error on a length mismatch.
[[nodiscard]] ConfusionCounts confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth);

/// 2tp / (2tp + fp + fn); 0 when the denominator is 0.
[[nodiscard]] double f1_label(const ConfusionCounts &c) noexcept;

/// Mann-Whitney AUC with midranks: P(s+ > s-) + 1/2 P(s+ = s-).
/// Returns nullopt when truth holds a single class.
/// @throws invalid_argument_error on a length mismatch.
[[nodiscard]] std::optional<double> auc_label(std::span<const double> scores, std::span<const std::uint8_t> truth);

/// Mean over the defined entries.
/// @throws invalid_argument_error when no entry is defined.
[[nodiscard]] double macro_average(std::span<const std::optional<double>> per_label);
[[nodiscard]] double macro_average(std::span<const double> per_label);

}  // namespace uclso
