#pragma once

#include <string>
#include <string_view>

namespace rmc {

/// Sparse-noise budget: at most `amount` noisy entries overall (Global) or in
/// each column (PerColumn).
struct NoiseBudget {
  enum class Kind { Global, PerColumn };

  Kind kind = Kind::Global;
  int amount = 0;

  static NoiseBudget global(int s) { return {Kind::Global, s}; }
  static NoiseBudget per_column(int g) { return {Kind::PerColumn, g}; }

  bool is_global() const { return kind == Kind::Global; }

  /// "global:s" or "percolumn:g".
  std::string to_string() const;
  /// Inverse of to_string(). Throws std::invalid_argument on bad input.
  static NoiseBudget parse(std::string_view text);

  friend bool operator==(const NoiseBudget&, const NoiseBudget&) = default;
};

}  // namespace rmc
