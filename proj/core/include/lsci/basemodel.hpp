#pragma once

// Base operator models that turn input functions into predictions, and the
// residuals the conformal layer works on.

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>

#include "lsci/functional.hpp"

namespace lsci {

/// Paired input/output function sets (f_t, g_t), row aligned.
struct PairedSet {
  FunctionSet f;
  FunctionSet g;

  std::size_t size() const noexcept { return f.size(); }
  void validate() const;
};

class OperatorModel {
 public:
  virtual ~OperatorModel() = default;

  /// Prediction for input f. `row` identifies f's position in the set being
  /// predicted; only file-backed models use it.
  virtual FunctionSample predict(const FunctionSample& f, std::size_t row) const = 0;

  /// Predictions for every row of `f`.
  virtual FunctionSet predict_set(const FunctionSet& f) const;

  virtual std::string_view name() const noexcept = 0;
};

/// g(x_i) = b(x_i) + sum_{j=-h..h} beta_j f(x_{i+j}), zero padded at the
/// ends, fitted by ridge-penalized least squares on the taps.
class FunctionalRidge final : public OperatorModel {
 public:
  FunctionalRidge() = default;

  static FunctionalRidge fit(const PairedSet& train, std::size_t half_width, double ridge);

  bool fitted() const noexcept { return bias_.has_value(); }
  const Vector& taps() const;
  const Vector& bias() const;

  FunctionSample predict(const FunctionSample& f, std::size_t row = 0) const override;
  std::string_view name() const noexcept override { return "ridge"; }

 private:
  Vector taps_;
  std::optional<Vector> bias_;
  GridPtr grid_;
};

/// Predicts the input itself; the natural baseline for autoregressive pairs.
class Persistence final : public OperatorModel {
 public:
  FunctionSample predict(const FunctionSample& f, std::size_t row = 0) const override;
  std::string_view name() const noexcept override { return "persistence"; }
};

/// Predictions loaded from a file, row aligned with the input set.
class ExternalPredictions final : public OperatorModel {
 public:
  explicit ExternalPredictions(FunctionSet predictions) : predictions_(std::move(predictions)) {}

  FunctionSample predict(const FunctionSample& f, std::size_t row) const override;
  FunctionSet predict_set(const FunctionSet& f) const override;
  std::string_view name() const noexcept override { return "external"; }

 private:
  FunctionSet predictions_;
};

/// g_t - predict(f_t) per pair.
FunctionSet residuals(const OperatorModel& model, const PairedSet& pairs);

/// Correlation of f with taps centered on each grid point, zero padded.
Vector apply_taps(const Vector& f, const Vector& taps);

}  // namespace lsci
