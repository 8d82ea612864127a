#include "lsci/basemodel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lsci {

void PairedSet::validate() const {
  if (f.size() != g.size()) throw Error(ErrorCode::ShapeMismatch, "pair sets differ in row count");
}

FunctionSet OperatorModel::predict_set(const FunctionSet& f) const {
  Matrix out(f.values().rows(), f.values().cols());
  for (std::size_t t = 0; t < f.size(); ++t)
    out.row(static_cast<Eigen::Index>(t)) = predict(f.sample(t), t).values().transpose();
  return FunctionSet(f.grid_ptr(), std::move(out), f.index_labels());
}

Vector apply_taps(const Vector& f, const Vector& taps) {
  const Eigen::Index g = f.size();
  const Eigen::Index h = (taps.size() - 1) / 2;
  Vector out = Vector::Zero(g);
  for (Eigen::Index i = 0; i < g; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = -h; j <= h; ++j) {
      const Eigen::Index src = i + j;
      if (src >= 0 && src < g) acc += taps[j + h] * f[src];
    }
    out[i] = acc;
  }
  return out;
}

FunctionalRidge FunctionalRidge::fit(const PairedSet& train, std::size_t half_width, double ridge) {
  train.validate();
  if (!(ridge >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ridge penalty must be >= 0");
  if (train.f.grid().kind() != GridKind::Interval1D)
    throw Error(ErrorCode::Unsupported, "functional ridge is defined for 1D grids only");
  require_same_grid(train.f.grid(), train.g.grid());
  const std::size_t n = train.size();
  const std::size_t p = 2 * half_width + 1;
  if (n < 2 * half_width + 2)
    throw Error(ErrorCode::InvalidArgument, "ridge fit needs at least 2h+2 training pairs");

  const Eigen::Index g = static_cast<Eigen::Index>(train.f.grid().size());
  const Eigen::Index h = static_cast<Eigen::Index>(half_width);
  const Matrix& f = train.f.values();

  // Shifted copies of the inputs, centered over samples at each grid point.
  std::vector<Matrix> shifted(p, Matrix::Zero(static_cast<Eigen::Index>(n), g));
  for (Eigen::Index j = -h; j <= h; ++j) {
    Matrix& s = shifted[static_cast<std::size_t>(j + h)];
    for (Eigen::Index i = 0; i < g; ++i) {
      const Eigen::Index src = i + j;
      if (src >= 0 && src < g) s.col(i) = f.col(src);
    }
  }
  std::vector<Eigen::RowVectorXd> shifted_mean(p);
  for (std::size_t j = 0; j < p; ++j) {
    shifted_mean[j] = shifted[j].colwise().mean();
    shifted[j].rowwise() -= shifted_mean[j];
  }
  const Eigen::RowVectorXd g_mean = train.g.values().colwise().mean();
  const Matrix gc = train.g.values().rowwise() - g_mean;

  Eigen::MatrixXd a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  Eigen::VectorXd b(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      const double v = shifted[j].cwiseProduct(shifted[k]).sum();
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
    }
    b[static_cast<Eigen::Index>(j)] = shifted[j].cwiseProduct(gc).sum();
  }
  if (ridge == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top)
      throw Error(ErrorCode::SingularSystem, "design is rank deficient and the ridge penalty is zero");
  }
  a.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "normal equations not positive definite");

  FunctionalRidge model;
  model.taps_ = llt.solve(b);
  Vector bias = g_mean.transpose();
  for (std::size_t j = 0; j < p; ++j) bias -= model.taps_[static_cast<Eigen::Index>(j)] * shifted_mean[j].transpose();
  model.bias_ = std::move(bias);
  model.grid_ = train.f.grid_ptr();
  return model;
}

const Vector& FunctionalRidge::taps() const {
  if (!bias_) throw Error(ErrorCode::NotFitted, "ridge model has not been fitted");
  return taps_;
}

const Vector& FunctionalRidge::bias() const {
  if (!bias_) throw Error(ErrorCode::NotFitted, "ridge model has not been fitted");
  return *bias_;
}

FunctionSample FunctionalRidge::predict(const FunctionSample& f, std::size_t) const {
  if (!bias_) throw Error(ErrorCode::NotFitted, "ridge model has not been fitted");
  require_same_grid(*grid_, f.grid());
  return FunctionSample(f.grid_ptr(), apply_taps(f.values(), taps_) + *bias_);
}

FunctionSample Persistence::predict(const FunctionSample& f, std::size_t) const { return f; }

FunctionSample ExternalPredictions::predict(const FunctionSample& f, std::size_t row) const {
  if (row >= predictions_.size())
    throw Error(ErrorCode::ShapeMismatch, "no stored prediction for row " + std::to_string(row));
  require_same_grid(predictions_.grid(), f.grid());
  return predictions_.sample(row);
}

FunctionSet ExternalPredictions::predict_set(const FunctionSet& f) const {
  if (f.size() != predictions_.size())
    throw Error(ErrorCode::ShapeMismatch, "external predictions have " +
                                              std::to_string(predictions_.size()) + " rows for " +
                                              std::to_string(f.size()) + " inputs");
  require_same_grid(predictions_.grid(), f.grid());
  return FunctionSet(predictions_.grid_ptr(), predictions_.values(), f.index_labels());
}

FunctionSet residuals(const OperatorModel& model, const PairedSet& pairs) {
  pairs.validate();
  const FunctionSet pred = model.predict_set(pairs.f);
  require_same_grid(pred.grid(), pairs.g.grid());
  return FunctionSet(pairs.g.grid_ptr(), pairs.g.values() - pred.values(), pairs.g.index_labels());
}

}  // namespace lsci
