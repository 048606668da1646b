// The positive weight sequence {a_j} with sum < 1 that scales every coordinate Gaussian.
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dbarlab/errors.hpp"
#include "dbarlab/rational.hpp"

namespace dbarlab {

/// Immutable weight sequence. The coordinate Gaussian at index j has standard
/// deviation a_j per real part, so the second absolute moment of z_j is
/// sigma_j = 2 a_j^2. Construction certifies the standing assumption
/// sum_j a_j < 1 exactly (for the geometric rule, over the full infinite sum).
class WeightSequence {
 public:
  /// a_k = c * r^(k-1) for k = 1..count; requires c > 0, 0 < r < 1 and
  /// c / (1 - r) < 1 so that the full series stays below one.
  static WeightSequence geometric(const Rational& c, const Rational& r, std::size_t count) {
    if (c <= 0) throw ValidationError("weights: geometric scale c must be positive");
    if (r <= 0 || r >= 1) throw ValidationError("weights: geometric ratio r must lie in (0,1)");
    const Rational total = c / (1 - r);
    if (total >= 1) {
      throw ValidationError("weights: sum " + format_rational(total) +
                            " violates the standing assumption sum a_k < 1");
    }
    auto data = std::make_shared<Data>();
    data->geometric = true;
    data->c = c;
    data->r = r;
    data->total = total;
    data->prefix.reserve(count);
    Rational a = c;
    for (std::size_t k = 0; k < count; ++k) {
      data->prefix.push_back(a);
      a *= r;
    }
    return WeightSequence(std::move(data));
  }

  /// Explicit prefix a_1..a_N of a sequence; the materialized part must
  /// already satisfy the sum certificate.
  static WeightSequence from_list(std::vector<Rational> values) {
    if (values.empty()) throw ValidationError("weights: empty list");
    Rational total = 0;
    for (const Rational& a : values) {
      if (a <= 0) throw ValidationError("weights: entries must be positive");
      total += a;
    }
    if (total >= 1) {
      throw ValidationError("weights: sum " + format_rational(total) +
                            " violates the standing assumption sum a_k < 1");
    }
    auto data = std::make_shared<Data>();
    data->geometric = false;
    data->total = total;
    data->prefix = std::move(values);
    return WeightSequence(std::move(data));
  }

  /// a_k = 2^-(k-1) / 4, i.e. 1/4, 1/8, 1/16, ...; full sum is exactly 1/2.
  static WeightSequence standard(std::size_t count) {
    return geometric(Rational(1, 4), Rational(1, 2), count);
  }

  /// Same rule, materialized at least up to `count` entries.
  WeightSequence extended(std::size_t count) const {
    if (count <= size()) return *this;
    if (!data_->geometric) {
      throw ValidationError("weights: explicit list of length " + std::to_string(size()) +
                            " is too short (need " + std::to_string(count) + ")");
    }
    return geometric(data_->c, data_->r, count);
  }

  std::size_t size() const { return data_->prefix.size(); }

  /// 1-based access to a_j.
  const Rational& a(std::size_t j) const {
    if (j == 0 || j > data_->prefix.size()) {
      throw IndexOutOfRange("weight a_" + std::to_string(j) + " is not materialized (have " +
                            std::to_string(data_->prefix.size()) + ")");
    }
    return data_->prefix[j - 1];
  }

  /// sigma_j = 2 a_j^2, the variance of coordinate j.
  Rational sigma(std::size_t j) const {
    const Rational& aj = a(j);
    return 2 * aj * aj;
  }

  /// Exact sum of the full sequence (geometric) or of the materialized list.
  const Rational& total() const { return data_->total; }

  bool is_geometric() const { return data_->geometric; }
  const Rational& geometric_scale() const { return data_->c; }
  const Rational& geometric_ratio() const { return data_->r; }

  friend bool operator==(const WeightSequence& x, const WeightSequence& y) {
    return x.data_->geometric == y.data_->geometric && x.data_->prefix == y.data_->prefix;
  }

 private:
  struct Data {
    bool geometric = false;
    Rational c, r;
    Rational total;
    std::vector<Rational> prefix;
  };

  explicit WeightSequence(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

}  // namespace dbarlab
