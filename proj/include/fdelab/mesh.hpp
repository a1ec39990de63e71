#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fdelab {

enum class Grading { uniform, graded, explicit_nodes };

/// Strictly increasing time grid with at least 3 nodes.
class Mesh {
 public:
  /// N equal intervals on [start, end].
  static std::shared_ptr<const Mesh> uniform(double start, double end, std::size_t intervals);
  /// node_j = end * (j / N)^r on [0, end], r >= 1.
  static std::shared_ptr<const Mesh> graded(double end, std::size_t intervals, double r);
  static std::shared_ptr<const Mesh> from_nodes(std::vector<double> nodes);

  std::span<const double> nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  double start() const { return nodes_.front(); }
  double end() const { return nodes_.back(); }
  double step(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  Grading grading() const { return grading_; }
  double grading_exponent() const { return exponent_; }
  bool is_uniform() const { return grading_ == Grading::uniform; }
  bool starts_at_zero() const { return nodes_.front() == 0.0; }

  std::string describe() const;

 private:
  Mesh(std::vector<double> nodes, Grading grading, double exponent);

  std::vector<double> nodes_;
  Grading grading_;
  double exponent_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Samples bound to a mesh. Individual values may be flagged missing
/// (e.g. x' at t = 0 when it is singular, or masked Riccati quantities).
class GridFunction {
 public:
  explicit GridFunction(MeshPtr mesh);
  GridFunction(MeshPtr mesh, std::vector<double> values);

  template <typename F>
  static GridFunction sample(MeshPtr mesh, F&& f) {
    std::vector<double> v(mesh->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*mesh)[i]);
    return GridFunction(std::move(mesh), std::move(v));
  }

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool missing(std::size_t i) const { return missing_[i] != 0; }
  void set_missing(std::size_t i);
  void set(std::size_t i, double v) {
    values_[i] = v;
    missing_[i] = 0;
  }
  std::size_t missing_count() const;

  /// Largest |value| over present nodes (0 if none).
  double max_abs() const;

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
  std::vector<unsigned char> missing_;
};

}  // namespace fdelab
