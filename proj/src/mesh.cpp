#include "fdelab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdelab/error.hpp"

namespace fdelab {

Mesh::Mesh(std::vector<double> nodes, Grading grading, double exponent)
    : nodes_(std::move(nodes)), grading_(grading), exponent_(exponent) {
  if (nodes_.size() < 3) throw SizeError("mesh needs at least 3 nodes, got " + std::to_string(nodes_.size()));
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw DomainError("mesh node " + std::to_string(i) + " is not finite");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("mesh nodes must be strictly increasing (node " + std::to_string(i) + ")");
    }
  }
  if (nodes_.front() < 0.0) throw DomainError("mesh nodes must be >= 0");
}

std::shared_ptr<const Mesh> Mesh::uniform(double start, double end, std::size_t intervals) {
  if (intervals < 2) throw SizeError("uniform mesh needs at least 2 intervals");
  if (!(end > start)) throw DomainError("uniform mesh needs end > start");
  std::vector<double> nodes(intervals + 1);
  const double h = (end - start) / static_cast<double>(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) nodes[j] = start + h * static_cast<double>(j);
  nodes.back() = end;
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::uniform, 1.0));
}

std::shared_ptr<const Mesh> Mesh::graded(double end, std::size_t intervals, double r) {
  if (intervals < 2) throw SizeError("graded mesh needs at least 2 intervals");
  if (!(end > 0.0)) throw DomainError("graded mesh needs end > 0");
  if (!(r >= 1.0)) throw DomainError("grading exponent must be >= 1");
  if (r == 1.0) return uniform(0.0, end, intervals);
  std::vector<double> nodes(intervals + 1);
  const double n = static_cast<double>(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) nodes[j] = end * std::pow(static_cast<double>(j) / n, r);
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::graded, r));
}

std::shared_ptr<const Mesh> Mesh::from_nodes(std::vector<double> nodes) {
  return std::shared_ptr<const Mesh>(new Mesh(std::move(nodes), Grading::explicit_nodes, 1.0));
}

std::string Mesh::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (grading_) {
    case Grading::uniform: os << "uniform"; break;
    case Grading::graded: os << "graded(r=" << exponent_ << ")"; break;
    case Grading::explicit_nodes: os << "explicit"; break;
  }
  os << " [" << start() << ", " << end() << "] N=" << (size() - 1);
  return os.str();
}

GridFunction::GridFunction(MeshPtr mesh) : GridFunction(mesh, std::vector<double>(mesh->size(), 0.0)) {}

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)), missing_(values_.size(), 0) {
  if (values_.size() != mesh_->size()) {
    throw SizeError("grid function has " + std::to_string(values_.size()) + " values for " +
                    std::to_string(mesh_->size()) + " nodes");
  }
}

void GridFunction::set_missing(std::size_t i) {
  values_[i] = std::numeric_limits<double>::quiet_NaN();
  missing_[i] = 1;
}

std::size_t GridFunction::missing_count() const {
  return static_cast<std::size_t>(std::count(missing_.begin(), missing_.end(), 1));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!missing(i)) m = std::max(m, std::abs(values_[i]));
  }
  return m;
}

}  // namespace fdelab
