// TSPLIB instance and tour files for the four symmetric families handled by
// the sparsifier: EUC_2D, GEO, ATT and EXPLICIT matrices.
//
// Vertices are 1-indexed in files and 0-indexed everywhere else; the
// conversion happens only in this module.

#ifndef QUADFREQ_TSPLIB_H_
#define QUADFREQ_TSPLIB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quadfreq {

using Vertex = std::uint32_t;

// Malformed input. `line` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

// A precondition of a library call was not met by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EdgeWeightKind { kEuc2D, kGeo, kAtt, kExplicit };

std::string_view EdgeWeightKindName(EdgeWeightKind kind);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

class Instance {
 public:
  static Instance FromCoordinates(std::string name, EdgeWeightKind kind,
                                  std::vector<Point> coords);
  // `matrix` is row-major n x n and must be symmetric with a zero diagonal.
  static Instance FromMatrix(std::string name, int n,
                             std::vector<std::int64_t> matrix);

  const std::string& name() const { return name_; }
  int size() const { return n_; }
  EdgeWeightKind kind() const { return kind_; }
  const std::vector<Point>& coords() const { return coords_; }

  // TSPLIB-rounded integer distance. Throws ContractViolation for u == v or
  // out-of-range vertices.
  std::int64_t Distance(Vertex u, Vertex v) const;

  // Row-major n x n matrix of Distance() values, zero on the diagonal.
  std::vector<std::int64_t> DistanceMatrix() const;

 private:
  Instance() = default;

  std::string name_;
  int n_ = 0;
  EdgeWeightKind kind_ = EdgeWeightKind::kEuc2D;
  std::vector<Point> coords_;
  std::vector<std::int64_t> matrix_;
};

// Raw TSPLIB distance rules, exposed for testing.
std::int64_t Euc2DDistance(const Point& a, const Point& b);
std::int64_t AttDistance(const Point& a, const Point& b);
std::int64_t GeoDistance(const Point& a, const Point& b);

class Tour {
 public:
  // `order` holds 0-indexed vertices; throws ParseError unless it is a
  // permutation of 0..n-1.
  Tour(std::vector<Vertex> order, int n);

  const std::vector<Vertex>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }
  // The n cyclically consecutive pairs, each as (min, max), sorted.
  const std::vector<std::pair<Vertex, Vertex>>& edges() const {
    return edges_;
  }
  bool Contains(Vertex u, Vertex v) const;
  std::int64_t Length(const Instance& instance) const;

 private:
  std::vector<Vertex> order_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

Instance ParseInstance(std::string_view text);
Instance ReadInstanceFile(const std::string& path);

// When `n` is given the tour length must match it; otherwise the tour's
// DIMENSION header (or its vertex count) defines n.
Tour ParseTour(std::string_view text, std::optional<int> n = std::nullopt);
Tour ReadTourFile(const std::string& path, std::optional<int> n = std::nullopt);

// Reads a whole file; throws ParseError naming the path when unreadable.
std::string ReadFileToString(const std::string& path);

}  // namespace quadfreq

#endif  // QUADFREQ_TSPLIB_H_
