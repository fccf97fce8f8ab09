#include "quadfreq/tsplib.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace quadfreq {
namespace {

constexpr double kGeoPi = 3.141592;
constexpr double kGeoRadius = 6378.388;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string Upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

// Line-aware whitespace tokenizer over the document.
class Lexer {
 public:
  explicit Lexer(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines_.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }

  // Next non-empty line, trimmed; nullopt at end of document.
  std::optional<std::string_view> NextLine() {
    pending_.clear();
    while (line_ < lines_.size()) {
      const std::string_view line = Trim(lines_[line_++]);
      if (!line.empty()) return line;
    }
    return std::nullopt;
  }

  // Next whitespace-separated token, crossing line boundaries.
  std::optional<std::string_view> NextToken() {
    while (pending_.empty()) {
      if (line_ >= lines_.size()) return std::nullopt;
      const std::string_view line = lines_[line_++];
      std::size_t pos = 0;
      while (pos < line.size()) {
        pos = line.find_first_not_of(" \t\r", pos);
        if (pos == std::string_view::npos) break;
        auto end = line.find_first_of(" \t\r", pos);
        if (end == std::string_view::npos) end = line.size();
        pending_.push_back(line.substr(pos, end - pos));
        pos = end;
      }
      std::reverse(pending_.begin(), pending_.end());
    }
    const std::string_view token = pending_.back();
    pending_.pop_back();
    return token;
  }

  // Drops the unread remainder of the current line.
  void SkipRestOfLine() { pending_.clear(); }

  int line_number() const { return static_cast<int>(line_); }

 private:
  std::vector<std::string_view> lines_;
  std::vector<std::string_view> pending_;
  std::size_t line_ = 0;
};

double ParseReal(std::string_view token, int line) {
  // std::from_chars for double is unavailable on some toolchains we build
  // with, so go through strtod on a bounded copy.
  const std::string copy(token);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() ||
      !std::isfinite(value)) {
    throw ParseError("expected a number, got '" + copy + "'", line);
  }
  return value;
}

long long ParseInteger(std::string_view token, int line) {
  long long value = 0;
  const auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'",
                     line);
  }
  return value;
}

std::string_view RequireToken(Lexer& lexer, std::string_view section) {
  const auto token = lexer.NextToken();
  if (!token || Upper(*token) == "EOF") {
    throw ParseError("truncated " + std::string(section),
                     lexer.line_number());
  }
  return *token;
}

double GeoRadians(double coordinate) {
  const double degrees = static_cast<double>(static_cast<long long>(coordinate));
  const double minutes = coordinate - degrees;
  return kGeoPi * (degrees + 5.0 * minutes / 3.0) / 180.0;
}

// Splits "KEY : VALUE" (the colon is optional for section markers).
std::pair<std::string, std::string> SplitHeader(std::string_view line) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) return {Upper(Trim(line)), ""};
  return {Upper(Trim(line.substr(0, colon))),
          std::string(Trim(line.substr(colon + 1)))};
}

std::vector<std::int64_t> ReadExplicitMatrix(Lexer& lexer, int n,
                                             const std::string& format) {
  std::vector<std::int64_t> m(static_cast<std::size_t>(n) * n, 0);
  auto next = [&]() -> std::int64_t {
    const std::string_view token = RequireToken(lexer, "EDGE_WEIGHT_SECTION");
    const double value = ParseReal(token, lexer.line_number());
    if (value < 0 || value != std::floor(value)) {
      throw ParseError("edge weight must be a nonnegative integer, got '" +
                           std::string(token) + "'",
                       lexer.line_number());
    }
    return static_cast<std::int64_t>(value);
  };
  auto set = [&](int i, int j, std::int64_t w) {
    m[static_cast<std::size_t>(i) * n + j] = w;
    m[static_cast<std::size_t>(j) * n + i] = w;
  };
  if (format == "FULL_MATRIX") {
    std::vector<std::int64_t> full(static_cast<std::size_t>(n) * n);
    for (auto& w : full) w = next();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (full[i * n + j] != full[j * n + i]) {
          throw ParseError("FULL_MATRIX is not symmetric at (" +
                               std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + ")",
                           lexer.line_number());
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) set(i, j, full[i * n + j]);
    }
  } else if (format == "UPPER_ROW") {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) set(i, j, next());
  } else if (format == "LOWER_ROW") {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) set(i, j, next());
  } else if (format == "UPPER_DIAG_ROW") {
    for (int i = 0; i < n; ++i) {
      next();
      for (int j = i + 1; j < n; ++j) set(i, j, next());
    }
  } else if (format == "LOWER_DIAG_ROW") {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) set(i, j, next());
      next();
    }
  } else {
    throw ParseError("unsupported format: EDGE_WEIGHT_FORMAT " + format, 0);
  }
  return m;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        message
                                  : message),
      line_(line) {}

std::string_view EdgeWeightKindName(EdgeWeightKind kind) {
  switch (kind) {
    case EdgeWeightKind::kEuc2D:
      return "EUC_2D";
    case EdgeWeightKind::kGeo:
      return "GEO";
    case EdgeWeightKind::kAtt:
      return "ATT";
    case EdgeWeightKind::kExplicit:
      return "EXPLICIT";
  }
  return "?";
}

std::int64_t Euc2DDistance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return static_cast<std::int64_t>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

std::int64_t AttDistance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
  const auto t = static_cast<std::int64_t>(r + 0.5);
  return static_cast<double>(t) < r ? t + 1 : t;
}

std::int64_t GeoDistance(const Point& a, const Point& b) {
  const double lat_a = GeoRadians(a.x);
  const double lon_a = GeoRadians(a.y);
  const double lat_b = GeoRadians(b.x);
  const double lon_b = GeoRadians(b.y);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  return static_cast<std::int64_t>(
      kGeoRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

Instance Instance::FromCoordinates(std::string name, EdgeWeightKind kind,
                                   std::vector<Point> coords) {
  if (kind == EdgeWeightKind::kExplicit) {
    throw ContractViolation("EXPLICIT instances need a matrix");
  }
  if (coords.size() < 4) throw ParseError("n < 4", 0);
  Instance instance;
  instance.name_ = std::move(name);
  instance.n_ = static_cast<int>(coords.size());
  instance.kind_ = kind;
  instance.coords_ = std::move(coords);
  return instance;
}

Instance Instance::FromMatrix(std::string name, int n,
                              std::vector<std::int64_t> matrix) {
  if (n < 4) throw ParseError("n < 4", 0);
  if (matrix.size() != static_cast<std::size_t>(n) * n) {
    throw ContractViolation("matrix size does not match n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto w = matrix[static_cast<std::size_t>(i) * n + j];
      if (w < 0) throw ContractViolation("negative distance");
      if (w != matrix[static_cast<std::size_t>(j) * n + i]) {
        throw ContractViolation("distance matrix is not symmetric");
      }
    }
  }
  Instance instance;
  instance.name_ = std::move(name);
  instance.n_ = n;
  instance.kind_ = EdgeWeightKind::kExplicit;
  instance.matrix_ = std::move(matrix);
  return instance;
}

std::int64_t Instance::Distance(Vertex u, Vertex v) const {
  if (u == v) throw ContractViolation("self-loop distance undefined");
  if (u >= static_cast<Vertex>(n_) || v >= static_cast<Vertex>(n_)) {
    throw ContractViolation("vertex out of range");
  }
  switch (kind_) {
    case EdgeWeightKind::kEuc2D:
      return Euc2DDistance(coords_[u], coords_[v]);
    case EdgeWeightKind::kAtt:
      return AttDistance(coords_[u], coords_[v]);
    case EdgeWeightKind::kGeo:
      return GeoDistance(coords_[u], coords_[v]);
    case EdgeWeightKind::kExplicit:
      return matrix_[static_cast<std::size_t>(u) * n_ + v];
  }
  return 0;
}

std::vector<std::int64_t> Instance::DistanceMatrix() const {
  if (kind_ == EdgeWeightKind::kExplicit) return matrix_;
  std::vector<std::int64_t> m(static_cast<std::size_t>(n_) * n_, 0);
  for (Vertex i = 0; i < static_cast<Vertex>(n_); ++i) {
    for (Vertex j = i + 1; j < static_cast<Vertex>(n_); ++j) {
      const auto d = Distance(i, j);
      m[static_cast<std::size_t>(i) * n_ + j] = d;
      m[static_cast<std::size_t>(j) * n_ + i] = d;
    }
  }
  return m;
}

Instance ParseInstance(std::string_view text) {
  Lexer lexer(text);
  std::string name;
  std::optional<int> dimension;
  std::string weight_type;
  std::string weight_format;
  std::vector<Point> coords;
  std::vector<std::int64_t> matrix;
  bool have_coords = false;
  bool have_matrix = false;

  auto require_dimension = [&](std::string_view section) {
    if (!dimension) {
      throw ParseError(std::string(section) + " before DIMENSION",
                       lexer.line_number());
    }
    return *dimension;
  };

  while (const auto line = lexer.NextLine()) {
    const auto [key, value] = SplitHeader(*line);
    if (key == "EOF") break;
    if (key == "NAME") {
      name = value;
    } else if (key == "TYPE") {
      const std::string type = Upper(value);
      if (type != "TSP") {
        throw ParseError("unsupported format: TYPE " + value,
                         lexer.line_number());
      }
    } else if (key == "DIMENSION") {
      const auto n = ParseInteger(Trim(value), lexer.line_number());
      if (n < 4) throw ParseError("n < 4", lexer.line_number());
      dimension = static_cast<int>(n);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      weight_type = Upper(value);
      if (weight_type != "EUC_2D" && weight_type != "GEO" &&
          weight_type != "ATT" && weight_type != "EXPLICIT") {
        throw ParseError("unsupported format: EDGE_WEIGHT_TYPE " + value,
                         lexer.line_number());
      }
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      weight_format = Upper(value);
    } else if (key == "NODE_COORD_SECTION") {
      const int n = require_dimension(key);
      coords.assign(n, Point{});
      std::vector<bool> seen(n, false);
      for (int i = 0; i < n; ++i) {
        const auto id =
            ParseInteger(RequireToken(lexer, key), lexer.line_number());
        if (id < 1 || id > n || seen[id - 1]) {
          throw ParseError("bad node id " + std::to_string(id),
                           lexer.line_number());
        }
        seen[id - 1] = true;
        const double x = ParseReal(RequireToken(lexer, key), lexer.line_number());
        const double y = ParseReal(RequireToken(lexer, key), lexer.line_number());
        coords[id - 1] = Point{x, y};
        lexer.SkipRestOfLine();
      }
      have_coords = true;
    } else if (key == "EDGE_WEIGHT_SECTION") {
      const int n = require_dimension(key);
      if (weight_type != "EXPLICIT") {
        throw ParseError("EDGE_WEIGHT_SECTION requires EDGE_WEIGHT_TYPE EXPLICIT",
                         lexer.line_number());
      }
      if (weight_format.empty()) {
        throw ParseError("EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT",
                         lexer.line_number());
      }
      matrix = ReadExplicitMatrix(lexer, n, weight_format);
      lexer.SkipRestOfLine();
      have_matrix = true;
    } else if (key == "DISPLAY_DATA_SECTION") {
      const int n = require_dimension(key);
      for (int i = 0; i < 3 * n; ++i) RequireToken(lexer, key);
      lexer.SkipRestOfLine();
    } else if (key == "FIXED_EDGES_SECTION" || key == "TOUR_SECTION" ||
               key == "DEMAND_SECTION" || key == "DEPOT_SECTION") {
      throw ParseError("unsupported format: section " + key,
                       lexer.line_number());
    }
    // COMMENT, NODE_COORD_TYPE, DISPLAY_DATA_TYPE and unknown keys are ignored.
  }

  if (!dimension) throw ParseError("missing DIMENSION", 0);
  if (weight_type.empty()) throw ParseError("missing EDGE_WEIGHT_TYPE", 0);
  if (weight_type == "EXPLICIT") {
    if (!have_matrix) throw ParseError("missing EDGE_WEIGHT_SECTION", 0);
    return Instance::FromMatrix(name, *dimension, std::move(matrix));
  }
  if (!have_coords) throw ParseError("missing NODE_COORD_SECTION", 0);
  const EdgeWeightKind kind = weight_type == "EUC_2D" ? EdgeWeightKind::kEuc2D
                              : weight_type == "GEO"  ? EdgeWeightKind::kGeo
                                                      : EdgeWeightKind::kAtt;
  return Instance::FromCoordinates(name, kind, std::move(coords));
}

std::string ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Instance ReadInstanceFile(const std::string& path) {
  return ParseInstance(ReadFileToString(path));
}

Tour::Tour(std::vector<Vertex> order, int n) : order_(std::move(order)) {
  if (static_cast<int>(order_.size()) != n) {
    throw ParseError("dimension mismatch: tour has " +
                         std::to_string(order_.size()) + " vertices, expected " +
                         std::to_string(n),
                     0);
  }
  std::vector<bool> seen(n, false);
  for (const Vertex v : order_) {
    if (v >= static_cast<Vertex>(n) || seen[v]) {
      throw ParseError("not a permutation: vertex " + std::to_string(v + 1), 0);
    }
    seen[v] = true;
  }
  edges_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vertex a = order_[i];
    const Vertex b = order_[(i + 1) % n];
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
}

bool Tour::Contains(Vertex u, Vertex v) const {
  const std::pair<Vertex, Vertex> key{std::min(u, v), std::max(u, v)};
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

std::int64_t Tour::Length(const Instance& instance) const {
  std::int64_t total = 0;
  for (const auto& [u, v] : edges_) total += instance.Distance(u, v);
  return total;
}

Tour ParseTour(std::string_view text, std::optional<int> n) {
  Lexer lexer(text);
  std::optional<int> dimension;
  std::vector<Vertex> order;
  bool found = false;
  while (const auto line = lexer.NextLine()) {
    const auto [key, value] = SplitHeader(*line);
    if (key == "EOF") break;
    if (key == "DIMENSION") {
      dimension = static_cast<int>(ParseInteger(Trim(value), lexer.line_number()));
    } else if (key == "TYPE") {
      if (Upper(value) != "TOUR") {
        throw ParseError("unsupported format: TYPE " + value,
                         lexer.line_number());
      }
    } else if (key == "TOUR_SECTION") {
      found = true;
      while (true) {
        const auto token = lexer.NextToken();
        if (!token || Upper(*token) == "EOF") {
          throw ParseError("truncated TOUR_SECTION (missing -1)",
                           lexer.line_number());
        }
        const auto id = ParseInteger(*token, lexer.line_number());
        if (id == -1) break;
        if (id < 1) {
          throw ParseError("bad vertex id " + std::to_string(id),
                           lexer.line_number());
        }
        order.push_back(static_cast<Vertex>(id - 1));
      }
      lexer.SkipRestOfLine();
    }
  }
  if (!found) throw ParseError("missing TOUR_SECTION", 0);
  if (n && dimension && *dimension != *n) {
    throw ParseError("dimension mismatch: tour DIMENSION " +
                         std::to_string(*dimension) + " vs instance " +
                         std::to_string(*n),
                     0);
  }
  const int expected =
      n ? *n : (dimension ? *dimension : static_cast<int>(order.size()));
  return Tour(std::move(order), expected);
}

Tour ReadTourFile(const std::string& path, std::optional<int> n) {
  return ParseTour(ReadFileToString(path), n);
}

}  // namespace quadfreq
