#include "quadfreq/tsplib.h"

#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

namespace quadfreq {
namespace {

const std::string kDataDir = QUADFREQ_DATA_DIR;

// Independent evaluation of the TSPLIB GEO rule.
long long GeoOracle(double lat1, double lon1, double lat2, double lon2) {
  auto rad = [](double c) {
    const int deg = static_cast<int>(c);
    return 3.141592 * (deg + 5.0 * (c - deg) / 3.0) / 180.0;
  };
  const double q1 = std::cos(rad(lon1) - rad(lon2));
  const double q2 = std::cos(rad(lat1) - rad(lat2));
  const double q3 = std::cos(rad(lat1) + rad(lat2));
  return static_cast<long long>(
      6378.388 * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

std::string SquareEuc2D() {
  return "NAME: square\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\n"
         "NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 6 0\n4 3 -4\nEOF\n";
}

TEST(DistanceTest, Euc2DRoundsToNearest) {
  EXPECT_EQ(Euc2DDistance({0, 0}, {3, 4}), 5);
  EXPECT_EQ(Euc2DDistance({0, 0}, {1, 1}), 1);      // 1.414
  EXPECT_EQ(Euc2DDistance({0, 0}, {1.5, 1.5}), 2);  // 2.121
}

TEST(DistanceTest, AttPseudoEuclidean) {
  // r = sqrt(100 / 10) = 3.162, t = 3 < r.
  EXPECT_EQ(AttDistance({0, 0}, {10, 0}), 4);
  // r = sqrt(1000 / 10) = 10 exactly.
  EXPECT_EQ(AttDistance({0, 0}, {30, 10}), 10);
}

TEST(DistanceTest, GeoMatchesIndependentFormula) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-89.59, 89.59);
  std::uniform_real_distribution<double> lon(-179.59, 179.59);
  for (int i = 0; i < 1000; ++i) {
    const Point a{lat(rng), lon(rng)};
    const Point b{lat(rng), lon(rng)};
    EXPECT_EQ(GeoDistance(a, b), GeoOracle(a.x, a.y, b.x, b.y));
  }
}

TEST(DistanceTest, SymmetricForAllKinds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-80.0, 80.0);
  for (const EdgeWeightKind kind :
       {EdgeWeightKind::kEuc2D, EdgeWeightKind::kAtt, EdgeWeightKind::kGeo}) {
    std::vector<Point> pts(20);
    for (Point& p : pts) p = {coord(rng), coord(rng)};
    const Instance inst = Instance::FromCoordinates("r", kind, pts);
    for (Vertex u = 0; u < 20; ++u) {
      for (Vertex v = u + 1; v < 20; ++v) {
        EXPECT_EQ(inst.Distance(u, v), inst.Distance(v, u));
      }
    }
  }
}

TEST(DistanceTest, SelfLoopRejected) {
  const Instance inst = ParseInstance(SquareEuc2D());
  try {
    inst.Distance(2, 2);
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_STREQ(e.what(), "self-loop distance undefined");
  }
}

TEST(ParseInstanceTest, MinimalEuc2D) {
  const Instance inst = ParseInstance(SquareEuc2D());
  EXPECT_EQ(inst.name(), "square");
  EXPECT_EQ(inst.size(), 4);
  EXPECT_EQ(inst.kind(), EdgeWeightKind::kEuc2D);
  EXPECT_EQ(inst.Distance(0, 1), 5);
  EXPECT_EQ(inst.Distance(0, 2), 6);
  EXPECT_EQ(inst.Distance(1, 3), 8);
}

TEST(ParseInstanceTest, DimensionBelowFour) {
  const std::string text =
      "NAME: t\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n";
  try {
    ParseInstance(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("n < 4"), std::string::npos);
  }
}

TEST(ParseInstanceTest, UnsupportedTypeNamed) {
  const std::string text =
      "NAME: t\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: CEIL_2D\n";
  try {
    ParseInstance(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported format"),
              std::string::npos);
    EXPECT_NE(std::string(e.what()).find("CEIL_2D"), std::string::npos);
  }
}

TEST(ParseInstanceTest, TruncatedSectionReportsLine) {
  const std::string text =
      "NAME: t\nTYPE: TSP\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\n";
  try {
    ParseInstance(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0);
    EXPECT_NE(std::string(e.what()).find("truncated NODE_COORD_SECTION"),
              std::string::npos);
  }
}

TEST(ParseInstanceTest, ExplicitFormatsAgree) {
  // Same symmetric 5x5 matrix in every supported layout.
  const int n = 5;
  std::vector<std::int64_t> m(n * n, 0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = 1 + static_cast<std::int64_t>(rng() % 500);
    }
  }
  auto body = [&](const std::string& format) {
    std::string s;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const bool take = (format == "FULL_MATRIX") ||
                          (format == "UPPER_ROW" && j > i) ||
                          (format == "LOWER_ROW" && j < i) ||
                          (format == "UPPER_DIAG_ROW" && j >= i) ||
                          (format == "LOWER_DIAG_ROW" && j <= i);
        if (take) s += std::to_string(m[i * n + j]) + " ";
      }
      s += "\n";
    }
    return s;
  };
  for (const std::string format : {"FULL_MATRIX", "UPPER_ROW", "LOWER_ROW",
                                   "UPPER_DIAG_ROW", "LOWER_DIAG_ROW"}) {
    const std::string text =
        "NAME: m\nTYPE: TSP\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: " + format + "\nEDGE_WEIGHT_SECTION\n" +
        body(format) + "EOF\n";
    const Instance inst = ParseInstance(text);
    EXPECT_EQ(inst.kind(), EdgeWeightKind::kExplicit) << format;
    EXPECT_EQ(inst.DistanceMatrix(), m) << format;
  }
}

TEST(ParseInstanceTest, FullMatrixMustBeSymmetric) {
  const std::string text =
      "NAME: m\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
      "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n"
      "0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 7 0\nEOF\n";
  EXPECT_THROW(ParseInstance(text), ParseError);
}

TEST(ParseInstanceTest, Gr17) {
  const Instance inst = ReadInstanceFile(kDataDir + "/gr17.tsp");
  EXPECT_EQ(inst.size(), 17);
  EXPECT_EQ(inst.kind(), EdgeWeightKind::kExplicit);
  EXPECT_EQ(inst.Distance(0, 1), 633);
  EXPECT_EQ(inst.Distance(16, 15), 336);
}

TEST(ParseInstanceTest, MissingFileNamesPath) {
  try {
    ReadInstanceFile("/nonexistent/x.tsp");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/x.tsp"),
              std::string::npos);
  }
}

struct KnownOptimum {
  const char* name;
  std::int64_t length;
};

class OptimalTourLengthTest : public ::testing::TestWithParam<KnownOptimum> {};

TEST_P(OptimalTourLengthTest, MatchesKnownOptimum) {
  const std::string name = GetParam().name;
  const Instance inst = ReadInstanceFile(kDataDir + "/" + name + ".tsp");
  const Tour tour = ReadTourFile(kDataDir + "/" + name + ".opt.tour", inst.size());
  EXPECT_EQ(tour.Length(inst), GetParam().length);
}

INSTANTIATE_TEST_SUITE_P(
    Bundled, OptimalTourLengthTest,
    ::testing::Values(KnownOptimum{"gr17", 2085}, KnownOptimum{"gr24", 1272},
                      KnownOptimum{"berlin52", 7542},
                      KnownOptimum{"pcb442", 50778},
                      KnownOptimum{"gr666", 294358}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(ParseTourTest, IdentityTour) {
  const Tour tour = ParseTour("TOUR_SECTION\n1\n2\n3\n4\n-1\n", 4);
  EXPECT_EQ(tour.order(), (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(tour.edges().size(), 4u);
  EXPECT_TRUE(tour.Contains(3, 0));
  EXPECT_FALSE(tour.Contains(0, 2));
}

TEST(ParseTourTest, RepeatedVertexRejected) {
  try {
    ParseTour("TOUR_SECTION\n1\n2\n2\n4\n-1\n", 4);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("not a permutation"),
              std::string::npos);
  }
}

TEST(ParseTourTest, LengthMismatchRejected) {
  try {
    ParseTour("TOUR_SECTION\n1\n2\n3\n-1\n", 4);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension mismatch"),
              std::string::npos);
  }
}

TEST(ParseTourTest, MissingTerminatorRejected) {
  EXPECT_THROW(ParseTour("TOUR_SECTION\n1\n2\n3\n4\n", 4), ParseError);
}

TEST(ParseTourTest, Berlin52HasDegreeTwoEverywhere) {
  const Tour tour = ReadTourFile(kDataDir + "/berlin52.opt.tour");
  ASSERT_EQ(tour.edges().size(), 52u);
  std::vector<int> degree(52, 0);
  for (const auto& [u, v] : tour.edges()) {
    ++degree[u];
    ++degree[v];
  }
  for (const int d : degree) EXPECT_EQ(d, 2);
}

}  // namespace
}  // namespace quadfreq
