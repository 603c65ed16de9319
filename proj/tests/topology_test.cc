// Copyright 2026 The Seedrelay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "seedrelay/topology.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gtest/gtest.h"
#include "seedrelay/random.h"

namespace seedrelay {
namespace {

TEST(PlaceDevicesTest, PointsInsidePlane) {
  Rng rng(1);
  auto pts = PlaceDevices(10, 10'000.0, rng);
  ASSERT_TRUE(pts.ok());
  ASSERT_EQ(pts->size(), 10u);
  for (const Point2D& p : *pts) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 10'000.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 10'000.0);
  }
}

TEST(PlaceDevicesTest, SingleDeviceInBounds) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    auto pts = PlaceDevices(1, 5.0, rng);
    ASSERT_TRUE(pts.ok());
    ASSERT_EQ(pts->size(), 1u);
    EXPECT_GE((*pts)[0].x, 0.0);
    EXPECT_LE((*pts)[0].y, 5.0);
  }
}

TEST(PlaceDevicesTest, Deterministic) {
  Rng a(42), b(42);
  auto pa = PlaceDevices(3, 100.0, a);
  auto pb = PlaceDevices(3, 100.0, b);
  ASSERT_TRUE(pa.ok() && pb.ok());
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ((*pa)[i].x, (*pb)[i].x);
    EXPECT_EQ((*pa)[i].y, (*pb)[i].y);
  }
}

TEST(PlaceDevicesTest, EmptyNetworkRejected) {
  Rng rng(1);
  EXPECT_EQ(PlaceDevices(0, 10.0, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(PlaceDevices(3, 0.0, rng).ok());
}

TEST(BuildRoutesTest, SingleHopGivesSingletons) {
  Rng rng(7);
  auto t = GenerateTopology(10, 1, 10'000.0, rng);
  ASSERT_TRUE(t.ok());
  ASSERT_EQ(t->routes.size(), 10u);
  for (const Route& r : t->routes) EXPECT_EQ(r.devices.size(), 1u);
}

TEST(BuildRoutesTest, SingleDevice) {
  const std::vector<Point2D> pts{{1.0, 2.0}};
  auto routes = BuildRoutes(pts, {5.0, 5.0}, 5);
  ASSERT_EQ(routes.size(), 1u);
  EXPECT_EQ(routes[0].devices, std::vector<int>{1});
}

TEST(BuildRoutesTest, CollinearChainFarToNear) {
  const Point2D server{5000.0, 5000.0};
  const std::vector<double> offsets{400.0, 100.0, 300.0, 200.0};
  std::vector<Point2D> pts;
  for (double o : offsets) pts.push_back({server.x + o, server.y});
  // Brute force: on a line on one side of the server the nearest strictly
  // closer device is always the next one by distance.
  std::vector<int> expected(offsets.size());
  std::iota(expected.begin(), expected.end(), 1);
  std::sort(expected.begin(), expected.end(),
            [&](int a, int b) { return offsets[a - 1] > offsets[b - 1]; });
  auto routes = BuildRoutes(pts, server, 4);
  ASSERT_EQ(routes.size(), 1u);
  EXPECT_EQ(routes[0].devices, expected);
}

TEST(BuildRoutesTest, ChainLengthCappedAtM) {
  const Point2D server{0.0, 0.0};
  std::vector<Point2D> pts;
  for (int i = 1; i <= 5; ++i) pts.push_back({100.0 * i, 0.0});
  auto routes = BuildRoutes(pts, server, 2);
  ASSERT_EQ(routes.size(), 3u);
  EXPECT_EQ(routes[0].devices, (std::vector<int>{5, 4}));
  EXPECT_EQ(routes[1].devices, (std::vector<int>{3, 2}));
  EXPECT_EQ(routes[2].devices, (std::vector<int>{1}));
}

TEST(BuildRoutesTest, ServerPreferredWhenNearest) {
  // Device 2 is closer to the server but farther from device 1 than the
  // server is.
  const std::vector<Point2D> pts{{0.0, 100.0}, {0.0, -90.0}};
  auto routes = BuildRoutes(pts, {0.0, 0.0}, 3);
  ASSERT_EQ(routes.size(), 2u);
  EXPECT_EQ(routes[0].devices, std::vector<int>{1});
  EXPECT_EQ(routes[1].devices, std::vector<int>{2});
}

TEST(BuildRoutesTest, EquidistantCandidatesBreakToLowerId) {
  const std::vector<Point2D> pts{{0.0, 100.0}, {-10.0, 50.0}, {10.0, 50.0}};
  auto routes = BuildRoutes(pts, {0.0, 0.0}, 5);
  ASSERT_EQ(routes.size(), 2u);
  EXPECT_EQ(routes[0].devices, (std::vector<int>{1, 2}));
  EXPECT_EQ(routes[1].devices, std::vector<int>{3});
}

TEST(BuildRoutesTest, RandomTopologiesPartitionAndProgress) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int n = 1 + static_cast<int>(seed % 30);
    const int m = 1 + static_cast<int>(seed % 6);
    auto t = GenerateTopology(n, m, 10'000.0, rng);
    ASSERT_TRUE(t.ok());
    ASSERT_TRUE(ValidateTopology(*t).ok());
    std::set<int> seen;
    for (const Route& r : t->routes) {
      ASSERT_GE(r.devices.size(), 1u);
      ASSERT_LE(static_cast<int>(r.devices.size()), m);
      for (std::size_t k = 0; k < r.devices.size(); ++k) {
        EXPECT_TRUE(seen.insert(r.devices[k]).second);
        if (k + 1 < r.devices.size()) {
          EXPECT_LT(Distance(t->position(r.devices[k + 1]), t->server),
                    Distance(t->position(r.devices[k]), t->server));
        }
      }
    }
    EXPECT_EQ(static_cast<int>(seen.size()), n);
    EXPECT_GE(static_cast<int>(t->routes.size()), (n + m - 1) / m);
    // Routes come from placements alone.
    auto again = BuildRoutes(t->devices, t->server, m);
    ASSERT_EQ(again.size(), t->routes.size());
    for (std::size_t j = 0; j < again.size(); ++j) {
      EXPECT_EQ(again[j].devices, t->routes[j].devices);
    }
  }
}

TEST(HopDistanceTest, LastHopToServer) {
  Topology t;
  t.devices = {{0.0, 0.0}};
  t.server = {3.0, 4.0};
  t.routes = {Route{{1}}};
  auto d = HopDistance(t.routes[0], 0, t);
  ASSERT_TRUE(d.ok());
  EXPECT_DOUBLE_EQ(*d, 5.0);
}

TEST(HopDistanceTest, CoLocatedClamped) {
  Topology t;
  t.devices = {{2.0, 2.0}};
  t.server = {2.0, 2.0};
  t.routes = {Route{{1}}};
  auto d = HopDistance(t.routes[0], 0, t);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(*d, kMinHopDistanceMeters);
}

TEST(HopDistanceTest, CollinearChain) {
  Topology t;
  t.devices = {{0.0, 0.0}, {1000.0, 0.0}};
  t.server = {2000.0, 0.0};
  t.routes = {Route{{1, 2}}};
  EXPECT_DOUBLE_EQ(*HopDistance(t.routes[0], 0, t), 1000.0);
  EXPECT_DOUBLE_EQ(*HopDistance(t.routes[0], 1, t), 1000.0);
  EXPECT_EQ(HopDistance(t.routes[0], 2, t).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(TopologyTextTest, RoundTrip) {
  Rng rng(99);
  auto t = GenerateTopology(12, 3, 10'000.0, rng);
  ASSERT_TRUE(t.ok());
  auto parsed = ParseTopology(SerializeTopology(*t));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->max_hops, 3);
  ASSERT_EQ(parsed->num_devices(), 12);
  for (int i = 1; i <= 12; ++i) {
    EXPECT_NEAR(parsed->position(i).x, t->position(i).x, 1e-6);
    EXPECT_NEAR(parsed->position(i).y, t->position(i).y, 1e-6);
  }
  ASSERT_EQ(parsed->routes.size(), t->routes.size());
  for (std::size_t j = 0; j < t->routes.size(); ++j) {
    EXPECT_EQ(parsed->routes[j].devices, t->routes[j].devices);
  }
  EXPECT_DOUBLE_EQ(parsed->server.x, 5000.0);
}

TEST(TopologyTextTest, RejectsMalformed) {
  EXPECT_FALSE(ParseTopology("").ok());
  EXPECT_FALSE(ParseTopology("2 1 100\n1 0 0\n").ok());              // missing device
  EXPECT_FALSE(ParseTopology("2 1 100\n1 0 0\n2 5 5\n1 2\n").ok());  // route too long
  EXPECT_FALSE(ParseTopology("2 2 100\n1 0 0\n2 5 5\n1\n").ok());    // device 2 unrouted
  EXPECT_FALSE(ParseTopology("1 1 100\n1 500 0\n1\n").ok());         // off the plane
  EXPECT_TRUE(ParseTopology("2 2 100\n1 0 0\n2 5 5\n1 2\n").ok());
}

}  // namespace
}  // namespace seedrelay
