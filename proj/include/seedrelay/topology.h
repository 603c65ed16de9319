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

#ifndef SEEDRELAY_TOPOLOGY_H_
#define SEEDRELAY_TOPOLOGY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/random.h"

namespace seedrelay {

// Hops shorter than this are clamped so co-located points keep a finite SNR.
inline constexpr double kMinHopDistanceMeters = 1.0;

struct Point2D {
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

double Distance(const Point2D& a, const Point2D& b);

// Ordered chain of device ids, edge device first. The last device in the
// chain transmits to the server; every other device transmits to its
// successor.
struct Route {
  std::vector<int> devices;
};

struct Topology {
  std::vector<Point2D> devices;  // device id i lives at devices[i - 1]
  Point2D server;
  std::vector<Route> routes;
  int max_hops = 1;
  double plane_side = 0.0;  // meters

  int num_devices() const { return static_cast<int>(devices.size()); }
  const Point2D& position(int device_id) const {
    return devices[static_cast<std::size_t>(device_id - 1)];
  }
};

// n points drawn i.i.d. uniform on [0, plane_side]^2.
absl::StatusOr<std::vector<Point2D>> PlaceDevices(int n, double plane_side,
                                                  Rng& rng);

// Greedy nearest-neighbor chains toward the server. Starting from the farthest
// unassigned device, each route grows by the unassigned device nearest to the
// current head among those strictly closer to the server than the head; the
// server itself is always a candidate and ends the route when it is the
// nearest. Ties go to the server, then to the lower device id. Deterministic.
std::vector<Route> BuildRoutes(std::span<const Point2D> devices,
                               const Point2D& server, int max_hops);

// Places devices, puts the server at the plane center and builds routes.
absl::StatusOr<Topology> GenerateTopology(int n, int max_hops,
                                          double plane_side, Rng& rng);

// Distance from route.devices[position] to its direct destination, clamped to
// kMinHopDistanceMeters.
absl::StatusOr<double> HopDistance(const Route& route, std::size_t position,
                                   const Topology& topology);

// Partition, length and bounds checks.
absl::Status ValidateTopology(const Topology& topology);

// Line format: "N M plane_side", then N lines "id x y", then one line per
// route with space-separated device ids (edge device first). The server is
// placed at the plane center.
std::string SerializeTopology(const Topology& topology);
absl::StatusOr<Topology> ParseTopology(const std::string& text);

}  // namespace seedrelay

#endif  // SEEDRELAY_TOPOLOGY_H_
