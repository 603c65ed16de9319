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
#include <sstream>

#include "absl/strings/str_cat.h"

namespace seedrelay {

double Distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

absl::StatusOr<std::vector<Point2D>> PlaceDevices(int n, double plane_side,
                                                  Rng& rng) {
  if (n <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("PlaceDevices: empty network (n = ", n, ")"));
  }
  if (!(plane_side > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("PlaceDevices: plane_side must be positive, got ",
                     plane_side));
  }
  std::vector<Point2D> points(static_cast<std::size_t>(n));
  for (Point2D& p : points) {
    p.x = rng.Uniform01() * plane_side;
    p.y = rng.Uniform01() * plane_side;
  }
  return points;
}

std::vector<Route> BuildRoutes(std::span<const Point2D> devices,
                               const Point2D& server, int max_hops) {
  const std::size_t n = devices.size();
  std::vector<double> to_server(n);
  for (std::size_t i = 0; i < n; ++i) to_server[i] = Distance(devices[i], server);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return to_server[a] > to_server[b];
  });

  std::vector<bool> assigned(n, false);
  std::vector<Route> routes;
  for (std::size_t start : order) {
    if (assigned[start]) continue;
    Route route;
    std::size_t head = start;
    assigned[head] = true;
    route.devices.push_back(static_cast<int>(head) + 1);
    while (static_cast<int>(route.devices.size()) < max_hops) {
      double best = to_server[head];  // server candidate
      std::size_t next = n;           // n marks the server
      for (std::size_t c = 0; c < n; ++c) {
        if (assigned[c] || !(to_server[c] < to_server[head])) continue;
        const double d = Distance(devices[head], devices[c]);
        if (d < best) {  // strict: server and lower ids win ties
          best = d;
          next = c;
        }
      }
      if (next == n) break;
      assigned[next] = true;
      route.devices.push_back(static_cast<int>(next) + 1);
      head = next;
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

absl::StatusOr<Topology> GenerateTopology(int n, int max_hops,
                                          double plane_side, Rng& rng) {
  if (max_hops < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("GenerateTopology: max_hops must be >= 1, got ", max_hops));
  }
  auto points = PlaceDevices(n, plane_side, rng);
  if (!points.ok()) return points.status();
  Topology t;
  t.devices = *std::move(points);
  t.server = Point2D{plane_side / 2.0, plane_side / 2.0};
  t.max_hops = max_hops;
  t.plane_side = plane_side;
  t.routes = BuildRoutes(t.devices, t.server, max_hops);
  return t;
}

absl::StatusOr<double> HopDistance(const Route& route, std::size_t position,
                                   const Topology& topology) {
  if (position >= route.devices.size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "HopDistance: position ", position, " outside route of length ",
        route.devices.size()));
  }
  const Point2D& from = topology.position(route.devices[position]);
  const Point2D& to = position + 1 < route.devices.size()
                          ? topology.position(route.devices[position + 1])
                          : topology.server;
  return std::max(Distance(from, to), kMinHopDistanceMeters);
}

absl::Status ValidateTopology(const Topology& topology) {
  const int n = topology.num_devices();
  if (n == 0) return absl::InvalidArgumentError("topology has no devices");
  if (topology.max_hops < 1) {
    return absl::InvalidArgumentError("topology max_hops must be >= 1");
  }
  for (int id = 1; id <= n; ++id) {
    const Point2D& p = topology.position(id);
    if (p.x < 0 || p.y < 0 || p.x > topology.plane_side ||
        p.y > topology.plane_side) {
      return absl::InvalidArgumentError(
          absl::StrCat("device ", id, " lies outside the plane"));
    }
  }
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t j = 0; j < topology.routes.size(); ++j) {
    const auto& members = topology.routes[j].devices;
    if (members.empty() ||
        static_cast<int>(members.size()) > topology.max_hops) {
      return absl::InvalidArgumentError(absl::StrCat(
          "route ", j, " has length ", members.size(), ", allowed 1..",
          topology.max_hops));
    }
    for (int id : members) {
      if (id < 1 || id > n) {
        return absl::InvalidArgumentError(
            absl::StrCat("route ", j, " names unknown device ", id));
      }
      if (++seen[static_cast<std::size_t>(id)] > 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("device ", id, " appears in more than one route slot"));
      }
    }
  }
  for (int id = 1; id <= n; ++id) {
    if (seen[static_cast<std::size_t>(id)] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("device ", id, " is not on any route"));
    }
  }
  return absl::OkStatus();
}

std::string SerializeTopology(const Topology& topology) {
  std::ostringstream out;
  out.precision(17);
  out << topology.num_devices() << ' ' << topology.max_hops << ' '
      << topology.plane_side << '\n';
  for (int id = 1; id <= topology.num_devices(); ++id) {
    const Point2D& p = topology.position(id);
    out << id << ' ' << p.x << ' ' << p.y << '\n';
  }
  for (const Route& r : topology.routes) {
    for (std::size_t k = 0; k < r.devices.size(); ++k) {
      if (k > 0) out << ' ';
      out << r.devices[k];
    }
    out << '\n';
  }
  return out.str();
}

absl::StatusOr<Topology> ParseTopology(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) return absl::InvalidArgumentError("topology: empty input");
  Topology t;
  int n = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> n >> t.max_hops >> t.plane_side) || n <= 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "topology line ", line_no, ": expected header 'N M plane_side'"));
    }
  }
  t.devices.resize(static_cast<std::size_t>(n));
  std::vector<bool> have(static_cast<std::size_t>(n), false);
  for (int k = 0; k < n; ++k) {
    if (!next_line()) {
      return absl::InvalidArgumentError(
          absl::StrCat("topology: expected ", n, " device lines, got ", k));
    }
    std::istringstream row(line);
    int id;
    Point2D p;
    if (!(row >> id >> p.x >> p.y) || id < 1 || id > n ||
        have[static_cast<std::size_t>(id - 1)]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "topology line ", line_no, ": expected unique 'id x y' with id in 1..",
          n));
    }
    have[static_cast<std::size_t>(id - 1)] = true;
    t.devices[static_cast<std::size_t>(id - 1)] = p;
  }
  while (next_line()) {
    std::istringstream row(line);
    Route r;
    int id;
    while (row >> id) r.devices.push_back(id);
    if (!row.eof()) {
      return absl::InvalidArgumentError(
          absl::StrCat("topology line ", line_no, ": route ids must be integers"));
    }
    t.routes.push_back(std::move(r));
  }
  t.server = Point2D{t.plane_side / 2.0, t.plane_side / 2.0};
  if (absl::Status s = ValidateTopology(t); !s.ok()) return s;
  return t;
}

}  // namespace seedrelay
