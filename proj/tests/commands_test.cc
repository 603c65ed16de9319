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


#include "seedrelay/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "gtest/gtest.h"
#include "json.hpp"
#include "seedrelay/codec.h"
#include "seedrelay/topology.h"

namespace seedrelay {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  return fs::path(::testing::TempDir()) / ("seedrelay_cmd_" + name);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteBytes(const fs::path& p, const std::vector<uint8_t>& bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

Image Blob(int r0, int c0, uint8_t v) {
  Image img;
  for (int r = r0; r < r0 + 4; ++r) {
    for (int c = c0; c < c0 + 4; ++c) img.at(r, c) = v;
  }
  return img;
}

TEST(ValueListTest, Parses) {
  auto v = ParseValueList("0, 0.02,inf");
  ASSERT_TRUE(v.ok());
  ASSERT_EQ(v->size(), 3u);
  EXPECT_EQ((*v)[1], 0.02);
  EXPECT_TRUE(std::isinf((*v)[2]));
  EXPECT_FALSE(ParseValueList("").ok());
  EXPECT_FALSE(ParseValueList("1,x").ok());
}

TEST(CmdRunTest, SameSeedSameBytes) {
  GlobalOptions o;
  o.seed = 11;
  o.overrides = {"rho=0.02", "l=1"};
  std::ostringstream a, b, err;
  ASSERT_EQ(CmdRun(o, a, err), kExitOk) << err.str();
  ASSERT_EQ(CmdRun(o, b, err), kExitOk);
  EXPECT_EQ(a.str(), b.str());
  const auto j = nlohmann::json::parse(a.str());
  EXPECT_EQ(j["seed"], 11);
}

TEST(CmdRunTest, ConfigErrors) {
  std::ostringstream out, err;
  GlobalOptions o;
  o.overrides = {"bogus=1"};
  EXPECT_EQ(CmdRun(o, out, err), kExitConfig);
  EXPECT_NE(err.str().find("bogus"), std::string::npos);

  GlobalOptions missing;
  missing.config_path = "/nonexistent/x.ini";
  EXPECT_EQ(CmdRun(missing, out, err), kExitIo);

  GlobalOptions both;
  both.synthetic = true;
  both.mnist_dir = "/tmp";
  EXPECT_EQ(CmdRun(both, out, err), kExitConfig);

  GlobalOptions cap;
  cap.overrides = {"max_slots_per_hop=1"};
  EXPECT_EQ(CmdRun(cap, out, err), kExitRuntime);
}

TEST(CmdRunTest, WarnsWhenNothingArrives) {
  GlobalOptions o;
  o.overrides = {"tau=1", "slot_duration_s=0.00001"};
  std::ostringstream out, err;
  ASSERT_EQ(CmdRun(o, out, err), kExitOk);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
}

TEST(CmdRunTest, TopologyFileOverridesSize) {
  Rng rng(3);
  auto generated = GenerateTopology(3, 3, 1000.0, rng);
  ASSERT_TRUE(generated.ok());
  const fs::path topo = Scratch("topo.txt");
  {
    std::ofstream f(topo);
    f << SerializeTopology(*generated);
  }
  GlobalOptions o;
  o.topology_file = topo.string();
  std::ostringstream out, err;
  ASSERT_EQ(CmdRun(o, out, err), kExitOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["routes"].size(), generated->routes.size());

  std::ofstream(topo) << "garbage\n";
  EXPECT_EQ(CmdRun(o, out, err), kExitConfig);
}

TEST(CmdSweepTest, CsvShape) {
  GlobalOptions o;
  std::ostringstream out, err;
  ASSERT_EQ(CmdSweep(o, {"M", "1,2,3,4,5", 2}, out, err), kExitOk) << err.str();
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);

  std::ostringstream rho;
  ASSERT_EQ(CmdSweep(o, {"rho", "0,0.04,0.15", 2}, rho, err), kExitOk);
  const std::string rho_csv = rho.str();
  EXPECT_EQ(std::count(rho_csv.begin(), rho_csv.end(), '\n'), 4);
}

TEST(CmdSweepTest, JobsDoNotChangeOutput) {
  GlobalOptions serial;
  GlobalOptions parallel;
  parallel.jobs = 4;
  std::ostringstream a, b, err;
  ASSERT_EQ(CmdSweep(serial, {"l", "0,1,2", 4}, a, err), kExitOk);
  ASSERT_EQ(CmdSweep(parallel, {"l", "0,1,2", 4}, b, err), kExitOk);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CmdSweepTest, Errors) {
  std::ostringstream out, err;
  GlobalOptions o;
  EXPECT_EQ(CmdSweep(o, {"gamma", "1", 1}, out, err), kExitConfig);
  EXPECT_EQ(CmdSweep(o, {"rho", "2", 1}, out, err), kExitConfig);
  EXPECT_EQ(CmdSweep(o, {"rho", "0.1", 0}, out, err), kExitConfig);
  GlobalOptions bad_out;
  bad_out.out = "/nonexistent/dir/out.csv";
  std::ostringstream e2;
  EXPECT_EQ(CmdSweep(bad_out, {"rho", "0", 1}, out, e2), kExitIo);
  EXPECT_NE(e2.str().find("/nonexistent/dir/out.csv"), std::string::npos);
}

TEST(CmdExportTest, WritesFileAndSidecar) {
  const fs::path path = Scratch("seeds.bin");
  GlobalOptions o;
  o.out = path.string();
  std::ostringstream out, err;
  ASSERT_EQ(CmdExportSeeds(o, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("wrote"), std::string::npos);
  const std::string bytes = Slurp(path);
  const auto side = nlohmann::json::parse(Slurp(path.string() + ".json"));
  EXPECT_EQ(side["total_bytes"], bytes.size());

  std::ostringstream mds, merr;
  GlobalOptions plain;
  ASSERT_EQ(CmdMds(plain, path.string(), mds, merr), kExitOk) << merr.str();
  const std::string csv = mds.str();
  EXPECT_EQ(csv.rfind("id,x,y,label\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            side["delivered_samples"].get<std::size_t>() + 1);

  GlobalOptions no_out;
  EXPECT_EQ(CmdExportSeeds(no_out, out, err), kExitConfig);
}

TEST(CmdExportTest, EmptyInboxWarns) {
  const fs::path path = Scratch("empty.bin");
  GlobalOptions o;
  o.out = path.string();
  o.overrides = {"tau=1", "slot_duration_s=0.00001"};
  std::ostringstream out, err;
  ASSERT_EQ(CmdExportSeeds(o, out, err), kExitOk);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  EXPECT_EQ(fs::file_size(path), kPayloadHeaderBytes);

  std::ostringstream mds, merr;
  EXPECT_EQ(CmdMds(GlobalOptions{}, path.string(), mds, merr), kExitRuntime);
}

TEST(CmdMdsTest, SmallFiles) {
  Payload p;
  p.samples = {EncodeCsr(Blob(2, 2, 200), 1), EncodeCsr(Blob(2, 2, 200), 1),
               EncodeCsr(Blob(20, 20, 90), 7)};
  p.public_sdi = LabelSet{1, 7};
  auto bytes = SerializePayload(p);
  ASSERT_TRUE(bytes.ok());
  const fs::path path = Scratch("three.bin");
  WriteBytes(path, *bytes);

  std::ostringstream out, err;
  ASSERT_EQ(CmdMds(GlobalOptions{}, path.string(), out, err), kExitOk) << err.str();
  std::istringstream lines(out.str());
  std::string header, r0, r1, r2, extra;
  std::getline(lines, header);
  std::getline(lines, r0);
  std::getline(lines, r1);
  std::getline(lines, r2);
  EXPECT_FALSE(std::getline(lines, extra));
  // Identical samples land on the same point.
  EXPECT_EQ(r0.substr(r0.find(',')), r1.substr(r1.find(',')));
  EXPECT_NE(r0.substr(r0.find(',')), r2.substr(r2.find(',')));

  WriteBytes(path, {0x00, 0x01});
  EXPECT_EQ(CmdMds(GlobalOptions{}, path.string(), out, err), kExitIo);
  EXPECT_EQ(CmdMds(GlobalOptions{}, "/nonexistent/seeds.bin", out, err), kExitIo);
}

int Shell(const std::string& args) {
  const std::string cmd = std::string(SEEDRELAY_CLI_PATH) + " " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Shell("run"), 0);
  EXPECT_EQ(Shell("run --seed 2 rho=0.04"), 0);
  EXPECT_EQ(Shell("run bogus=1"), 2);
  EXPECT_EQ(Shell("--frobnicate run"), 2);
  EXPECT_EQ(Shell("--out /nonexistent/dir/x.csv sweep --axis rho --values 0 --seeds 1"),
            3);
  EXPECT_EQ(Shell("run max_slots_per_hop=1"), 4);
  EXPECT_EQ(Shell("mds /nonexistent/seeds.bin"), 3);
}

TEST(CliTest, RunIsReproducible) {
  const fs::path a = Scratch("cli_a.json");
  const fs::path b = Scratch("cli_b.json");
  ASSERT_EQ(Shell("--seed 5 --out " + a.string() + " run"), 0);
  ASSERT_EQ(Shell("--seed 5 --out " + b.string() + " run"), 0);
  EXPECT_EQ(Slurp(a), Slurp(b));
  EXPECT_FALSE(Slurp(a).empty());
}

}  // namespace
}  // namespace seedrelay
