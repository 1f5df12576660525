// Copyright 2026 The rsqrt2pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd =
      std::string(RSQRT2PC_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

const std::string kConfig = std::string("--config ") + RSQRT2PC_SAMPLE_CONFIG;

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(Cli, MissingConfigIsUsageError) {
  const CliRun r = run("rsqrt-sweep --config /nonexistent/rsqrt2pc.conf");
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownKeyIsUsageError) {
  EXPECT_EQ(run("rsqrt-sweep " + kConfig + " --set bogus=1").status, 2);
  EXPECT_EQ(run("rsqrt-sweep " + kConfig + " --set novalue").status, 2);
}

TEST(Cli, NoSubcommandFails) { EXPECT_NE(run("").status, 0); }

TEST(Cli, RsqrtSweepCsv) {
  const CliRun r = run("rsqrt-sweep " + kConfig + " --points 9");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("x,seed_local,shared,rel_err\n", 0), 0u);
  EXPECT_EQ(lines(r.out), 10);
}

TEST(Cli, ClosenessSweepGapRange) {
  const CliRun r = run("closeness-sweep " + kConfig + " --gaps 0..2 --trials 20");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("gap,trials,converged,mean_rel_err\n", 0), 0u);
  EXPECT_EQ(lines(r.out), 4);
  EXPECT_NE(r.out.find("\n0,20,20,"), std::string::npos);
  EXPECT_EQ(run("closeness-sweep " + kConfig + " --gaps 5..1").status, 2);
}

TEST(Cli, FloodAblation) {
  const CliRun r = run("flood-ablation " + kConfig + " --gaps 8 --trials 20");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\n8,20,20,"), std::string::npos);
}

TEST(Cli, CommReportWritesFile) {
  const std::string path = ::testing::TempDir() + "/report.csv";
  std::remove(path.c_str());
  const CliRun r = run("comm-report " + kConfig + " --scenario layernorm --out " + path);
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str().rfind("method,kind,online_bytes,rounds,muls\n", 0), 0u);
  EXPECT_NE(ss.str().find("ours,counted,"), std::string::npos);
  EXPECT_EQ(run("comm-report " + kConfig + " --scenario nope").status, 2);
}

TEST(Cli, ToyInferOverridesAndSocket) {
  const CliRun r = run("toy-infer " + kConfig +
                    " --set seq_len=4 --set iterations=6 --calibrate --socket");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out), 1 + 4 * 16);
}

TEST(Cli, DefaultsWithoutConfig) {
  EXPECT_EQ(run("rsqrt-sweep --points 3").status, 0);
}

}  // namespace
