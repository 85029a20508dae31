#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(CIRELAX_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  Outcome r;
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

bool has(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

TEST(Dsep, ExitCodes) {
  EXPECT_EQ(run("dsep --dag " + sample("chain.dag") + " --query 'I(X1;X3|X2)'").code, 0);
  const Outcome collider = run("dsep --dag " + sample("collider.dag") + " --query 'I(X1;X2|X3)'");
  EXPECT_EQ(collider.code, 1);
  EXPECT_TRUE(has(collider.out, "NOT-SEPARATED"));
  const Outcome bad = run("dsep --dag " + sample("chain.dag") + " --query 'I(X1;X3|X2'");
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(has(bad.out, "column"));
}

TEST(Dsep, FileErrorsCarryLineAndColumn) {
  const std::string path = temp_path("broken.dag");
  std::ofstream(path) << "var A\nvar B\nedge A  C\n";
  const Outcome r = run("dsep --dag " + path + " --query 'I(A;B)'");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r.out, "line 3, column 9"));
}

TEST(Implies, AllModesAgreeOnChainRuleExample) {
  const std::string base = "implies --sigma " + sample("chain_rule.ci") + " --tau 'I(A;C)' --mode ";
  const Outcome atoms = run(base + "atoms"), lp = run(base + "lp"), graphoid = run(base + "graphoid");
  EXPECT_EQ(atoms.code, 0);
  EXPECT_TRUE(has(atoms.out, "IMPLIED"));
  EXPECT_EQ(lp.code, 0);
  EXPECT_TRUE(has(lp.out, "IMPLIED lambda=1\n"));
  EXPECT_EQ(graphoid.code, 0);
  EXPECT_TRUE(has(graphoid.out, "IMPLIED\n"));
}

TEST(Implies, NotImplied) {
  const Outcome r = run("implies --sigma " + sample("marginal_ab.ci") + " --tau 'I(a;c)' --mode atoms");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r.out, "NOT-IMPLIED witness={a,c}"));
  EXPECT_EQ(run("implies --sigma " + sample("marginal_ab.ci") + " --tau 'I(a;b|c)' --mode lp").code, 1);
}

TEST(Implies, CapExceeded) {
  const std::string path = temp_path("six.ci");
  std::ofstream(path) << "I(a;b)\nI(c;d|e,f)\n";
  EXPECT_EQ(run("implies --sigma " + path + " --tau 'I(a;b)' --mode lp").code, 2);
  EXPECT_EQ(run("implies --sigma " + path + " --tau 'I(a;b)' --mode graphoid").code, 2);
  EXPECT_EQ(run("implies --sigma " + path + " --tau 'I(a;b)' --mode atoms").code, 0);
}

TEST(Bound, RecursiveChain) {
  const Outcome r = run("bound --kind recursive --dag " + sample("chain.dag") + " --tau 'I(X1;X3|X2)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("IMPLIED lambda=1\n", 0), 0u);
}

TEST(Bound, MarginalParityArtifactIsReusable) {
  const std::string out = temp_path("refute.dist");
  const Outcome r = run("bound --kind marginal --sigma " + sample("marginal_ab.ci") + " --tau 'I(a;b|c)' --out " + out);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("NOT-IMPLIED witness=I(a;b|c)\n", 0), 0u);
  EXPECT_TRUE(has(r.out, "refutation=parity"));
  EXPECT_EQ(run("entropy --dist " + out + " --term 'I(a;b|c)'").out, "1.0\n");
  EXPECT_EQ(run("entropy --dist " + out + " --term 'I(a;b)'").out, "0.0\n");
}

TEST(Bound, MarginalImplied) {
  const Outcome r = run("bound --kind marginal --sigma " + sample("marginal_a_bc.ci") + " --tau 'I(a;c|b)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("IMPLIED lambda=1\n", 0), 0u);
}

TEST(Bound, NonMarginalAntecedentIsAnError) {
  EXPECT_EQ(run("bound --kind marginal --sigma " + sample("chain_rule.ci") + " --tau 'I(A;C)'").code, 2);
}

TEST(Bound, RecursiveColliderArtifact) {
  const std::string out = temp_path("collider.dist");
  const Outcome r = run("bound --kind recursive --dag " + sample("collider.dag") + " --tau 'I(X1;X2|X3)' --out " + out);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run("entropy --dist " + out + " --term 'I(X1;X2|X3)'").out, "1.0\n");
  EXPECT_EQ(run("entropy --dist " + out + " --term 'I(X1;X2)'").out, "0.0\n");
}

TEST(Validate, TightnessFamily) {
  const std::string base = "validate --sigma " + sample("tight4.ci") + " --tau 'I(X1;X2,X3,X4)' --trials 100 --seed 3";
  const Outcome pass = run(base + " --lambda 1");
  EXPECT_EQ(pass.code, 0);
  EXPECT_EQ(pass.out.rfind("PASS\n", 0), 0u);
  const Outcome fail = run(base + " --lambda 0");
  EXPECT_EQ(fail.code, 1);
  EXPECT_EQ(fail.out.rfind("FAIL\n", 0), 0u);
  EXPECT_EQ(run(base + " --lambda 1").out, pass.out);
}

TEST(Validate, SeedFromEnvironment) {
  const std::string base = "validate --sigma " + sample("tight4.ci") + " --tau 'I(X1;X2,X3,X4)' --trials 20";
  const std::string out = run(base, "CIRELAX_SEED=77").out;
  EXPECT_TRUE(has(out, "seed=77\n"));
  EXPECT_EQ(out, run(base + " --seed 77").out);
}

TEST(Entropy, Examples) {
  EXPECT_EQ(run("entropy --dist " + sample("coin.dist") + " --term 'H(X)'").out, "1.0\n");
  EXPECT_EQ(run("entropy --dist " + sample("parity.dist") + " --term 'I(a;b)'").out, "1.0\n");
  EXPECT_EQ(run("entropy --dist " + sample("product.dist") + " --term 'I(a;b)'").out, "0.0\n");
}

TEST(Entropy, BadSumIsAnError) {
  const std::string path = temp_path("bad.dist");
  std::ofstream(path) << "vars a:2\n0 1/2\n1 1/3\n";
  EXPECT_EQ(run("entropy --dist " + path + " --term 'H(a)'").code, 2);
}

TEST(Entropy, PolymatroidTable) {
  const std::string out = temp_path("cex.table");
  EXPECT_EQ(run("counterexample --sigma " + sample("marginal_ab.ci") + " --tau 'I(a;c)' --out " + out).code, 0);
  EXPECT_EQ(run("entropy --table " + out + " --term 'I(a;c)'").out, "1.0\n");
  EXPECT_EQ(run("entropy --table " + out + " --term 'I(a;b)'").out, "0.0\n");
}

TEST(Lambda, ExactOptimumAndDump) {
  const Outcome r = run("lambda --sigma " + sample("tight4.ci") + " --tau 'I(X1;X2,X3,X4)' --dump-program -");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "program n=4 variables=15 rows=28"));
  EXPECT_TRUE(has(r.out, "lambda=1\n"));
  EXPECT_EQ(run("lambda --sigma " + sample("marginal_ab.ci") + " --tau 'I(a;b|c)'").code, 1);
}

TEST(Closure, ListsChainRuleConsequences) {
  const Outcome r = run("closure --sigma " + sample("chain_rule.ci"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "I(A;B,C)\n"));
  EXPECT_TRUE(has(r.out, "I(A;C)\n"));
}

TEST(Usage, ErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--format json closure --sigma " + sample("chain_rule.ci")).code, 2);
  EXPECT_EQ(run("--format text closure --sigma " + sample("chain_rule.ci")).code, 0);
  EXPECT_EQ(run("closure --sigma /nonexistent/file.ci").code, 2);
}

}  // namespace
