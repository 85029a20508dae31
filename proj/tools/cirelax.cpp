// cirelax: command-line front end for the CI implication library.
//
// Exit codes: 0 = holds / implied / passed, 1 = does not hold, 2 = error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cirelax/cirelax.hpp"

using namespace cirelax;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kError = 2;

/// Thrown for usage problems found after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs a parser and prefixes any ParseError with where the text came from.
template <typename Fn>
auto parsing(const std::string& origin, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw UsageError(origin + ": " + e.what());
  }
}

struct CiInput {
  Universe universe;
  CISet sigma;
  CITriple tau{VarSet::single(0), VarSet::single(1)};
};

/// Antecedents from a file, consequent from a query; unseen names in the
/// query are appended to the universe.
CiInput read_ci_input(const std::string& sigma_path, const std::string& tau_text) {
  CiInput in;
  const std::string text = read_file(sigma_path);
  in.sigma = parsing(sigma_path, [&] { return parse_ci_set(text, in.universe); });
  in.tau = parsing("--tau", [&] { return parse_ci_triple_extending(tau_text, in.universe); });
  return in;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CIRELAX_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("CIRELAX_SEED must be a nonnegative integer");
  }
  return 0;
}

/// Writes the refutation of a negative certificate: a distribution file when
/// one exists, otherwise a polymatroid table dump.
void write_refutation(const Refutation& r, const Universe& u, const std::string& path) {
  write_file(path, r.distribution ? format_distribution(*r.distribution, u) : format_polymatroid(r.table, u));
}

int cmd_dsep(const std::string& dag_path, const std::string& query) {
  const Dag dag = parsing(dag_path, [&] { return parse_dag(read_file(dag_path)); });
  const CITriple t = parsing("--query", [&] { return parse_ci_triple(query, dag.universe()); });
  const bool sep = d_separated(dag, t);
  std::cout << (sep ? "SEPARATED " : "NOT-SEPARATED ") << to_string(t, dag.universe()) << "\n";
  return sep ? kHolds : kFails;
}

int cmd_implies(const std::string& sigma_path, const std::string& tau, const std::string& mode) {
  const CiInput in = read_ci_input(sigma_path, tau);
  const int n = in.universe.size();
  if (mode == "atoms") {
    if (n > kMaxAtomVariables) throw UsageError("atoms mode supports at most 16 variables");
    const Verdict v = implies_positive(in.sigma, in.tau, n);
    if (v.implied) {
      std::cout << "IMPLIED\nmode=atoms\n";
      return kHolds;
    }
    std::cout << "NOT-IMPLIED witness=" << in.universe.braces(*v.witness) << "\nmode=atoms\n";
    return kFails;
  }
  if (mode == "lp") {
    if (n > kMaxLpVariables) throw UsageError("lp mode supports at most 5 variables");
    const LambdaResult r = optimal_lambda(in.sigma, in.tau, n);
    if (r.bounded()) {
      std::cout << "IMPLIED lambda=" << to_string(*r.lambda) << "\nmode=lp\npivots=" << r.solution.pivot_count << "\n";
      return kHolds;
    }
    std::cout << "NOT-IMPLIED lambda=unbounded\nmode=lp\npivots=" << r.solution.pivot_count << "\n";
    return kFails;
  }
  if (n > kMaxGraphoidVariables) throw UsageError("graphoid mode supports at most 5 variables");
  const auto closure = semigraphoid_closure(in.sigma, n);
  const bool member = closure.count(in.tau) > 0;
  std::cout << (member ? "IMPLIED" : "NOT-IMPLIED") << "\nmode=graphoid\nclosure_size=" << closure.size() << "\n";
  return member ? kHolds : kFails;
}

int cmd_bound(const std::string& kind, const std::string& dag_path, const std::string& sigma_path,
              const std::string& tau, const std::string& out) {
  RelaxationCertificate cert;
  Universe universe;
  if (kind == "recursive") {
    if (dag_path.empty()) throw UsageError("--kind recursive needs --dag");
    const Dag dag = parsing(dag_path, [&] { return parse_dag(read_file(dag_path)); });
    const CITriple t = parsing("--tau", [&] { return parse_ci_triple(tau, dag.universe()); });
    if (dag.size() > kMaxAtomVariables) throw UsageError("recursive bounds support at most 16 variables");
    cert = check_recursive(dag, t);
    universe = dag.universe();
  } else {
    if (sigma_path.empty()) throw UsageError("--kind marginal needs --sigma");
    CiInput in = read_ci_input(sigma_path, tau);
    for (const auto& s : in.sigma)
      if (!s.z().empty()) throw UsageError("antecedent " + to_string(s, in.universe) + " is not marginal");
    cert = check_marginal(in.sigma, in.tau, in.universe.size());
    universe = std::move(in.universe);
  }
  std::cout << to_text(cert, universe);
  if (!cert.implied && !out.empty()) {
    write_refutation(*cert.refutation, universe, out);
    std::cout << "refutation_file=" << out << "\n";
  }
  return cert.implied ? kHolds : kFails;
}

int cmd_lambda(const std::string& sigma_path, const std::string& tau, const std::string& dump) {
  const CiInput in = read_ci_input(sigma_path, tau);
  const int n = in.universe.size();
  if (n > kMaxLpVariables) throw UsageError("lambda supports at most 5 variables");
  if (!dump.empty()) {
    const std::string listing = dump_program(lambda_program(in.sigma, in.tau, n), in.universe);
    if (dump == "-") std::cout << listing;
    else write_file(dump, listing);
  }
  const LambdaResult r = optimal_lambda(in.sigma, in.tau, n);
  std::cout << "lambda=" << (r.bounded() ? to_string(*r.lambda) : std::string("unbounded")) << "\n";
  std::cout << "pivots=" << r.solution.pivot_count << "\n";
  return r.bounded() ? kHolds : kFails;
}

/// A polymatroid with h(Σ) = 0 and h(τ) > 0: the single-atom polymatroid of a
/// witness atom, or failing that (n <= 5) the improving ray of the LP.
int cmd_counterexample(const std::string& sigma_path, const std::string& tau, const std::string& out) {
  const CiInput in = read_ci_input(sigma_path, tau);
  const int n = in.universe.size();
  if (n > kMaxAtomVariables) throw UsageError("counterexample supports at most 16 variables");
  std::optional<PolymatroidTable<Rational>> table;
  std::string source;
  const Verdict v = implies_positive(in.sigma, in.tau, n);
  if (!v.implied) {
    table = single_atom_polymatroid(*v.witness, n);
    source = "single-atom atom=" + in.universe.braces(*v.witness);
  } else if (n <= kMaxLpVariables) {
    const LambdaResult r = optimal_lambda(in.sigma, in.tau, n);
    if (!r.bounded()) {
      table = *r.solution.point;
      source = "lp-ray";
    }
  }
  if (!table) {
    std::cout << "NONE\n"
              << (n <= kMaxLpVariables ? "reason=implied over all polymatroids\n"
                                       : "reason=implied over positive polymatroids\n");
    return kFails;
  }
  std::cout << "COUNTEREXAMPLE " << source << "\n";
  std::cout << "h(sigma)=" << to_string(measure_of(*table, in.sigma)) << "\n";
  std::cout << "h(tau)=" << to_string(cond_mutual_information(*table, in.tau)) << "\n";
  const std::string dump = format_polymatroid(*table, in.universe);
  if (out.empty()) std::cout << dump;
  else {
    write_file(out, dump);
    std::cout << "refutation_file=" << out << "\n";
  }
  return kHolds;
}

int cmd_entropy(const std::string& dist_path, const std::string& table_path, const std::string& term_text) {
  if (dist_path.empty() == table_path.empty()) throw UsageError("give exactly one of --dist or --table");
  if (!dist_path.empty()) {
    auto [u, d] = parsing(dist_path, [&] { return parse_distribution(read_file(dist_path)); });
    const InformationTerm t = parsing("--term", [&] { return parse_information_term(term_text, u); });
    // Exact when every marginal involved is dyadic, floating point otherwise.
    std::vector<VarSet> plus{t.x | t.z}, minus{t.z};
    if (t.kind == InformationTerm::Kind::MutualInformation) {
      plus.push_back(t.y | t.z);
      minus.push_back(t.x | t.y | t.z);
    }
    std::optional<Rational> exact = Rational(0);
    double value = 0;
    for (int sign : {1, -1})
      for (VarSet a : sign > 0 ? plus : minus) {
        value += sign * entropy(d, a);
        const auto e = exact_entropy(d, a);
        if (exact && e) *exact += sign * *e;
        else exact.reset();
      }
    if (exact) value = to_double(*exact);
    else if (std::abs(value) < 1e-12) value = 0;
    std::cout << format_bits(value) << "\n";
    return kHolds;
  }
  auto [u, h] = parsing(table_path, [&] { return parse_polymatroid(read_file(table_path)); });
  const InformationTerm t = parsing("--term", [&] { return parse_information_term(term_text, u); });
  const Rational value = t.kind == InformationTerm::Kind::Entropy ? conditional_entropy(h, t.x, t.z)
                                                                  : cond_mutual_information(h, t.x, t.y, t.z);
  std::cout << format_bits(to_double(value)) << "\n";
  return kHolds;
}

int cmd_closure(const std::string& sigma_path) {
  Universe u;
  const std::string text = read_file(sigma_path);
  const CISet sigma = parsing(sigma_path, [&] { return parse_ci_set(text, u); });
  if (u.size() > kMaxGraphoidVariables) throw UsageError("closure supports at most 5 variables");
  const auto closure = semigraphoid_closure(sigma, u.size());
  std::cout << "closure_size=" << closure.size() << "\n";
  for (const auto& t : closure) std::cout << to_string(t, u) << "\n";
  return kHolds;
}

int cmd_validate(const std::string& sigma_path, const std::string& tau, const std::string& lambda_text,
                 std::size_t trials, std::optional<std::uint64_t> seed, int cardinality) {
  const CiInput in = read_ci_input(sigma_path, tau);
  const auto lambda = parse_rational(lambda_text);
  if (!lambda || sgn(*lambda) < 0) throw UsageError("--lambda must be a nonnegative rational");
  if (trials < 1) throw UsageError("--trials must be at least 1");
  const std::uint64_t root = seed ? *seed : default_seed();
  const ValidationReport r =
      validate_bound(in.sigma, in.tau, to_double(*lambda), in.universe.size(), trials, root, cardinality);
  std::cout << (r.passed ? "PASS" : "FAIL") << "\n";
  std::cout << "trials=" << r.trials << "\n";
  std::cout << "lambda=" << to_string(*lambda) << "\n";
  std::cout << "seed=" << root << "\n";
  std::cout << "sampler=" << kSamplerVersion << "\n";
  std::cout << "max_violation=" << format_bits(r.max_violation) << "\n";
  std::cout << "worst_trial=" << r.worst_trial << "\n";
  std::cout << "worst_seed=" << r.worst_seed << "\n";
  return r.passed ? kHolds : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional independence implication: exact verdicts, lambda bounds and refutations"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format (only 'text' for now)")->check(CLI::IsMember({"text"}));

  std::string dag, query, sigma, tau, mode = "atoms", kind, out, dump, dist, table, term, lambda = "1";
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  int cardinality = 2;

  auto* dsep = app.add_subcommand("dsep", "Test d-separation in a DAG");
  dsep->add_option("--dag", dag, "DAG file")->required();
  dsep->add_option("--query", query, "Query I(X;Y|Z)")->required();

  auto* implies = app.add_subcommand("implies", "Decide whether the antecedents imply the consequent");
  implies->add_option("--sigma", sigma, "CI-set file")->required();
  implies->add_option("--tau", tau, "Consequent I(X;Y|Z)")->required();
  implies->add_option("--mode", mode, "Decision route")->check(CLI::IsMember({"atoms", "lp", "graphoid"}));

  auto* bound = app.add_subcommand("bound", "Relaxation certificate for recursive or marginal antecedents");
  bound->add_option("--kind", kind, "recursive or marginal")->required()->check(CLI::IsMember({"recursive", "marginal"}));
  bound->add_option("--dag", dag, "DAG file (recursive)");
  bound->add_option("--sigma", sigma, "CI-set file (marginal)");
  bound->add_option("--tau", tau, "Consequent I(X;Y|Z)")->required();
  bound->add_option("--out", out, "Write the refutation here when not implied");

  auto* lam = app.add_subcommand("lambda", "Least lambda over the polymatroid cone (exact LP)");
  lam->add_option("--sigma", sigma, "CI-set file")->required();
  lam->add_option("--tau", tau, "Consequent I(X;Y|Z)")->required();
  lam->add_option("--dump-program", dump, "Write the LP listing to a file ('-' for stdout)");

  auto* cex = app.add_subcommand("counterexample", "Polymatroid with h(sigma) = 0 and h(tau) > 0");
  cex->add_option("--sigma", sigma, "CI-set file")->required();
  cex->add_option("--tau", tau, "Consequent I(X;Y|Z)")->required();
  cex->add_option("--out", out, "Write the table here instead of stdout");

  auto* ent = app.add_subcommand("entropy", "Evaluate H(..|..) or I(..;..|..) in bits");
  ent->add_option("--dist", dist, "Distribution file");
  ent->add_option("--table", table, "Polymatroid table file");
  ent->add_option("--term", term, "H(X|Y) or I(X;Y|Z)")->required();

  auto* clo = app.add_subcommand("closure", "Semigraphoid closure of a CI set");
  clo->add_option("--sigma", sigma, "CI-set file")->required();

  auto* val = app.add_subcommand("validate", "Check lambda*h(sigma) >= h(tau) on random distributions");
  val->add_option("--sigma", sigma, "CI-set file")->required();
  val->add_option("--tau", tau, "Consequent I(X;Y|Z)")->required();
  val->add_option("--lambda", lambda, "Rational factor");
  val->add_option("--trials", trials, "Number of distributions");
  val->add_option("--seed", seed, "Root seed (default: $CIRELAX_SEED or 0)");
  val->add_option("--cardinality", cardinality, "Values per variable")->check(CLI::Range(2, 16));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*dsep) return cmd_dsep(dag, query);
    if (*implies) return cmd_implies(sigma, tau, mode);
    if (*bound) return cmd_bound(kind, dag, sigma, tau, out);
    if (*lam) return cmd_lambda(sigma, tau, dump);
    if (*cex) return cmd_counterexample(sigma, tau, out);
    if (*ent) return cmd_entropy(dist, table, term);
    if (*clo) return cmd_closure(sigma);
    if (*val) return cmd_validate(sigma, tau, lambda, trials, seed, cardinality);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
