#include <gtest/gtest.h>

#include "cirelax/atom_measure.hpp"
#include "cirelax/distribution.hpp"
#include "cirelax/io.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/random.hpp"
#include "oracles.hpp"

namespace cirelax {
namespace {

VarSet S(std::initializer_list<int> idx) {
  VarSet s;
  for (int i : idx) s = s.with(i);
  return s;
}

JointDistribution<Rational> uniform_bits(int n) {
  const std::size_t outcomes = std::size_t{1} << n;
  return JointDistribution<Rational>(std::vector<int>(n, 2),
                                     std::vector<Rational>(outcomes, Rational(1, static_cast<unsigned long>(outcomes))));
}

Rational ratio(long num, unsigned long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Entropy of the parity distribution on `support`: |D| minus one when D
/// contains the whole support. Independent closed form for binary parity.
Rational parity_entropy(VarSet support, VarSet d) { return d.size() - (d.contains(support) ? 1 : 0); }

TEST(Entropy, FairCoinAndIndependentBits) {
  EXPECT_DOUBLE_EQ(entropy(uniform_bits(1), S({0})), 1.0);
  EXPECT_DOUBLE_EQ(entropy(uniform_bits(2), S({0, 1})), 2.0);
  EXPECT_EQ(*exact_entropy(uniform_bits(2), S({0, 1})), 2);
  EXPECT_EQ(entropy(uniform_bits(2), {}), 0.0);
}

TEST(Entropy, ParityOverThree) {
  const auto d = parity_distribution(3, CITriple(S({0}), S({1}), S({2})));
  EXPECT_EQ(*exact_entropy(d, S({0, 1, 2})), 2);
  EXPECT_NEAR(entropy(d, S({0, 1, 2})), 2.0, 1e-12);
}

TEST(Entropy, ZeroProbabilityAndNonDyadic) {
  JointDistribution<Rational> d({3}, {Rational(1, 3), Rational(2, 3), Rational(0)});
  EXPECT_FALSE(exact_entropy(d, S({0})).has_value());
  EXPECT_NEAR(entropy(d, S({0})), 0.918295834054, 1e-12);
  JointDistribution<Rational> e({2}, {Rational(1), Rational(0)});
  EXPECT_EQ(*exact_entropy(e, S({0})), 0);
}

TEST(JointDistributionTable, Validation) {
  EXPECT_THROW(JointDistribution<Rational>({2}, {Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  EXPECT_THROW(JointDistribution<double>({2}, {1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(JointDistribution<double>({2}, {0.5}), std::invalid_argument);
  EXPECT_NO_THROW(JointDistribution<double>({2}, {0.5, 0.5 + 1e-13}));
}

TEST(EntropicTable, ProductOfFairBits) {
  const auto h = *exact_entropic_table(uniform_bits(4));
  for (VarSet::Mask a = 0; a < 16; ++a) EXPECT_EQ(h[VarSet(a)], VarSet(a).size());
}

TEST(EntropicTable, ParityPair) {
  const auto h = *exact_entropic_table(parity_distribution(2, CITriple(S({0}), S({1}))));
  EXPECT_EQ(h[S({0})], 1);
  EXPECT_EQ(h[S({1})], 1);
  EXPECT_EQ(h[S({0, 1})], 1);
}

TEST(EntropicTable, IsPolymatroidOnRandomDistributions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const auto h = entropic_table(random_distribution(n, seed, 2 + static_cast<int>(seed % 3)));
    EXPECT_TRUE(is_polymatroid(h));
    EXPECT_TRUE(is_polymatroid_by_definition(h));
  }
}

TEST(CondMutualInformation, ProductIsZero) {
  const auto h = *exact_entropic_table(uniform_bits(4));
  for (const auto& t : testing::all_triples(4)) EXPECT_EQ(cond_mutual_information(h, t), 0);
}

TEST(CondMutualInformation, ConditionalEntropyIdentity) {
  const auto h = entropic_table(random_distribution(3, 9));
  EXPECT_NEAR(cond_mutual_information(h, S({1}), S({1}), S({0})), conditional_entropy(h, S({1}), S({0})), 1e-12);
  EXPECT_NEAR(conditional_entropy(h, S({1}), S({0})), h[S({0, 1})] - h[S({0})], 1e-15);
}

TEST(CondMutualInformation, MatchesDirectComputation) {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const auto d = random_distribution(n, rng.bits(), 2 + static_cast<int>(rng.below(2)));
    const auto h = entropic_table(d);
    const CITriple t = testing::random_triple(n, rng);
    EXPECT_NEAR(cond_mutual_information(h, t), testing::cmi_direct(d, t), 1e-9);
  }
}

TEST(CondMutualInformation, ChainRuleResidualVanishes) {
  // I(B;CD|A) - I(B;C|A) - I(B;D|AC) on 100 random tables.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto h = entropic_table(random_distribution(4, seed));
    const VarSet a = S({0}), b = S({1}), c = S({2}), d = S({3});
    const double residual = cond_mutual_information(h, b, c | d, a) - cond_mutual_information(h, b, c, a) -
                            cond_mutual_information(h, b, d, a | c);
    EXPECT_NEAR(residual, 0.0, 1e-9);
  }
}

TEST(ParityDistribution, PairIsUniformOnEqualBits) {
  const auto d = parity_distribution(2, CITriple(S({0}), S({1})));
  EXPECT_EQ(d.probs()[0], Rational(1, 2));
  EXPECT_EQ(d.probs()[1], 0);
  EXPECT_EQ(d.probs()[2], 0);
  EXPECT_EQ(d.probs()[3], Rational(1, 2));
  const auto h = *exact_entropic_table(d);
  EXPECT_EQ(cond_mutual_information(h, CITriple(S({0}), S({1}))), 1);
}

TEST(ParityDistribution, FourVariableExamples) {
  const CITriple tau(S({0}), S({1}), S({2}));
  const auto h = *exact_entropic_table(parity_distribution(4, tau));
  EXPECT_EQ(cond_mutual_information(h, tau), 1);
  EXPECT_EQ(cond_mutual_information(h, CITriple(S({0}), S({3}))), 0);
  EXPECT_EQ(cond_mutual_information(h, CITriple(S({0, 1, 2}), S({3}))), 0);
}

TEST(ParityDistribution, EntropyMatchesClosedForm) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const CITriple tau = testing::random_triple(n, rng);
    const auto h = *exact_entropic_table(parity_distribution(n, tau));
    for (VarSet::Mask a = 0; a < (1u << n); ++a) EXPECT_EQ(h[VarSet(a)], parity_entropy(tau.vars(), VarSet(a)));
  }
}

TEST(AtomMeasure, IndependentBits) {
  const auto m = atom_measure(*exact_entropic_table(uniform_bits(2)));
  EXPECT_EQ(m[S({0})], 1);
  EXPECT_EQ(m[S({1})], 1);
  EXPECT_EQ(m[S({0, 1})], 0);
}

TEST(AtomMeasure, ParityPair) {
  const auto m = atom_measure(*exact_entropic_table(parity_distribution(2, CITriple(S({0}), S({1})))));
  EXPECT_EQ(m[S({0, 1})], 1);
  EXPECT_EQ(m[S({0})], 0);
  EXPECT_EQ(m[S({1})], 0);
}

TEST(AtomMeasure, ParityTripleHasNegativeCenter) {
  // a = b xor c: pairwise independent, so every two-variable atom is 1 and the
  // three-way atom is -1. Singleton atoms are H(i | rest) = 0.
  const auto m = atom_measure(*exact_entropic_table(parity_distribution(3, CITriple(S({0}), S({1}), S({2})))));
  EXPECT_EQ(m[S({0, 1})], 1);
  EXPECT_EQ(m[S({0, 2})], 1);
  EXPECT_EQ(m[S({1, 2})], 1);
  EXPECT_EQ(m[S({0, 1, 2})], -1);
  EXPECT_EQ(m[S({0})], 0);
  EXPECT_FALSE(m.positive());
}

TEST(AtomMeasure, ReconstructsEntropiesOnRandomDistributions) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const auto h = entropic_table(random_distribution(n, rng.bits()));
    const auto m = atom_measure(h);
    for (VarSet::Mask a = 1; a < (1u << n); ++a) {
      double sum = 0;
      for (VarSet::Mask s = 1; s < (1u << n); ++s)
        if (VarSet(s).intersects(VarSet(a))) sum += m[VarSet(s)];
      EXPECT_NEAR(sum, h[VarSet(a)], 1e-9);
    }
  }
}

TEST(AtomMeasure, CapExceeded) { EXPECT_THROW(atom_measure(PolymatroidTable<double>(11)), std::length_error); }

TEST(PolymatroidFromAtoms, UnitMassIsSingleAtomPolymatroid) {
  for (VarSet::Mask b = 1; b < 8; ++b) {
    AtomMeasure<Rational> m(3);
    m.set(VarSet(b), Rational(3));
    const auto h = polymatroid_from_atoms(m);
    for (VarSet::Mask a = 1; a < 8; ++a) EXPECT_EQ(h[VarSet(a)], VarSet(a).intersects(VarSet(b)) ? 3 : 0);
  }
}

TEST(PolymatroidFromAtoms, RandomNonnegativeMassesRoundTrip) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    AtomMeasure<Rational> m(n);
    for (VarSet::Mask s = 1; s < (1u << n); ++s)
      m.set(VarSet(s), ratio(static_cast<long>(rng.below(7)), 1 + static_cast<unsigned long>(rng.below(5))));
    const auto h = polymatroid_from_atoms(m);
    EXPECT_TRUE(is_polymatroid(h));
    EXPECT_TRUE(is_polymatroid_by_definition(h));
    const auto back = atom_measure(h);
    for (VarSet::Mask s = 1; s < (1u << n); ++s) EXPECT_EQ(back[VarSet(s)], m[VarSet(s)]);
  }
}

TEST(PolymatroidFromAtoms, RejectsNegativeMass) {
  AtomMeasure<Rational> m(2);
  m.set(S({0, 1}), Rational(-1));
  EXPECT_THROW(polymatroid_from_atoms(m), std::invalid_argument);
}

TEST(RandomDistribution, DeterministicAndPositive) {
  const auto a = random_distribution(4, 123, 3);
  const auto b = random_distribution(4, 123, 3);
  EXPECT_EQ(a.probs(), b.probs());
  double total = 0;
  for (double p : a.probs()) {
    EXPECT_GT(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NE(random_distribution(4, 124, 3).probs(), a.probs());
  EXPECT_THROW(random_distribution(21, 1), std::length_error);
}

TEST(IsPolymatroid, BrokenMonotonicity) {
  PolymatroidTable<Rational> h(2);
  h.set(S({0}), 2);
  h.set(S({1}), 1);
  h.set(S({0, 1}), 1);
  EXPECT_FALSE(is_polymatroid(h));
  EXPECT_FALSE(is_polymatroid_by_definition(h));
}

TEST(IsPolymatroid, RoutesAgreeOnPerturbedTables) {
  Rng rng(5);
  int rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    AtomMeasure<Rational> m(n);
    for (VarSet::Mask s = 1; s < (1u << n); ++s) m.set(VarSet(s), Rational(static_cast<long>(rng.below(4))));
    auto h = polymatroid_from_atoms(m);
    const VarSet target(1 + static_cast<VarSet::Mask>(rng.below((1u << n) - 1)));
    h.set(target, h[target] + Rational(static_cast<long>(rng.below(5)) - 2));
    const bool a = is_polymatroid(h), b = is_polymatroid_by_definition(h);
    EXPECT_EQ(a, b);
    rejected += !a;
  }
  EXPECT_GT(rejected, 0);
}

TEST(DistributionFile, ParsesDecimalAndFractions) {
  const auto [u, d] = parse_distribution("# parity\nvars a:2 b:2\n0 0 0.5\n1 1 1/2\n");
  EXPECT_EQ(u.size(), 2);
  EXPECT_EQ(d.probs()[3], Rational(1, 2));
  EXPECT_EQ(*exact_entropy(d, S({0, 1})), 1);
}

TEST(DistributionFile, Errors) {
  EXPECT_THROW(parse_distribution("vars a:2\n0 0.5\n1 0.4\n"), ParseError);
  EXPECT_THROW(parse_distribution("vars a:2\n2 1\n"), ParseError);
  EXPECT_THROW(parse_distribution("vars a:2\n0 1\n0 0\n"), ParseError);
  EXPECT_THROW(parse_distribution("0 1\n"), ParseError);
  EXPECT_THROW(parse_distribution("vars a:0\n"), ParseError);
  try {
    parse_distribution("vars a:2 b:2\n0 0 1/2\n1 x 1/2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(DistributionFile, WriterRoundTrips) {
  const auto d = parity_distribution(3, CITriple(S({0}), S({1}), S({2})));
  const Universe u({"a", "b", "c"});
  const auto [u2, d2] = parse_distribution(format_distribution(d, u));
  EXPECT_EQ(u2.names(), u.names());
  EXPECT_EQ(d2.probs(), d.probs());
}

TEST(PolymatroidFile, WriterRoundTripsAndRequiresEverySubset) {
  const Universe u({"a", "b"});
  PolymatroidTable<Rational> h(2);
  h.set(S({0}), Rational(1, 2));
  h.set(S({1}), 1);
  h.set(S({0, 1}), Rational(3, 2));
  const auto [u2, h2] = parse_polymatroid(format_polymatroid(h, u));
  EXPECT_EQ(h2, h);
  EXPECT_THROW(parse_polymatroid("polymatroid vars a b\nh a 1\n"), ParseError);
}

}  // namespace
}  // namespace cirelax
