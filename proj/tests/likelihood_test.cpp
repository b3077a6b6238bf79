#include "support.hpp"

#include <catprob/data_table.hpp>
#include <catprob/likelihood.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace catprob {
namespace {

using testing::Rng;

/// Weather classes (y, n) with Gaussian temperature and humidity.
struct Hybrid {
  State prior;
  std::vector<FeatureEvaluator> features;
};

Hybrid weather_hybrid() {
  const State tau = ingest_csv(testing::data_path("weather.csv")).state();
  const Mask play = Mask::parse("0,0,0,0,1");
  const Space cls = tau.space().wire(4);
  Hybrid h{marginal(tau, play), {}};
  h.features.emplace_back(extract(tau, Mask::parse("1,0,0,0,0"), play));
  h.features.emplace_back(DensityFamily(cls, {Gaussian{73, 6.2}, Gaussian{74.6, 7.9}}));
  h.features.emplace_back(DensityFamily(cls, {Gaussian{79.1, 10.2}, Gaussian{86.2, 9.7}}));
  h.features.emplace_back(extract(tau, Mask::parse("0,0,0,1,0"), play));
  return h;
}

double normal_pdf(double m, double s, double x) {
  return std::exp(-(x - m) * (x - m) / (2 * s * s)) / (s * std::sqrt(2 * std::numbers::pi));
}

TEST(GaussianTest, StandardValues) {
  EXPECT_NEAR(gaussian_density(0, 1, 0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(gaussian_density(0, 1, 1), 0.24197072451914337, 1e-15);
  EXPECT_NEAR(gaussian_density(73, 6.2, 66), normal_pdf(73, 6.2, 66), 1e-15);
  for (double d : {0.1, 1.0, 3.7}) EXPECT_DOUBLE_EQ(gaussian_density(2, 1.5, 2 + d), gaussian_density(2, 1.5, 2 - d));
  EXPECT_THROW(gaussian_density(0, 0, 0), ValidationError);
  EXPECT_THROW(gaussian_density(0, -1, 0), ValidationError);
}

TEST(QuadratureTest, ExactOnCubics) {
  EXPECT_NEAR(quadrature([](double) { return 2.5; }, -1, 3, 2), 10.0, 1e-14);
  EXPECT_NEAR(quadrature([](double x) { return x * x; }, 0, 3, 2), 9.0, 1e-14);
  EXPECT_NEAR(quadrature([](double x) { return x * x * x - x; }, -1, 2, 4), 2.25, 1e-14);
  EXPECT_THROW(quadrature([](double x) { return x; }, 0, 1, 3), ValidationError);
  EXPECT_THROW(quadrature([](double x) { return x; }, 1, 0, 4), ValidationError);
}

TEST(QuadratureTest, GaussianMassIsOne) {
  for (const Gaussian g : {Gaussian{0, 1}, Gaussian{73, 6.2}, Gaussian{-4, 0.01}}) {
    EXPECT_NEAR(total_mass(Density(g)), 1.0, 1e-9);
  }
}

TEST(PiecewiseLinearTest, TriangleDensity) {
  const PiecewiseLinear tri({0, 1, 2}, {0, 1, 0});
  EXPECT_DOUBLE_EQ(tri(0.5), 0.5);
  EXPECT_DOUBLE_EQ(tri(1.5), 0.5);
  EXPECT_EQ(tri(-1), 0.0);
  EXPECT_EQ(tri(2.5), 0.0);
  EXPECT_DOUBLE_EQ(tri.integral(), 1.0);
  EXPECT_THROW(PiecewiseLinear({0, 0}, {1, 1}), ValidationError);
  EXPECT_THROW(PiecewiseLinear({0, 1}, {1}), ValidationError);
}

TEST(DensityFamilyTest, RejectsUnnormalised) {
  const Space c("C", {"a", "b"});
  EXPECT_NO_THROW(DensityFamily(c, {Gaussian{0, 1}, PiecewiseLinear({0, 1, 2}, {0, 1, 0})}));
  EXPECT_THROW(DensityFamily(c, {Gaussian{0, 1}, PiecewiseLinear({0, 1, 2}, {0, 2, 0})}), ValidationError);
  EXPECT_THROW(DensityFamily(c, {Gaussian{0, 1}}), DimensionError);
  const DensityFamily f(c, {Gaussian{0, 1}, Gaussian{10, 2}});
  EXPECT_DOUBLE_EQ(f.reference().lo, -8.0);
  EXPECT_DOUBLE_EQ(f.reference().hi, 26.0);
}

TEST(FeatureEvaluatorTest, ReferencesAndObservationTypes) {
  const Hybrid h = weather_hybrid();
  EXPECT_TRUE(h.features[0].is_discrete());
  EXPECT_TRUE(std::holds_alternative<CountingFinite>(h.features[0].reference()));
  EXPECT_FALSE(h.features[1].is_discrete());
  EXPECT_TRUE(std::holds_alternative<LebesgueInterval>(h.features[1].reference()));
  EXPECT_NEAR(h.features[0](0, std::string("s")), 2.0 / 9, 1e-15);
  EXPECT_DOUBLE_EQ(h.features[1](0, 66.0), gaussian_density(73, 6.2, 66));
  EXPECT_THROW(h.features[0](0, 1.0), ValidationError);
  EXPECT_THROW(h.features[1](0, std::string("s")), ValidationError);
}

TEST(LikelihoodInvertTest, HybridWeather) {
  const Hybrid h = weather_hybrid();
  const std::vector<ObservedValue> obs = {std::string("s"), 66.0, 90.0, std::string("t")};
  const State post = likelihood_invert(h.prior, h.features, obs);
  EXPECT_NEAR(post[0], 0.207, 2e-3);
  // Hand formula with the counted frequencies.
  const double yes = 9.0 / 14 * 2.0 / 9 * normal_pdf(73, 6.2, 66) * normal_pdf(79.1, 10.2, 90) * 3.0 / 9;
  const double no = 5.0 / 14 * 3.0 / 5 * normal_pdf(74.6, 7.9, 66) * normal_pdf(86.2, 9.7, 90) * 3.0 / 5;
  EXPECT_NEAR(post[0], yes / (yes + no), 1e-12);
}

TEST(LikelihoodInvertTest, ConstantFeatureReturnsPrior) {
  const Space c("C", {"a", "b", "c"});
  const State prior(c, {0.2, 0.5, 0.3});
  const std::vector<FeatureEvaluator> f = {FeatureEvaluator(DensityFamily(c, {Gaussian{1, 2}, Gaussian{1, 2}, Gaussian{1, 2}}))};
  for (double y : {-3.0, 0.0, 1.0, 4.5}) {
    const std::vector<ObservedValue> obs = {y};
    EXPECT_LE(linf_distance(likelihood_invert(prior, f, obs), prior), 1e-15);
  }
}

TEST(LikelihoodInvertTest, DiscreteReducesToBayesInvert) {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const Space c = testing::make_space("C", 2 + t % 3), f = testing::make_space("F", 2 + t % 4);
    const State prior = testing::random_state(rng, c);
    const Channel ch = testing::random_channel(rng, c, f, 0.2);
    const Channel inv = bayes_invert(prior, ch);
    const std::vector<FeatureEvaluator> fe = {FeatureEvaluator(ch)};
    for (std::size_t y = 0; y < f.size(); ++y) {
      if (state_transform(ch, prior)[y] == 0.0) continue;
      const std::vector<ObservedValue> obs = {f.label(y)};
      EXPECT_LE(linf_distance(likelihood_invert(prior, fe, obs), inv.row_state(y)), 1e-12);
    }
  }
}

TEST(LikelihoodInvertTest, InvariantUnderRescalingTheReal) {
  const Space c("C", {"a", "b"});
  const State prior(c, {0.4, 0.6});
  const std::vector<FeatureEvaluator> base = {FeatureEvaluator(DensityFamily(c, {Gaussian{0, 1}, Gaussian{1, 2}}))};
  const double k = 12.5;
  const std::vector<FeatureEvaluator> scaled = {
      FeatureEvaluator(DensityFamily(c, {Gaussian{0, k}, Gaussian{k, 2 * k}}))};
  for (double y : {-1.0, 0.3, 2.0}) {
    const std::vector<ObservedValue> a = {y}, b = {y * k};
    EXPECT_LE(linf_distance(likelihood_invert(prior, base, a), likelihood_invert(prior, scaled, b)), 1e-12);
  }
}

TEST(LikelihoodInvertTest, Errors) {
  const Space c("C", {"a", "b"}), f("F", {"u", "v"});
  const State prior(c, {0.5, 0.5});
  const std::vector<FeatureEvaluator> fe = {FeatureEvaluator(Channel(c, f, {1, 0, 1, 0}))};
  const std::vector<ObservedValue> never = {std::string("v")};
  EXPECT_THROW(likelihood_invert(prior, fe, never), MathError);
  const std::vector<ObservedValue> two = {std::string("u"), std::string("u")};
  EXPECT_THROW(likelihood_invert(prior, fe, two), ValidationError);
  EXPECT_THROW(likelihood_invert(State(c, {0.5, 0.4}), fe, std::vector<ObservedValue>{std::string("u")}),
               ValidationError);
  const std::vector<FeatureEvaluator> other = {FeatureEvaluator(Channel(f, c, {1, 0, 1, 0}))};
  EXPECT_THROW(likelihood_invert(prior, other, std::vector<ObservedValue>{std::string("a")}), DimensionError);
}

TEST(AlmostInverseTest, ReciprocalOnSupport) {
  const Space a("A", {"a", "b", "c"});
  const Effect p(a, {2.0, 0.0, 0.5});
  const Effect q = almost_inverse(p);
  EXPECT_EQ(q, Effect(a, {0.5, 0.0, 2.0}));
  EXPECT_TRUE(almost_inverts(p, q, State(a, {0.5, 0.0, 0.5})));
}

TEST(DiscretizationTest, BinsAndCausality) {
  const Space c("C", {"a", "b"});
  const DensityFamily fam(c, {Gaussian{0, 1}, Gaussian{1, 0.5}});
  const Discretization d(fam, -4, 4, 16, 64);
  EXPECT_TRUE(d.channel().is_causal(1e-12));
  EXPECT_DOUBLE_EQ(d.width(), 0.5);
  EXPECT_EQ(d.bin_of(-4), "b0");
  EXPECT_EQ(d.bin_of(0.1), "b8");
  EXPECT_EQ(d.bin_of(4), "b15");
  EXPECT_THROW(d.bin_of(4.5), ValidationError);
  // Bin [0, 0.5] of N(0, 1), renormalised by the mass in [-4, 4].
  const double inner = std::erf(4 / std::sqrt(2.0));
  EXPECT_NEAR(d.channel()(0, 8), 0.5 * std::erf(0.5 / std::sqrt(2.0)) / inner, 1e-10);
}

TEST(DiscretizationTest, SequentialUpdatesEqualTupledInversion) {
  const Hybrid h = weather_hybrid();
  const auto& t_fam = *h.features[1].density_family();
  const auto& h_fam = *h.features[2].density_family();
  const Discretization dt(t_fam, t_fam.reference().lo, t_fam.reference().hi, 64);
  const Discretization dh(h_fam, h_fam.reference().lo, h_fam.reference().hi, 64);
  const Channel& d_o = *h.features[0].channel();
  const Channel& d_w = *h.features[3].channel();
  const ProductSpace cls = h.prior.space();
  Channel copy4 = identity(cls);
  for (int i = 1; i < 4; ++i) copy4 = compose(tensor(copy4, identity(cls)), copier(cls));
  const Channel tupled = compose(tensor(tensor(tensor(d_o, dt.channel()), dh.channel()), d_w), copy4);
  const std::vector<std::string> obs = {"s", dt.bin_of(66), dh.bin_of(90), "t"};
  const State joint = bayes_invert(h.prior, tupled).at(obs);

  State seq = h.prior;
  const Channel* steps[] = {&d_o, &dt.channel(), &dh.channel(), &d_w};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::vector<std::string> one = {obs[i]};
    seq = bayes_invert(seq, *steps[i]).at(one);
  }
  EXPECT_LE(linf_distance(joint, seq), 1e-12);
}

TEST(DiscretizationTest, FineBinsApproachPointLikelihood) {
  const Hybrid h = weather_hybrid();
  const std::vector<ObservedValue> obs = {std::string("s"), 66.0, 90.0, std::string("t")};
  const double point = likelihood_invert(h.prior, h.features, obs)[0];
  // The error tracks where 66 and 90 sit inside their bins, so it is not
  // monotone in the bin count; every resolution here stays inside 5e-3.
  double err = 1.0;
  for (std::size_t bins : {128u, 512u, 4096u}) {
    State s = h.prior;
    for (std::size_t i = 0; i < 4; ++i) {
      if (const Channel* c = h.features[i].channel()) {
        s = bayes_invert(s, *c).at(std::vector<std::string>{std::get<std::string>(obs[i])});
      } else {
        const auto& fam = *h.features[i].density_family();
        const Discretization d(fam, fam.reference().lo, fam.reference().hi, bins);
        s = bayes_invert(s, d.channel()).at(std::vector<std::string>{d.bin_of(std::get<double>(obs[i]))});
      }
    }
    err = std::abs(s[0] - point);
    EXPECT_LE(err, 5e-3) << bins << " bins";
  }
  EXPECT_LE(err, 1e-4);
}

}  // namespace
}  // namespace catprob
