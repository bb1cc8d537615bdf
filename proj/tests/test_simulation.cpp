#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxfuse/errors.hpp"
#include "ctxfuse/metrics.hpp"
#include "ctxfuse/scenario_config.hpp"
#include "ctxfuse/simulation.hpp"
#include "oracles.hpp"

using namespace ctxfuse;

namespace {

const Scenario& basic() {
  static const Scenario scenario = builtin_scenario("basic");
  return scenario;
}

std::vector<std::size_t> all_sensors(const Scenario& sc) {
  std::vector<std::size_t> v(sc.num_sensors());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

TEST_CASE("seed derivation is a pure function of its inputs") {
  CHECK(derive_seed(42, 7, 1) == derive_seed(42, 7, 1));
  CHECK(derive_seed(42, 7, 1) != derive_seed(42, 8, 1));
  CHECK(derive_seed(42, 7, 1) != derive_seed(42, 7, 2));
  CHECK(derive_seed(42, 7, 1) != derive_seed(43, 7, 1));
}

TEST_CASE("generate_object: type frequencies follow the regional prior") {
  auto rng = make_stream(1, 0, 0);
  const auto r1 = basic().region("R_1");
  std::size_t hits = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) hits += generate_object_in(basic(), r1, rng).type == ThreatType{0} ? 1 : 0;
  CHECK(std::abs(static_cast<double>(hits) / n - 0.6) <= 0.01);
}

TEST_CASE("generate_object: regions are uniform") {
  auto rng = make_stream(2, 0, 0);
  std::vector<std::size_t> counts(3, 0);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) ++counts[generate_object(basic(), rng).region.index];
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 3) <= 0.01);
}

TEST_CASE("generate_object: degenerate prior") {
  const Scenario sc("one", {"A", "B"}, {"R"}, {}, RegionalPrior{{{1.0, 0.0}}});
  auto rng = make_stream(3, 0, 0);
  for (int i = 0; i < 1000; ++i) CHECK(generate_object(sc, rng).type == ThreatType{0});
}

TEST_CASE("generate_detection_set without clutter") {
  auto rng = make_stream(4, 0, 0);
  const ThreatObject object{RegionType{1}, ThreatType{2}};
  const auto z = generate_detection_set(basic(), object, all_sensors(basic()), 0, ConfidenceModel::strong(), rng);
  CHECK(z.size() == 7);
  std::size_t direct = 0;
  for (const auto& d : z) {
    const auto& s = basic().sensor(d.sensor_id);
    CHECK(d.predicted_type.has_value() == (s.level == EvidenceLevel::Direct));
    if (d.predicted_type) {
      ++direct;
      CHECK(*d.predicted_type == object.type);
    }
  }
  CHECK(direct == 3);

  const std::vector<std::size_t> none;
  CHECK(generate_detection_set(basic(), object, none, 0, ConfidenceModel::strong(), rng).empty());
  CHECK_THROWS_AS((void)generate_detection_set(basic(), object, none, 1, ConfidenceModel::strong(), rng),
                  ContractViolation);
}

TEST_CASE("all-clutter detection sets use the clutter confidence") {
  auto rng = make_stream(5, 0, 0);
  const ThreatObject object{RegionType{0}, ThreatType{0}};
  const std::vector<std::size_t> one{3};  // S_4, direct
  double sum = 0.0;
  std::vector<std::size_t> predicted(3, 0);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = generate_detection_set(basic(), object, one, 1, ConfidenceModel::strong(), rng);
    sum += z.detections()[0].confidence;
    ++predicted[z.detections()[0].predicted_type->index];
  }
  CHECK(std::abs(sum / n - 2.5 / 10.5) <= 0.01);
  for (auto c : predicted) CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 3) <= 0.01);
}

TEST_CASE("bernoulli emission drops sensors with probability 1 - Pd") {
  auto rng = make_stream(6, 0, 0);
  const ThreatObject object{RegionType{0}, ThreatType{2}};  // type C: S_1 has Pd = 0
  std::size_t s1 = 0;
  std::size_t s3 = 0;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = generate_detection_set(basic(), object, all_sensors(basic()), 0, ConfidenceModel::strong(), rng,
                                          Emission::BernoulliPd);
    for (const auto& d : z) {
      s1 += d.sensor_id == "S_1" ? 1 : 0;
      s3 += d.sensor_id == "S_3" ? 1 : 0;
    }
  }
  CHECK(s1 == 0);
  CHECK(std::abs(static_cast<double>(s3) / n - 0.9) <= 0.01);
}

TEST_CASE("clutter counts") {
  auto rng = make_stream(7, 0, 0);
  std::size_t zeros = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) zeros += draw_clutter_count(0.001, 7, rng) == 0 ? 1 : 0;
  CHECK(std::abs(static_cast<double>(zeros) / n - std::exp(-0.001)) <= 0.001);

  for (int i = 0; i < 1000; ++i) CHECK(draw_clutter_count(0.0, 7, rng) == 0);

  std::size_t capped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = draw_clutter_count(10.0, 7, rng);
    CHECK(k <= 7);
    capped += k == 7 ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(capped) / n - 0.869858579117517) <= 0.01);
}

TEST_CASE("truncated Poisson total-variation distance") {
  for (double lambda : {0.5, 2.0, 10.0}) {
    auto rng = make_stream(8, static_cast<std::uint64_t>(lambda * 10), 0);
    const std::size_t cap = 7;
    const std::size_t n = 100000;
    std::vector<double> empirical(cap + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) empirical[draw_clutter_count(lambda, cap, rng)] += 1.0 / n;
    std::vector<double> exact(cap + 1, 0.0);
    double below = 0.0;
    for (std::size_t k = 0; k < cap; ++k) {
      exact[k] = oracle::poisson_pmf(k, lambda);
      below += exact[k];
    }
    exact[cap] = 1.0 - below;
    double tv = 0.0;
    for (std::size_t k = 0; k <= cap; ++k) tv += 0.5 * std::abs(empirical[k] - exact[k]);
    CHECK(tv <= 0.01);
  }
}

TEST_CASE("beta sampling mean") {
  auto rng = make_stream(9, 0, 0);
  double sum = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sample_beta(rng, {8.0, 2.5});
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 8.0 / 10.5) <= 0.01);
}

TEST_CASE("regional prior perturbation") {
  auto rng = make_stream(10, 0, 0);
  const auto& prior = basic().regional_prior();
  CHECK(perturb_regional_prior(prior, 0.0, rng) == prior);

  auto a = make_stream(11, 0, 0);
  auto b = make_stream(11, 0, 0);
  const auto full = perturb_regional_prior(prior, 1.0, a);
  for (std::size_t r = 0; r < prior.rows.size(); ++r) {
    const auto u = sample_flat_dirichlet(b, 3);
    for (std::size_t t = 0; t < 3; ++t) CHECK(full.rows[r][t] == doctest::Approx(u[t]).epsilon(1e-15));
  }

  for (double mu : {0.1, 0.37, 0.9}) {
    const auto p = perturb_regional_prior(prior, mu, rng);
    for (const auto& row : p.rows) {
      CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-12);
      for (double v : row) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("sensor prior perturbation") {
  auto rng = make_stream(12, 0, 0);
  CHECK(perturb_sensor_prior(0.7, 0.0, rng) == 0.7);
  for (int i = 0; i < 100000; ++i) {
    const double p = perturb_sensor_prior(static_cast<double>(i % 11) / 10.0, 1.0, rng);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  // pd = 1 with a positive offset clips to 1
  bool clipped = false;
  for (int i = 0; i < 100 && !clipped; ++i) {
    auto probe = make_stream(13, static_cast<std::uint64_t>(i), 0);
    const double v = uniform(probe, -1.0, 1.0);
    auto replay = make_stream(13, static_cast<std::uint64_t>(i), 0);
    if (v > 0.0) {
      CHECK(perturb_sensor_prior(1.0, 1.0, replay) == 1.0);
      clipped = true;
    }
  }
  CHECK(clipped);
}

TEST_CASE("without_direct_evidence keeps detection priors") {
  const auto stripped = without_direct_evidence(basic());
  for (std::size_t i = 0; i < basic().num_sensors(); ++i) {
    CHECK(stripped.sensors()[i].level == EvidenceLevel::Indicative);
    CHECK(stripped.sensors()[i].detection_prior == basic().sensors()[i].detection_prior);
  }
}

TEST_CASE("run_trials is deterministic and thread-count independent") {
  TrialConfig config{basic()};
  config.runs = 3000;
  config.clutter_rate = 1.0;
  config.perturbation = {0.3, PerturbationTarget::All};
  const auto serial = run_trials_serial(config);
  CHECK(serial == run_trials_serial(config));
  CHECK(serial == run_trials(config, 1));
  CHECK(serial == run_trials(config, 8));
  config.seed = 43;
  CHECK(serial != run_trials(config, 4));
}

TEST_CASE("perturbation does not touch generation") {
  TrialConfig clean{basic()};
  clean.runs = 2000;
  TrialConfig perturbed = clean;
  perturbed.perturbation = {1.0, PerturbationTarget::All};
  const auto a = run_trials(clean);
  const auto b = run_trials(perturbed);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].true_type == b[i].true_type);
    CHECK(a[i].region == b[i].region);
  }
}

TEST_CASE("prior-only runs predict the regional MAP") {
  TrialConfig config{basic()};
  config.sensor_subset_size = 0;
  config.runs = 10000;
  const auto records = run_trials(config);
  for (const auto& r : records) {
    CHECK(r.predicted_type == argmax_type(basic().prior_row(r.region)));
    CHECK(std::abs(r.posterior_of_truth - basic().prior_row(r.region)[r.true_type.index]) <= 1e-12);
  }
  CHECK(std::abs(accuracy(records) - 0.6) <= 0.015);
}

TEST_CASE("sensor subsets are uniform") {
  TrialConfig config{basic()};
  config.sensor_subset_size = 3;
  std::vector<std::size_t> counts(7, 0);
  const std::size_t n = 100000;
  for (std::uint64_t run = 0; run < n; ++run) {
    auto rng = make_stream(77, run, 0);
    for (auto s : sample_without_replacement(rng, 7, 3)) ++counts[s];
  }
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) / n - 3.0 / 7) <= 0.01);
}

TEST_CASE("proposed beats baseline on paired runs") {
  TrialConfig config{basic()};
  config.runs = 5000;
  config.classifier = Classifier::Proposed;
  const double proposed = accuracy(run_trials(config));
  config.classifier = Classifier::Baseline;
  const double baseline = accuracy(run_trials(config));
  CHECK(proposed > baseline);
}

TEST_CASE("config validation") {
  TrialConfig config{basic()};
  config.sensor_subset_size = 8;
  CHECK_THROWS_AS(validate(config), ValidationError);
  config.sensor_subset_size.reset();
  config.perturbation.mu = 1.5;
  CHECK_THROWS_AS(validate(config), ValidationError);
  config.perturbation.mu = 0.5;
  config.clutter_rate = -1;
  CHECK_THROWS_AS(validate(config), ValidationError);
  config.clutter_rate = 0;
  config.runs = 0;
  CHECK_THROWS_AS((void)run_trials(config), ValidationError);
}

TEST_CASE("degenerate evidence aborts with the run index") {
  // Both types have zero prior mass wherever the single sensor can explain a return.
  const Scenario sc("bad", {"A", "B"}, {"R"}, {{"S", EvidenceLevel::Direct, {1.0, 1.0}}},
                    RegionalPrior{{{1.0, 0.0}}});
  TrialConfig config{sc};
  config.runs = 50;
  config.clutter_rate = 1000.0;  // every detection is clutter with a random predicted type
  try {
    (void)run_trials(config, 4);
    FAIL("expected degenerate evidence");
  } catch (const DegenerateEvidenceError& e) {
    CHECK(std::string(e.what()).rfind("run ", 0) == 0);
  }
}

TEST_CASE("classify_batch matches the serial kernel") {
  auto rng = make_stream(21, 0, 0);
  std::vector<ClassificationJob> jobs;
  for (int i = 0; i < 2000; ++i) {
    const auto object = generate_object(basic(), rng);
    jobs.push_back({generate_detection_set(basic(), object, all_sensors(basic()), i % 3, ConfidenceModel::weak(), rng),
                    object.region});
  }
  const auto serial = classify_batch_serial(jobs, basic());
  CHECK(serial == classify_batch(jobs, basic(), 1));
  CHECK(serial == classify_batch(jobs, basic(), 8));
}
