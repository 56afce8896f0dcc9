#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "salt/committee.hpp"
#include "salt/measures.hpp"
#include "salt/types.hpp"

#include "oracles.hpp"

using namespace salt;

namespace {

MemberSupports make_ms(const std::vector<std::vector<double>>& rows) {
  MemberSupports ms;
  const int L = static_cast<int>(rows.size());
  const int C = L > 0 ? static_cast<int>(rows[0].size()) : 0;
  ms.supports.resize(L, C);
  ms.labels.resize(L);
  for (int l = 0; l < L; ++l) {
    for (int c = 0; c < C; ++c)
      ms.supports(l, c) = rows[static_cast<std::size_t>(l)]
                              [static_cast<std::size_t>(c)];
    ms.labels[l] = oracle::ref_argmax(rows[static_cast<std::size_t>(l)]);
  }
  return ms;
}

VectorXd vec(const std::vector<double>& v) {
  VectorXd out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<long>(i)] = v[i];
  return out;
}

constexpr MeasureKind kAllKinds[] = {
    MeasureKind::Random,          MeasureKind::FixedUncertainty,
    MeasureKind::VariableUncertainty, MeasureKind::ClassificationMargin,
    MeasureKind::VoteEntropy,     MeasureKind::ConsensusEntropy,
    MeasureKind::MaxDisagreement, MeasureKind::MinMargin,
};

}  // namespace

TEST_CASE("measure kind names round trip") {
  for (MeasureKind kind : kAllKinds)
    CHECK(measure_kind_from_name(measure_kind_name(kind)) == kind);
  CHECK(measure_kind_name(MeasureKind::FixedUncertainty) ==
        "fixed_uncertainty");
  CHECK(measure_kind_name(MeasureKind::VoteEntropy) == "vote_entropy");
  CHECK_THROWS_AS(measure_kind_from_name("nearest_neighbor"),
                  std::invalid_argument);
  CHECK_THROWS_AS(measure_kind_from_name(""), std::invalid_argument);
}

TEST_CASE("query direction is high for entropy-type measures and low otherwise") {
  CHECK(measure_direction(MeasureKind::VoteEntropy) ==
        QueryDirection::QueryWhenHigh);
  CHECK(measure_direction(MeasureKind::ConsensusEntropy) ==
        QueryDirection::QueryWhenHigh);
  CHECK(measure_direction(MeasureKind::MaxDisagreement) ==
        QueryDirection::QueryWhenHigh);
  CHECK(measure_direction(MeasureKind::FixedUncertainty) ==
        QueryDirection::QueryWhenLow);
  CHECK(measure_direction(MeasureKind::VariableUncertainty) ==
        QueryDirection::QueryWhenLow);
  CHECK(measure_direction(MeasureKind::ClassificationMargin) ==
        QueryDirection::QueryWhenLow);
  CHECK(measure_direction(MeasureKind::MinMargin) ==
        QueryDirection::QueryWhenLow);
}

TEST_CASE("committee-dependence flags") {
  CHECK(measure_uses_committee(MeasureKind::VoteEntropy));
  CHECK(measure_uses_committee(MeasureKind::ConsensusEntropy));
  CHECK(measure_uses_committee(MeasureKind::MaxDisagreement));
  CHECK(measure_uses_committee(MeasureKind::MinMargin));
  CHECK_FALSE(measure_uses_committee(MeasureKind::Random));
  CHECK_FALSE(measure_uses_committee(MeasureKind::FixedUncertainty));
  CHECK_FALSE(measure_uses_committee(MeasureKind::VariableUncertainty));
  CHECK_FALSE(measure_uses_committee(MeasureKind::ClassificationMargin));
}

TEST_CASE("entropy of uniform and one-hot vectors") {
  for (int C : {2, 3, 5})
    CHECK(entropy(VectorXd::Constant(C, 1.0 / C)) ==
          doctest::Approx(std::log(static_cast<double>(C))).epsilon(1e-12));
  CHECK(entropy(vec({1.0, 0.0})) == 0.0);
  CHECK(entropy(vec({0.0, 0.0, 1.0})) == 0.0);
}

TEST_CASE("kl divergence basics") {
  const VectorXd p = vec({0.2, 0.5, 0.3});
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(kl_divergence(vec({1.0, 0.0}), vec({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Zero entries on the left contribute nothing, even against a zero on the
  // right.
  CHECK(kl_divergence(vec({0.0, 1.0}), vec({0.0, 1.0})) == 0.0);
  CHECK_THROWS_AS(kl_divergence(vec({1.0, 0.0}), vec({1.0, 0.0, 0.0})),
                  std::invalid_argument);
}

TEST_CASE("top-two margin examples") {
  CHECK(top_two_margin(vec({0.6, 0.3, 0.1})) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(top_two_margin(vec({1.0, 0.0})) == 1.0);
  CHECK(top_two_margin(VectorXd::Constant(4, 0.25)) == 0.0);
  VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(top_two_margin(one), std::invalid_argument);
}

TEST_CASE("single-vector scores follow the measure kind") {
  const VectorXd supports = vec({0.6, 0.3, 0.1});
  CHECK(score_single(MeasureKind::FixedUncertainty, supports) == 0.6);
  CHECK(score_single(MeasureKind::VariableUncertainty, supports) == 0.6);
  CHECK(score_single(MeasureKind::ClassificationMargin, supports) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(score_single(MeasureKind::FixedUncertainty,
                     VectorXd::Constant(3, 1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(score_single(MeasureKind::ClassificationMargin, vec({1.0, 0.0})) ==
        1.0);
  VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(score_single(MeasureKind::FixedUncertainty, one),
                  std::invalid_argument);
  CHECK_THROWS_AS(score_single(MeasureKind::VoteEntropy, supports),
                  std::invalid_argument);
}

TEST_CASE("unanimous committee has zero vote entropy") {
  std::vector<std::vector<double>> rows(9, {0.8, 0.2});
  CHECK(score_committee(MeasureKind::VoteEntropy, make_ms(rows)) == 0.0);
}

TEST_CASE("consensus entropy of two opposed one-hot members is ln 2") {
  const MemberSupports ms = make_ms({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(score_committee(MeasureKind::ConsensusEntropy, ms) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("identical member rows give zero max disagreement") {
  std::vector<std::vector<double>> rows(4, {0.5, 0.3, 0.2});
  CHECK(score_committee(MeasureKind::MaxDisagreement, make_ms(rows)) == 0.0);
}

TEST_CASE("min margin picks the smallest member margin") {
  const MemberSupports ms =
      make_ms({{0.65, 0.35}, {0.525, 0.475}, {0.61, 0.39}});
  const double score = score_committee(MeasureKind::MinMargin, ms);
  CHECK(score == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(score == top_two_margin(ms.supports.row(1).transpose()));
}

TEST_CASE("committee scores validate their inputs") {
  MemberSupports empty;
  empty.supports.resize(0, 3);
  empty.labels.resize(0);
  CHECK_THROWS_AS(score_committee(MeasureKind::VoteEntropy, empty),
                  std::invalid_argument);
  MemberSupports one_class;
  one_class.supports = MatrixXd::Ones(2, 1);
  one_class.labels = VectorXi::Zero(2);
  CHECK_THROWS_AS(score_committee(MeasureKind::ConsensusEntropy, one_class),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      score_committee(MeasureKind::FixedUncertainty, make_ms({{0.5, 0.5}})),
      std::invalid_argument);
}

TEST_CASE("committee scores agree with brute-force references on random matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> members_pick(2, 9);
  std::uniform_int_distribution<int> classes_pick(2, 6);
  for (int t = 0; t < 1000; ++t) {
    const int L = members_pick(rng);
    const int C = classes_pick(rng);
    const MemberSupports ms = oracle::random_supports(rng, L, C);
    CAPTURE(t);
    CHECK(std::abs(score_committee(MeasureKind::VoteEntropy, ms) -
                   oracle::ref_vote_entropy(ms)) <= 1e-9);
    CHECK(std::abs(score_committee(MeasureKind::ConsensusEntropy, ms) -
                   oracle::ref_consensus_entropy(ms)) <= 1e-9);
    CHECK(std::abs(score_committee(MeasureKind::MaxDisagreement, ms) -
                   oracle::ref_max_disagreement(ms)) <= 1e-9);
    CHECK(std::abs(score_committee(MeasureKind::MinMargin, ms) -
                   oracle::ref_min_margin(ms)) <= 1e-9);
  }
}

TEST_CASE("score bounds hold on random matrices") {
  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<int> members_pick(2, 9);
  std::uniform_int_distribution<int> classes_pick(2, 6);
  for (int t = 0; t < 300; ++t) {
    const int L = members_pick(rng);
    const int C = classes_pick(rng);
    const MemberSupports ms = oracle::random_supports(rng, L, C);
    const double ln_c = std::log(static_cast<double>(C));
    const double ve = score_committee(MeasureKind::VoteEntropy, ms);
    const double ce = score_committee(MeasureKind::ConsensusEntropy, ms);
    CHECK(ve >= 0.0);
    CHECK(ve <= ln_c + 1e-12);
    CHECK(ce >= 0.0);
    CHECK(ce <= ln_c + 1e-12);
    CHECK(score_committee(MeasureKind::MaxDisagreement, ms) >= 0.0);
    const double mm = score_committee(MeasureKind::MinMargin, ms);
    CHECK(mm >= 0.0);
    CHECK(mm <= 1.0);
    for (int l = 0; l < L; ++l) {
      const double margin = top_two_margin(ms.supports.row(l).transpose());
      CHECK(margin >= 0.0);
      CHECK(margin <= 1.0);
    }
  }
}

TEST_CASE("vote entropy and max disagreement ignore member order") {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 50; ++t) {
    const MemberSupports ms = oracle::random_supports(rng, 6, 4);
    std::vector<int> order = {0, 1, 2, 3, 4, 5};
    std::shuffle(order.begin(), order.end(), rng);
    MemberSupports shuffled;
    shuffled.supports.resize(6, 4);
    shuffled.labels.resize(6);
    for (int l = 0; l < 6; ++l) {
      shuffled.supports.row(l) = ms.supports.row(order[static_cast<std::size_t>(l)]);
      shuffled.labels[l] = ms.labels[order[static_cast<std::size_t>(l)]];
    }
    CHECK(std::abs(score_committee(MeasureKind::VoteEntropy, ms) -
                   score_committee(MeasureKind::VoteEntropy, shuffled)) <=
          1e-12);
    CHECK(std::abs(score_committee(MeasureKind::MaxDisagreement, ms) -
                   score_committee(MeasureKind::MaxDisagreement, shuffled)) <=
          1e-12);
  }
}

TEST_CASE("variable-uncertainty threshold schedule") {
  CHECK(variable_uncertainty_update(0.9, true) == 0.9 * (1.0 - 0.01));
  CHECK(variable_uncertainty_update(0.9, true) ==
        doctest::Approx(0.891).epsilon(1e-15));
  CHECK(variable_uncertainty_update(1.0, false) == 1.0);
  CHECK(variable_uncertainty_update(0.01, true) == 0.01);
  double theta = 0.5;
  for (int t = 0; t < 1000; ++t) {
    theta = variable_uncertainty_update(theta, t % 2 == 0);
    CHECK(theta >= 0.01);
    CHECK(theta <= 1.0);
  }
}

TEST_CASE("measure objects score the mean row for single-vector kinds") {
  const MemberSupports ms =
      make_ms({{0.7, 0.2, 0.1}, {0.5, 0.25, 0.25}, {0.6, 0.3, 0.1}});
  const VectorXd mean = ms.supports.colwise().mean().transpose();
  for (MeasureKind kind :
       {MeasureKind::FixedUncertainty, MeasureKind::VariableUncertainty,
        MeasureKind::ClassificationMargin}) {
    Measure measure(kind, 0.5);
    CHECK(measure.score(ms) == score_single(kind, mean));
  }
  for (MeasureKind kind :
       {MeasureKind::VoteEntropy, MeasureKind::ConsensusEntropy,
        MeasureKind::MaxDisagreement, MeasureKind::MinMargin}) {
    Measure measure(kind, 0.5);
    CHECK(measure.score(ms) == score_committee(kind, ms));
  }
}

TEST_CASE("random measure scores as NaN and never answers wants_query") {
  Measure random(MeasureKind::Random, 0.3);
  const MemberSupports ms = make_ms({{0.6, 0.4}});
  CHECK(std::isnan(random.score(ms)));
  CHECK_THROWS_AS(random.wants_query(0.5), std::logic_error);
}

TEST_CASE("wants_query includes the threshold in both directions") {
  Measure low(MeasureKind::FixedUncertainty, 0.75);
  CHECK(low.wants_query(0.75));
  CHECK(low.wants_query(0.6));
  CHECK_FALSE(low.wants_query(0.7500001));
  Measure high(MeasureKind::VoteEntropy, 0.4);
  CHECK(high.wants_query(0.4));
  CHECK(high.wants_query(0.9));
  CHECK_FALSE(high.wants_query(0.3999999));
}

TEST_CASE("notify_decision only moves the variable-uncertainty threshold") {
  for (MeasureKind kind :
       {MeasureKind::Random, MeasureKind::FixedUncertainty,
        MeasureKind::ClassificationMargin, MeasureKind::VoteEntropy,
        MeasureKind::ConsensusEntropy, MeasureKind::MaxDisagreement,
        MeasureKind::MinMargin}) {
    Measure measure(kind, 0.42);
    measure.notify_decision(true);
    measure.notify_decision(false);
    CHECK(measure.threshold() == 0.42);
  }
  Measure vu(MeasureKind::VariableUncertainty, 0.9);
  vu.notify_decision(true);
  CHECK(vu.threshold() == 0.9 * (1.0 - 0.01));
  const double after_query = vu.threshold();
  vu.notify_decision(false);
  CHECK(vu.threshold() == std::min(after_query * (1.0 + 0.01), 1.0));
}

TEST_CASE("measure construction validates random rates and steps") {
  CHECK_THROWS_AS(Measure(MeasureKind::Random, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(Measure(MeasureKind::Random, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(
      Measure(MeasureKind::Random, std::numeric_limits<double>::quiet_NaN()),
      std::invalid_argument);
  CHECK_NOTHROW(Measure(MeasureKind::Random, 0.0));
  CHECK_NOTHROW(Measure(MeasureKind::Random, 1.0));
  // Entropy thresholds above ln C are legal configuration.
  CHECK_NOTHROW(Measure(MeasureKind::VoteEntropy, 25.5));
  CHECK_THROWS_AS(Measure(MeasureKind::VariableUncertainty, 0.9, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure(MeasureKind::VariableUncertainty, 0.9, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure(MeasureKind::VariableUncertainty, 0.9, -0.5),
                  std::invalid_argument);
}
