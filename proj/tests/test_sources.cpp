#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "entroscope/errors.hpp"
#include "entroscope/sources.hpp"
#include "oracles.hpp"

using namespace entroscope;
using sources::SourceModel;

namespace {

double markov_rate(const std::vector<std::vector<double>>& rows) {
  const auto pi = oracle::stationary(rows);
  double h = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) h += pi[i] * oracle::entropy(rows[i]);
  return h;
}

}  // namespace

TEST_CASE("parse accepts every source form") {
  CHECK(SourceModel::parse("fair-coin").alphabet().size() == 2);
  CHECK(SourceModel::parse("iid:p=0.2,0.3,0.5").alphabet().size() == 3);
  CHECK(SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8").markov_order() == 1);
  CHECK(SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8;0.5,0.5;0.3,0.7").markov_order() == 2);
  CHECK(SourceModel::parse("ar1:rho=0.5").rho() == 0.5);
  CHECK_FALSE(SourceModel::parse("uniform").is_discrete());
  CHECK(SourceModel::parse("periodic:01").alphabet().size() == 2);
  CHECK(SourceModel::parse("periodic:0").alphabet().size() == 2);
  CHECK(SourceModel::parse("periodic:0,1,4").alphabet().size() == 5);
}

TEST_CASE("parse rejects malformed specs") {
  for (const char* bad : {"", "coin", "iid:p=", "iid:q=0.5,0.5", "iid:p=0.5,0.6", "iid:p=-0.1,1.1",
                          "iid:p=0.5,abc", "markov:rows=0.5,0.5;1", "markov:rows=0.5,0.5;0.5,0.5;0.5,0.5",
                          "markov:rows=0,1;1,0", "markov:rows=1,0;0,1", "ar1:rho=1", "ar1:rho=nan",
                          "uniform:x=1", "periodic:", "periodic:0a", "fair-coin:p=1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(SourceModel::parse(bad), InvalidArgument);
  }
}

TEST_CASE("reducible and periodic chains are rejected") {
  CHECK_THROWS_WITH_AS(SourceModel::markov({{0.0, 1.0}, {1.0, 0.0}}), doctest::Contains("periodic"), InvalidArgument);
  CHECK_THROWS_WITH_AS(SourceModel::markov({{1.0, 0.0}, {0.5, 0.5}}), doctest::Contains("irreducible"),
                       InvalidArgument);
  CHECK_THROWS_AS(SourceModel::markov({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}), InvalidArgument);
  CHECK_NOTHROW(SourceModel::markov({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}}));
}

TEST_CASE("spec round trip") {
  for (const char* s : {"fair-coin", "iid:p=0.3,0.7", "markov:rows=0.9,0.1;0.2,0.8", "ar1:rho=-0.25", "uniform",
                        "periodic:0,1,1", "iid:p=0.1,0.2,0.30000000000000004,0.39999999999999997"}) {
    const auto model = SourceModel::parse(s);
    const auto again = SourceModel::parse(model.spec());
    CHECK(again.spec() == model.spec());
    if (model.is_discrete()) {
      CHECK(again.sample_symbols(50, 3) == model.sample_symbols(50, 3));
    } else {
      CHECK(again.sample_reals(50, 3) == model.sample_reals(50, 3));
    }
  }
}

TEST_CASE("analytic rates of finite-alphabet sources") {
  CHECK(SourceModel::fair_coin().analytic_entropy_rate().value == doctest::Approx(std::numbers::ln2));
  CHECK(SourceModel::parse("iid:p=0.2,0.3,0.5").analytic_entropy_rate().value ==
        doctest::Approx(oracle::entropy({0.2, 0.3, 0.5})));
  const std::vector<std::vector<double>> rows = {{0.9, 0.1}, {0.2, 0.8}};
  const double h = SourceModel::markov(rows).analytic_entropy_rate().value;
  CHECK(h == doctest::Approx(markov_rate(rows)).epsilon(1e-12));
  CHECK(h == doctest::Approx(0.38352).epsilon(1e-4));
  const std::vector<std::vector<double>> order2 = {{0.9, 0.1}, {0.3, 0.7}, {0.6, 0.4}, {0.2, 0.8}};
  // Lift to a first-order chain on pairs for the oracle.
  std::vector<std::vector<double>> lifted(4, std::vector<double>(4, 0.0));
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t a = 0; a < 2; ++a) lifted[c][((c << 1) & 3) | a] = order2[c][a];
  }
  const auto pi = oracle::stationary(lifted);
  double h2 = 0.0;
  for (std::size_t c = 0; c < 4; ++c) h2 += pi[c] * oracle::entropy(order2[c]);
  CHECK(SourceModel::markov(order2).analytic_entropy_rate().value == doctest::Approx(h2).epsilon(1e-12));
  CHECK(SourceModel::parse("periodic:011").analytic_entropy_rate().value == 0.0);
}

TEST_CASE("analytic rates of real-valued sources") {
  const auto gaussian = quantize::ReferenceMeasure::gaussian();
  const auto uniform = quantize::ReferenceMeasure::uniform();
  const auto ar = SourceModel::gaussian_ar1(0.5);
  CHECK(ar.analytic_entropy_rate(&gaussian).value == doctest::Approx(0.5 * std::log(0.75)));
  CHECK(ar.analytic_entropy_rate(&gaussian).value == doctest::Approx(-0.1438).epsilon(1e-3));
  CHECK(ar.lebesgue_entropy_rate() == doctest::Approx(0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 0.75)));
  CHECK_THROWS_AS(ar.analytic_entropy_rate(&uniform), InvalidArgument);
  CHECK_THROWS_AS(ar.analytic_entropy_rate(), InvalidArgument);
  const auto u = SourceModel::uniform_real();
  CHECK(u.analytic_entropy_rate(&uniform).value == 0.0);
  CHECK(u.lebesgue_entropy_rate() == 0.0);
  // -KL(U[0,1] || N(0,1)) = E_U[log phi(x)] = -log(2 pi)/2 - 1/6
  CHECK(u.analytic_entropy_rate(&gaussian).value == doctest::Approx(-0.5 * std::log(2 * std::numbers::pi) - 1.0 / 6.0));
  CHECK_THROWS_AS(SourceModel::fair_coin().lebesgue_entropy_rate(), InvalidArgument);
}

TEST_CASE("bayes error") {
  CHECK(*SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8").bayes_error() == doctest::Approx(2.0 / 15.0));
  CHECK(*SourceModel::fair_coin().bayes_error() == doctest::Approx(0.5));
  CHECK(*SourceModel::parse("iid:p=0.2,0.3,0.5").bayes_error() == doctest::Approx(0.5));
  CHECK(*SourceModel::parse("periodic:0110").bayes_error() == 0.0);
  CHECK_FALSE(SourceModel::uniform_real().bayes_error().has_value());
}

TEST_CASE("samples are deterministic in the seed") {
  const auto model = SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8");
  CHECK(model.sample_symbols(1000, 5) == model.sample_symbols(1000, 5));
  CHECK_FALSE(model.sample_symbols(1000, 5) == model.sample_symbols(1000, 6));
  CHECK(model.sample_symbols(0, 5).empty());
  CHECK_THROWS_AS(model.sample_reals(10, 1), InvalidArgument);
  CHECK_THROWS_AS(SourceModel::uniform_real().sample_symbols(10, 1), InvalidArgument);
}

TEST_CASE("periodic samples repeat the pattern from phase 0") {
  const auto s = SourceModel::parse("periodic:0112").sample_symbols(10, 99);
  const std::vector<Symbol> want = {0, 1, 1, 2, 0, 1, 1, 2, 0, 1};
  CHECK(std::vector<Symbol>(s.symbols().begin(), s.symbols().end()) == want);
  const auto c = SourceModel::parse("periodic:0112").true_conditional(s.symbols().first(6));
  CHECK(c.prob(1) == doctest::Approx(1.0));
}

TEST_CASE("markov state frequencies approach the stationary distribution") {
  const std::vector<std::vector<double>> rows = {{0.9, 0.1}, {0.2, 0.8}};
  const auto seq = SourceModel::markov(rows).sample_symbols(1000000, 7);
  std::size_t ones = 0;
  for (Symbol s : seq.symbols()) ones += s;
  CHECK(static_cast<double>(ones) / 1e6 == doctest::Approx(1.0 / 3.0).epsilon(0.015));
  CHECK(std::abs(static_cast<double>(ones) / 1e6 - 1.0 / 3.0) <= 0.005);
}

TEST_CASE("plug-in transition frequencies match the rows") {
  const std::vector<std::vector<double>> rows = {{0.6, 0.3, 0.1}, {0.2, 0.2, 0.6}, {0.5, 0.1, 0.4}};
  const auto model = SourceModel::markov(rows);
  const auto seq = model.sample_symbols(300000, 11);
  std::vector<std::vector<double>> counts(3, std::vector<double>(3, 0.0));
  for (std::size_t i = 1; i < seq.size(); ++i) counts[seq[i - 1]][seq[i]] += 1.0;
  double plug_in = 0.0;
  for (auto& row : counts) {
    double total = 0.0;
    for (double c : row) total += c;
    for (double& c : row) c /= total;
  }
  plug_in = markov_rate(counts);
  CHECK(std::abs(plug_in - model.analytic_entropy_rate().value) <= 0.01);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(counts[i][j] - rows[i][j]) <= 0.01);
  }
}

TEST_CASE("true conditionals of a markov chain") {
  const auto model = SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8");
  const Symbol h1[] = {0, 1};
  CHECK(model.true_conditional(h1).prob(0) == doctest::Approx(0.2));
  CHECK(model.true_conditional({}).prob(0) == doctest::Approx(2.0 / 3.0));
  // Order 2 with a one-symbol history mixes rows by the stationary pair law.
  const std::vector<std::vector<double>> order2 = {{0.9, 0.1}, {0.3, 0.7}, {0.6, 0.4}, {0.2, 0.8}};
  const auto m2 = SourceModel::markov(order2);
  const auto& pi = m2.stationary();
  const Symbol h0[] = {1};
  const double want = (pi[1] * 0.3 + pi[3] * 0.2) / (pi[1] + pi[3]);
  CHECK(m2.true_conditional(h0).prob(0) == doctest::Approx(want).epsilon(1e-12));
  const Symbol bad[] = {2};
  CHECK_THROWS_AS(model.true_conditional(bad), InvalidArgument);
}

TEST_CASE("source measure matches empirical sequence probabilities") {
  // Sum over all length-6 strings of the measure equals one, and each
  // string's probability equals the product of true conditionals.
  const auto model = SourceModel::parse("markov:rows=0.7,0.3;0.4,0.6");
  const sources::SourceMeasure measure(model);
  double total = 0.0;
  for (const auto& w : oracle::all_words(2, 6)) {
    const SymbolSequence seq(Alphabet(2), std::vector<Symbol>(w.begin(), w.end()));
    total += sequence_log_prob(measure, seq).prob();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ar1 samples have the stationary moments") {
  const auto xs = SourceModel::gaussian_ar1(0.5).sample_reals(200000, 13);
  double mean = 0.0, var = 0.0, lag = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    var += (xs[i] - mean) * (xs[i] - mean);
    if (i) lag += (xs[i] - mean) * (xs[i - 1] - mean);
  }
  var /= static_cast<double>(xs.size());
  lag /= static_cast<double>(xs.size() - 1) * var;
  CHECK(std::abs(mean) <= 0.02);
  CHECK(std::abs(var - 1.0) <= 0.02);
  CHECK(std::abs(lag - 0.5) <= 0.01);
}

TEST_CASE("ar1 rate relative to the gaussian reference by Monte Carlo") {
  // E[log f(x_i | x_{i-1}) - log phi(x_i)] over a long path.
  const auto model = SourceModel::gaussian_ar1(0.5);
  const auto ref = quantize::ReferenceMeasure::gaussian();
  const auto xs = model.sample_reals(200000, 17);
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double f = model.true_conditional_density(std::span<const double>(xs).first(i), xs[i]);
    sum += std::log(f) - ref.log_density(xs[i]);
  }
  const double mc = -sum / static_cast<double>(xs.size() - 1);
  CHECK(std::abs(mc - model.analytic_entropy_rate(&ref).value) <= 0.01);
}

TEST_CASE("uniform samples stay in the unit interval") {
  for (double x : SourceModel::uniform_real().sample_reals(10000, 19)) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
