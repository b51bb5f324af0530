#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bwspdc/error.hpp"
#include "bwspdc/pairgen.hpp"

using namespace bwspdc;
using doctest::Approx;

namespace {
const double Gs = 1.7668e7;  // rad/s
const double Gi = 1.6772e7;
}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  auto a = generate(500.0, Gs, Gi, 5.0, 42);
  auto b = generate(500.0, Gs, Gi, 5.0, 42);
  REQUIRE(a.stream.events.size() == b.stream.events.size());
  for (std::size_t k = 0; k < a.stream.events.size(); ++k) {
    CHECK(a.stream.events[k].time == b.stream.events[k].time);
    CHECK(a.stream.events[k].channel == b.stream.events[k].channel);
  }
  auto c = generate(500.0, Gs, Gi, 5.0, 43);
  bool identical = c.stream.events.size() == b.stream.events.size();
  if (identical)
    for (std::size_t k = 0; k < c.stream.events.size(); ++k)
      if (c.stream.events[k].time != b.stream.events[k].time) {
        identical = false;
        break;
      }
  CHECK_FALSE(identical);
}

TEST_CASE("streams are time ordered and bounded by the run") {
  auto g = generate(800.0, Gs, Gi, 2.0, 7);
  REQUIRE_FALSE(g.stream.events.empty());
  long signals = 0, idlers = 0;
  double prev = 0.0;
  for (const auto& e : g.stream.events) {
    CHECK(e.time >= prev);
    CHECK(e.time >= 0.0);
    CHECK(e.time <= 2.0);
    (e.channel == Channel::Signal ? signals : idlers)++;
    prev = e.time;
  }
  CHECK(signals == g.pairs_recorded);
  CHECK(idlers == g.pairs_recorded);
  CHECK(g.pairs_recorded <= g.pairs_emitted);
  CHECK_FALSE(g.purity_warning);
}

TEST_CASE("pair count follows the poisson mean") {
  auto g = generate(1000.0, Gs, Gi, 10.0, 123);
  // 10000 expected, 5 sigma window
  CHECK(g.pairs_emitted > 9500);
  CHECK(g.pairs_emitted < 10500);
}

TEST_CASE("high rates overlap pairs and trip the purity warning") {
  auto g = generate(5e6, Gs, Gi, 1e-3, 5);
  CHECK(g.purity_warning);
}

TEST_CASE("invalid stream parameters") {
  CHECK_THROWS_AS(generate(500.0, Gs, Gi, 0.0, 1), Error);
  try {
    generate(500.0, Gs, Gi, -1.0, 1);
    FAIL("expected an invalid-duration error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::InvalidDuration);
  }
  CHECK_THROWS_AS(generate(-1.0, Gs, Gi, 1.0, 1), Error);
  CHECK_THROWS_AS(generate(500.0, 0.0, Gi, 1.0, 1), Error);
}

TEST_CASE("sparse pairs give one delay each with balanced signs") {
  auto g = generate(50.0, Gs, Gi, 20.0, 11);
  auto delays = coincidence_delays(g.stream, 600e-9);
  CHECK(long(delays.size()) == g.pairs_recorded);
  long positive = std::count_if(delays.begin(), delays.end(),
                                [](double d) { return d > 0.0; });
  double frac = double(positive) / delays.size();
  // idler-late branch carries Gs/(Gs+Gi) of the mass
  CHECK(frac == Approx(Gs / (Gs + Gi)).epsilon(0.12));
  for (double d : delays) CHECK(std::abs(d) <= 600e-9);
}

TEST_CASE("empty streams cannot be analyzed") {
  auto g = generate(0.0, Gs, Gi, 1.0, 3);
  CHECK(g.stream.events.empty());
  try {
    coincidence_delays(g.stream, 600e-9);
    FAIL("expected an empty-stream error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::EmptyStream);
  }
}

TEST_CASE("histogram covers the window with symmetric bins") {
  auto g = generate(500.0, Gs, Gi, 20.0, 17);
  auto h = histogram(g.stream, 600e-9, 5e-9);
  REQUIRE(h.edges.size() == h.counts.size() + 1);
  CHECK(h.edges.front() == Approx(-h.edges.back()).epsilon(1e-12));
  CHECK(h.window == Approx(h.edges.back()).epsilon(1e-12));
  CHECK(h.bin_width == 5e-9);
  long total = 0;
  for (long c : h.counts) total += c;
  CHECK(total == h.total);
  CHECK(h.total == long(coincidence_delays(g.stream, h.window).size()));
}

TEST_CASE("histogram parameter validation") {
  auto g = generate(200.0, Gs, Gi, 1.0, 19);
  CHECK_THROWS_AS(histogram(g.stream, 600e-9, 0.0), Error);
  try {
    histogram(g.stream, 600e-9, 100e-9);  // fewer than 10 bins per side
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ConfigError);
  }
}

TEST_CASE("wing fits recover the decay rates") {
  auto g = generate(2000.0, Gs, Gi, 20.0, 29);
  auto h = histogram(g.stream, 600e-9, 5e-9);
  auto fit = fit_decay_rates(h);
  CHECK(fit.Gamma_signal == Approx(Gs).epsilon(0.10));
  CHECK(fit.Gamma_idler == Approx(Gi).epsilon(0.10));
  CHECK(fit.coherence_time ==
        Approx(std::log(2.0) *
               (1.0 / fit.Gamma_signal + 1.0 / fit.Gamma_idler))
            .epsilon(1e-12));
}

TEST_CASE("too few coincidences to fit") {
  auto g = generate(2.0, Gs, Gi, 1.0, 31);
  auto h = histogram(g.stream, 600e-9, 5e-9);
  CHECK_THROWS_AS(fit_decay_rates(h), Error);
}

TEST_CASE("truncated two-sided exponential cdf") {
  double w = 600e-9;
  CHECK(delay_cdf(-w, Gs, Gi, w) == Approx(0.0).scale(1.0));
  CHECK(delay_cdf(w, Gs, Gi, w) == Approx(1.0));
  CHECK(delay_cdf(0.0, Gs, Gi, w) == Approx(Gi / (Gs + Gi)).epsilon(1e-3));
  double prev = 0.0;
  for (int k = -10; k <= 10; ++k) {
    double v = delay_cdf(k * w / 10.0, Gs, Gi, w);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("simulated delays pass the distribution test") {
  auto g = generate(500.0, Gs, Gi, 20.0, 7);
  auto delays = coincidence_delays(g.stream, 600e-9);
  REQUIRE(delays.size() > 5000);
  double d = ks_statistic(delays, Gs, Gi, 600e-9);
  CHECK(d < ks_critical(delays.size(), 0.01));
}

TEST_CASE("wrong rates fail the distribution test") {
  auto g = generate(500.0, Gs, Gi, 20.0, 7);
  auto delays = coincidence_delays(g.stream, 600e-9);
  double d = ks_statistic(delays, 3.0 * Gs, 3.0 * Gi, 600e-9);
  CHECK(d > ks_critical(delays.size(), 0.01));
}

TEST_CASE("ks critical values") {
  CHECK(ks_critical(10000, 0.01) == Approx(1.62762 / 100.0).epsilon(1e-9));
  CHECK(ks_critical(10000, 0.05) == Approx(1.35810 / 100.0).epsilon(1e-9));
  CHECK(ks_critical(400, 0.01) == Approx(1.62762 / 20.0).epsilon(1e-9));
}
