#pragma once

#include <cstdint>
#include <vector>

namespace bwspdc {

enum class Channel { Signal, Idler };

struct EventRecord {
  double time = 0.0;  // s from stream start
  Channel channel = Channel::Signal;
};

// Detection record of a run: time-ordered clicks on both channels, with the
// pair bookkeeping deliberately discarded.
struct EventStream {
  std::vector<EventRecord> events;
  double duration = 0.0;
  std::uint64_t seed = 0;
};

struct GenerateResult {
  EventStream stream;
  long pairs_emitted = 0;   // Poisson pairs drawn inside the run
  long pairs_recorded = 0;  // pairs with both clicks inside [0, duration]
  bool purity_warning = false;  // accidental overlap within the pair window
};

// Draws pair emission times as a Poisson process at the given rate and a
// signal-idler delay from the two-sided exponential with decay constants
// Gamma_signal (early side) and Gamma_idler (late side). Pairs are dropped
// unless both clicks land inside the run. Deterministic for a fixed seed.
GenerateResult generate(double pair_rate, double Gamma_signal,
                        double Gamma_idler, double duration,
                        std::uint64_t seed);

// All idler-minus-signal delays with |delay| <= window, one entry per
// signal/idler click pair that falls inside the window.
std::vector<double> coincidence_delays(const EventStream& stream,
                                       double window);

struct CoincidenceHistogram {
  std::vector<double> edges;  // bin edges, symmetric around zero, size n+1
  std::vector<long> counts;   // size n
  double bin_width = 0.0;
  double window = 0.0;  // realized half-range = edges.back()
  long total = 0;
};

// Histogram of coincidence delays. The window is rounded up to a whole
// number of bins on each side.
CoincidenceHistogram histogram(const EventStream& stream, double window,
                               double bin_width);

struct FittedRates {
  double Gamma_signal = 0.0;
  double Gamma_idler = 0.0;
  double coherence_time = 0.0;  // ln2 (1/Gs + 1/Gi) from the fit
};

// Weighted log-linear fit of each exponential wing of the histogram.
FittedRates fit_decay_rates(const CoincidenceHistogram& hist);

// CDF of the two-sided exponential truncated to [-window, window].
double delay_cdf(double tau, double Gamma_signal, double Gamma_idler,
                 double window);

// Kolmogorov-Smirnov distance between the observed delays and the truncated
// two-sided exponential.
double ks_statistic(std::vector<double> delays, double Gamma_signal,
                    double Gamma_idler, double window);

// Asymptotic critical KS distance at significance alpha (0.01 or 0.05).
double ks_critical(std::size_t n, double alpha);

}  // namespace bwspdc
