#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bwspdc/config.hpp"
#include "bwspdc/oracle.hpp"
#include "bwspdc/pairgen.hpp"

namespace bwspdc {

// Everything the text report prints, gathered in one pass over a scenario.
struct ReportScalars {
  double poling_period = 0.0;  // m
  double omega_pump = 0.0, omega_center = 0.0;
  double gain_linewidth = 0.0;          // rad/s, operating geometry
  double gain_linewidth_forward = 0.0;  // rad/s, co-propagating reference
  double gain_ratio = 0.0;              // forward / operating
  double cluster_spacing = 0.0;         // rad/s
  double cluster_margin = 0.0;
  bool single_mode = false;
  DecayRates rates;
  ModePair mode_pair;
  std::complex<double> kappa1{0.0, 0.0};
  double small_gain_ratio = 0.0;  // |kappa1| against sqrt(Gs Gi)/2
  double biphoton_linewidth = 0.0;
  double biphoton_linewidth_scanned = 0.0;
  double pair_rate = 0.0;       // 1/s
  double coherence_time = 0.0;  // s
  Brightness brightness;
  double forward_kappa = 0.0;      // 1/m, same pump driving bare crystal
  double forward_rate = 0.0;       // 1/s
  double enhancement_ratio = 0.0;  // spectral brightness vs forward
  bool gain_warning = false;
};

ReportScalars compute_report(const Scenario& scenario);

// Signal-frequency grid centered on the operating mode, spanning the
// configured number of biphoton linewidths.
std::vector<double> spectrum_grid(const Scenario& scenario);

// Delay grid spanning the configured number of coherence times.
std::vector<double> tau_grid(const Scenario& scenario);

void write_scalar_report(std::ostream& out, const ReportScalars& r,
                         const std::string& hash);

// CSV writers. Every file starts with "# config <hash>" followed by the
// column header.
void write_spectrum_csv(const std::string& path,
                        const std::vector<double>& omega, double omega_ref,
                        const std::vector<double>& s,
                        const std::string& hash);
void write_g2_csv(const std::string& path, const std::vector<double>& tau,
                  const std::vector<double>& g2, double accidental_level,
                  const std::string& hash);
void write_events_csv(const std::string& path, const EventStream& stream,
                      const std::string& hash);
void write_histogram_csv(const std::string& path,
                         const CoincidenceHistogram& hist,
                         const std::string& hash);
void write_trace_csv(const std::string& path,
                     const std::vector<TracePoint>& trace,
                     const std::string& hash);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color;  // empty: palette by position
};

struct PlotPanel {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
};

// Deterministic multi-panel SVG, two panels per row.
void write_svg_grid(const std::string& path, const std::string& title,
                    const std::vector<PlotPanel>& panels);

}  // namespace bwspdc
