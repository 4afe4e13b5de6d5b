#ifndef INFOFLOW_SYNTH_HPP
#define INFOFLOW_SYNTH_HPP

// Synthetic ground truth: stationary Gaussian VAR panels with known coupling,
// planted redundant/synergistic structures, and trade tapes built from panels.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "infoflow/ingest.hpp"
#include "infoflow/oinfo.hpp"

namespace infoflow {

inline constexpr int kBurnIn = 1000;

struct Coupling {
  int source = 0;
  int target = 0;
  int lag = 1;
  double coefficient = 0;
};

// x_t[target] += coefficient * x_{t-lag}[source] for every coupling, plus
// independent Gaussian noise with the given variances.
struct CouplingSpec {
  int n_vars = 0;
  std::vector<Coupling> couplings;
  Eigen::VectorXd noise_variances;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;  // defaults to X0, X1, ...

  int max_lag() const;
  std::vector<std::string> resolved_labels() const;
};

Eigen::MatrixXd companion_matrix(const CouplingSpec& spec);
double spectral_radius(const CouplingSpec& spec);

// Contemporaneous stationary covariance, from the discrete Lyapunov equation
// of the companion form.
Eigen::MatrixXd stationary_covariance(const CouplingSpec& spec);

// T samples after a burn-in of kBurnIn steps. Throws Error for a
// non-stationary spec.
ReturnPanel gen_var(const CouplingSpec& spec, Index t_len);

// Population F for the bivariate lag-1 family with a white source:
// ln((b^2 var_x + var_y) / var_y). Other specs throw Error.
double analytic_var_gc(const CouplingSpec& spec, int source, int target);

struct PlantedPanel {
  ReturnPanel panel;
  std::vector<std::string> planted;  // the two planted sources
  std::string target;
};

// synergistic: Y_t = S1_{t-1} + S2_{t-1} + 0.1 e with S1, S2 independent white.
// redundant:   S1 = Z + 0.5 e1, S2 = Z + 0.5 e2, Y_t = Z_{t-1} + e_y.
// n_extra independent white distractors D1..Dn are appended.
PlantedPanel gen_planted_highorder(MultipletKind kind, int n_extra, Index t_len,
                                   std::uint64_t seed);

struct TapeOptions {
  std::int64_t start = 0;  // Unix seconds of minute 0
  double base_price = 100.0;
  double return_scale = 1e-3;   // panel values are multiplied by this
  double gap_probability = 0;   // chance a minute has no trade
  std::vector<std::int64_t> listing_delay_minutes;  // per column, default 0
  std::uint64_t seed = 0;
};

struct AssetTape {
  std::string ticker;
  std::vector<TradeRecord> trades;
};

// One or two trades per minute at the price implied by the cumulative
// returns of each panel column.
std::vector<AssetTape> gen_trade_tape(const ReturnPanel& returns, const TapeOptions& options);

}  // namespace infoflow

#endif  // INFOFLOW_SYNTH_HPP
