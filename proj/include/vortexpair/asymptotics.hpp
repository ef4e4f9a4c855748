#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortexpair/solver.hpp"

namespace vp {

/// Metrics of one sweep point. Everything except `iterations` and `stop` is
/// recomputable from the maximizer field alone (see row_metrics).
struct SweepRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;  ///< solver message when !ok

  double h = 0.0;
  double objective = 0.0;
  double diam = 0.0;
  double diam_over_eps = 0.0;
  Point centroid;
  double centroid_offset = 0.0;  ///< |centroid - x_hat|
  double mu = 0.0;
  double mu_comp = 0.0;         ///< mu + (kappa / 2 pi) ln eps
  double objective_comp = 0.0;  ///< T + (kappa^2 / 4 pi) ln eps
  double core_energy = 0.0;
  double nu_dist_2 = 0.0;  ///< ||nu - rho*||_2
  double nu_dist_p = 0.0;  ///< ||nu - rho*||_p
  double rho_star_norm_2 = 0.0;
  double asymmetry = 0.0;
  double lambda_x2 = 0.0;  ///< (eps q) times the centroid height of w(x) = eps^2 zeta(eps x)
  double stream_log_sup = 0.0;
  double stream_decay_sup = 0.0;
  int iterations = 0;
  std::string stop;

  std::optional<MaximizerResult> result;
};

struct SweepReport {
  std::string profile;
  double kappa = 0.0;
  double q = 0.0;
  double p = 4.0;
  Point x_hat;
  double diam_limit = 2.0;  ///< limit of diam / eps
  std::vector<SweepRow> rows;  ///< eps descending

  std::vector<const SweepRow*> clean_rows() const;
};

/// Solves one maximizer per eps (rows run concurrently). A solver error marks
/// its row as failed; it is kept in the report. Throws on an invalid list:
/// empty, non-positive or not strictly decreasing.
SweepReport run_sweep(const std::vector<double>& eps_list, const SolverConfig& tmpl, double p = 4.0,
                      bool parallel = true);

/// Metrics of a maximizer field, computed from the field alone.
SweepRow row_metrics(const ScalarField& zeta, double eps, double q, double kappa, double p);

/// nu(x) = eps^2 zeta(eps x + centroid) on zeta's lattice mapped by
/// x -> (x - centroid) / eps (spacing h / eps, sample points on zeta's cell
/// centers), renormalized to mass kappa.
ScalarField rescaled_profile(const ScalarField& zeta, double eps, Point centroid, double kappa);

/// Symmetric-decreasing rearrangement of nu about the origin on nu's lattice.
ScalarField rho_star(const ScalarField& nu);

enum class VerdictStatus { pass, fail, insufficient };
const char* to_string(VerdictStatus s);

struct Verdict {
  std::string name;
  VerdictStatus status = VerdictStatus::insufficient;
  std::string message;

  bool passed() const { return status == VerdictStatus::pass; }
};

/// Trend checks read only the clean rows; fewer than three gives
/// "insufficient data".
Verdict check_diameter(const SweepReport& r);
Verdict check_centroid(const SweepReport& r);
Verdict check_profile(const SweepReport& r);
Verdict check_bounds(const SweepReport& r);
Verdict check_corollary(const SweepReport& r);
/// No growth of the two stream-function upper-bound quantities: every row at
/// most the largest-eps row plus 50% of the median magnitude.
Verdict stream_upper_check(const SweepReport& r);

std::vector<Verdict> all_checks(const SweepReport& r);

/// Limit of diam/eps: the diameter of the support of rho*.
double diameter_limit(const ReferenceProfile& rho);

nlohmann::json to_json(const std::vector<Verdict>& verdicts);

/// Column names of the sweep CSV, in order.
const std::vector<std::string>& report_columns();
/// Values of one row in report_columns() order, formatted for round-tripping.
std::vector<std::string> report_cells(const SweepRow& row);

}  // namespace vp
