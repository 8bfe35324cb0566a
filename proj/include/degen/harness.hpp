#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "degen/asymptotics.hpp"
#include "degen/kernel.hpp"

namespace degen {

struct SweepConfig {
    FamilyKind kind = FamilyKind::Node;
    int genus = 2;
    RootPoly P;
    std::vector<Complex> lambdas;
    std::vector<Complex> zs;
    QuadratureConfig quad;
    int threads = 0;  // 0: DEGEN_BERGMAN_THREADS or the hardware count

    void validate() const;
};

/// Moduli from `start` down to `end` (|start| > |end|), `per_decade` points per
/// decade, all with argument `phase`.
std::vector<Complex> geometric_lambdas(double start, double end, int per_decade, double phase = 0.0);

struct SweepRow {
    KernelSample sample;
    double psi_minus_logk0 = 0.0;
    double predicted = 0.0;  // family observable predicted at this row
    double ratio = 0.0;      // measured / predicted
    double det_imZ = 0.0;
    double sym_defect = 0.0;
    double min_eig = 0.0;
    std::string error;       // non-empty when the row failed
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> residuals;
};

struct Verdict {
    std::string id;
    std::string title;
    bool pass = false;
    std::string measured;
    std::string expected;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::map<std::string, FitResult> fits;
    std::vector<Verdict> verdicts;

    [[nodiscard]] bool all_pass() const;
};

/// Worker count: DEGEN_BERGMAN_THREADS when set and positive, else the
/// hardware concurrency (at least 1).
int worker_count(int requested = 0);

/// Per-row observables:
///   Node, CuspII  measured (psi - log k0)(-log|lambda|), predicted pi * node_prediction
///                 (Node) or cuspII_prediction (CuspII);
///   CuspI         measured k_lambda, predicted cuspI_limit.
SweepReport run_sweep(const SweepConfig& cfg);

/// Least squares on (log x, log y).
FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Least squares of E against 1 / (-log|lambda|) through the origin; the
/// coefficient is returned in `slope`.
FitResult fit_log_inverse(const std::vector<double>& abs_lambdas, const std::vector<double>& Es);

/// Mean over lambda_j = |lambda| e^{2 pi i j / n} of k_lambda(z) - cuspI_limit(z).
double phase_average(const CurveSpec& tmpl, double abs_lambda, int n_phases, Complex z,
                     const QuadratureConfig& quad = {});

/// Selectors: "full", "quadrature" (oracle equivalence), "lemmas" (A/B growth rates).
SweepReport acceptance_run(const std::string& selector = "full", int threads = 0);

inline const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{
        "lambda_re", "lambda_im", "abs_lambda", "z_re", "z_im", "k_lambda", "k0", "psi",
        "psi_minus_logk0", "predicted", "ratio", "det_imZ", "mu_lambda", "sym_defect", "min_eig"};
    return cols;
}

void write_csv(const SweepReport& report, std::ostream& os);
std::string report_to_json(const SweepReport& report, int indent = 2);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace degen
