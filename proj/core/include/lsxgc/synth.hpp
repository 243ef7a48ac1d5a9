#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lsxgc/connectivity.hpp"
#include "lsxgc/matrix.hpp"
#include "lsxgc/timeseries.hpp"

namespace lsxgc {

/// Vector-autoregressive model with planted directed ground truth.
/// coefficients[lag](j, i) is the influence of series i on series j at
/// lag+1; adjacency(i, j) = 1 iff series i drives series j at any lag
/// (self-lags excluded).
struct VarModel {
    std::size_t order = 1;
    std::vector<Matrix> coefficients;
    double noise_sd = 1.0;
    Matrix adjacency;

    std::size_t series_count() const { return coefficients.empty() ? 0 : coefficients[0].rows(); }
};

/// Companion-matrix spectral radius estimate by power iteration
/// (`iters` steps per start, max over `restarts` random starts).
double companion_spectral_radius(const VarModel& model, std::uint64_t probe_seed,
                                 int restarts = 1, int iters = 200);

/// Scales all coefficients by a single accumulated factor until the
/// estimated companion spectral radius is <= 0.95.
void stabilize(VarModel& model, std::uint64_t probe_seed);

/// Random stable VAR: each directed off-diagonal edge present with
/// probability `density`, carrying one coefficient of magnitude
/// uniform in [0.2, 0.5] (random sign) at a uniformly drawn lag;
/// self-coefficients 0.3 at lag 1; then rescaled to spectral radius <= 0.95.
/// Deterministic in `seed`.
VarModel gen_var_model(std::size_t n, std::size_t q, double density, std::uint64_t seed);

/// Simulates T samples after a 200-sample burn-in from zero initial state,
/// with iid Gaussian(0, noise_sd^2) innovations. Requires T >= 10*q.
/// Throws StabilityError if any value exceeds 1e6 in magnitude.
TimeSeriesEnsemble simulate(const VarModel& model, std::size_t t_samples, std::uint64_t seed);

struct CohortSpec {
    std::size_t subjects_per_class = 63;
    double coupling_delta = 0.0; // class 1 scales its strongest edges by (1 + delta)
    std::size_t t_samples = 400;
    std::size_t series_count = 15;
    std::size_t order = 2;
    double density = 0.15;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

/// The two class models behind gen_cohort: the base model and the class-1
/// variant whose ceil(25%) strongest edges are scaled by (1 + coupling_delta)
/// and re-stabilized.
std::pair<VarModel, VarModel> cohort_models(const CohortSpec& spec);

/// Two-class synthetic cohort: class 0 from the base model, class 1 from the
/// modified model, per-subject noise seeds derived as
/// hash_combine(spec.seed, class, index). Record order: all class 0, then
/// all class 1, index ascending.
SubjectDataset gen_cohort(const CohortSpec& spec, unsigned threads = 1);

/// ROC AUC of off-diagonal connectivity scores against the binary ground
/// truth. lsxgc scores are used directly; correlation scores as |r| on both
/// (i,j) and (j,i). Throws UndefinedMetricError when truth is all-zero or
/// all-one.
double edge_recovery_auc(const ConnectivityMatrix& scores, const Matrix& truth);

/// Writes per-subject matrix files, manifest.json, and adjacency.csv into
/// `dir` (created if needed). Binary subject files when `binary` is set.
void save_cohort(const SubjectDataset& dataset, const Matrix& adjacency,
                 const std::filesystem::path& dir, bool binary = false);

} // namespace lsxgc
