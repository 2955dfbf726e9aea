// Multi-run studies: refinement of the regularization, covariance smoothing,
// continuous dependence on the data, fixed-point contraction, and regularity
// tracking.  Every study is a pure function of (spec, seed); coupled cells
// replay the same noise keys.

#ifndef CHS_EXPERIMENTS_HPP
#define CHS_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "chs/stepper.hpp"

namespace chs {

struct StudyTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, bool>> assertions;

    void add_assertion(std::string label, bool ok) {
        assertions.emplace_back(std::move(label), ok);
    }
    bool passed() const;
    std::string csv() const;      // header + rows, 17 significant digits
    std::string summary() const;  // assertion list with pass/fail
};

struct StudySpec {
    SimulationConfig base;
    std::vector<double> schedule;  // lambdas | epsilons | deltas | horizons
    int n_paths = 64;
    bool coupled = true;
    int picard_iterations = 4;
    ScalarField perturbation_shape;  // continuous dependence; must have zero mean

    void validate(bool monotone_decreasing) const;
};

// number of worker threads: CHS_THREADS when set, hardware count otherwise
int thread_budget();

// sup_n ||a_n - b_n||_* + (sum dt ||grad(a_n - b_n)||_H^2)^{1/2}
double trajectory_distance(const TrajectoryRecord& a, const TrajectoryRecord& b);

StudyTable lambda_refinement(const StudySpec& spec);
StudyTable epsilon_smoothing(const StudySpec& spec);
StudyTable continuous_dependence(const StudySpec& spec);
StudyTable picard_contraction(const StudySpec& spec);
StudyTable regularity_study(const StudySpec& spec);

// audit: all schedule cells of a coupled additive study consume identical
// noise increments
bool audit_coupling(const StudySpec& spec);

struct BenchmarkResult {
    std::vector<double> dts;
    std::vector<double> errors;  // max-in-time H error
    double order = 0.0;          // fitted slope of log(err) vs log(dt)
};

// beta = id benchmark against the exact single-mode decay
BenchmarkResult linear_benchmark(const Domain& d, double t_final, int levels, double dt0);

// manufactured forcing so u*(t,x) = e^{-t} cos(pi x / L) solves the
// regularized flow with the given potential
BenchmarkResult manufactured_benchmark(const Domain& d, const PotentialModel& potential,
                                       double lambda, double t_final, int levels, double dt0);

}  // namespace chs

#endif
