#include "chs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

#include "chs/diagnostics.hpp"

namespace chs {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// mean and standard error of a sample, skipping NaN cells (blown-up paths)
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    int n = 0;
    int skipped = 0;
};

MeanSe reduce(const std::vector<double>& xs) {
    MeanSe r;
    double acc = 0.0;
    for (double x : xs) {
        if (std::isnan(x)) {
            ++r.skipped;
            continue;
        }
        acc += x;
        ++r.n;
    }
    if (r.n == 0) return r;
    r.mean = acc / r.n;
    double var = 0.0;
    for (double x : xs)
        if (!std::isnan(x)) var += (x - r.mean) * (x - r.mean);
    if (r.n > 1) r.se = std::sqrt(var / (r.n - 1) / r.n);
    return r;
}

void for_each_path(int n_paths, const std::function<void(int)>& fn) {
    const int nt = std::min(thread_budget(), n_paths);
    if (nt <= 1) {
        for (int p = 0; p < n_paths; ++p) fn(p);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int p = next++; p < n_paths; p = next++) {
                try {
                    fn(p);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// least-squares slope of log(y) vs log(x), positive entries only
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SimulationConfig dense_config(const SimulationConfig& base) {
    SimulationConfig c = base;
    c.snapshot_stride = 1;
    return c;
}

double dual_hs_distance(const NoiseModel& a, const NoiseModel& b) {
    const auto& ma = a.modes();
    const auto& mb = b.modes();
    if (ma.size() != mb.size())
        throw Error(ErrorCode::DomainMismatch, "covariances have different mode sets");
    double acc = 0.0;
    const double ds0 = a.mean_mode_sigma() - b.mean_mode_sigma();
    acc += ds0 * ds0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double d = ma[i].sigma - mb[i].sigma;
        acc += d * d / a.domain().eigenvalue(ma[i].kx, ma[i].ky);
    }
    return std::sqrt(acc);
}

}  // namespace

bool StudyTable::passed() const {
    for (const auto& [label, ok] : assertions)
        if (!ok) return false;
    return true;
}

std::string StudyTable::csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format17(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string StudyTable::summary() const {
    std::string out = name + "\n";
    for (const auto& [label, ok] : assertions)
        out += std::string(ok ? "PASS" : "FAIL") + "  " + label + "\n";
    out += passed() ? "result: pass\n" : "result: fail\n";
    return out;
}

void StudySpec::validate(bool monotone_decreasing) const {
    base.validate();
    if (n_paths < 1) throw Error(ErrorCode::ValidationError, "study needs at least one path");
    if (schedule.size() < 2)
        throw Error(ErrorCode::ValidationError, "study schedule needs at least two entries");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const bool ok = monotone_decreasing ? schedule[i] < schedule[i - 1]
                                            : schedule[i] > schedule[i - 1];
        if (!ok)
            throw Error(ErrorCode::ValidationError, "study schedule must be strictly monotone");
    }
}

int thread_budget() {
    if (const char* env = std::getenv("CHS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

double trajectory_distance(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DomainMismatch, "records have different lengths");
    double sup_dual = 0.0, grad_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const ScalarField diff = a.u[i] - b.u[i];
        sup_dual = std::max(sup_dual, diff.norm(NormKind::DualStar));
        if (i > 0) {
            const double g = diff.norm(NormKind::V1Semi);
            grad_sq += a.dt * g * g;
        }
    }
    return sup_dual + std::sqrt(grad_sq);
}

StudyTable lambda_refinement(const StudySpec& spec) {
    spec.validate(true);
    const std::size_t cells = spec.schedule.size();
    const std::size_t pairs = cells - 1;
    std::vector<std::vector<double>> metric(pairs, std::vector<double>(spec.n_paths, 0.0));
    std::atomic<int> blowups{0};

    for_each_path(spec.n_paths, [&](int p) {
        std::vector<TrajectoryRecord> recs;
        recs.reserve(cells);
        for (double lambda : spec.schedule) {
            SimulationConfig c = dense_config(spec.base);
            c.lambda = lambda;
            try {
                recs.push_back(run_trajectory(c, static_cast<std::uint64_t>(p)));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Blowup) throw;
                recs.push_back(TrajectoryRecord{});
                ++blowups;
            }
        }
        for (std::size_t i = 0; i < pairs; ++i)
            metric[i][p] = (recs[i].size() && recs[i + 1].size())
                               ? trajectory_distance(recs[i], recs[i + 1])
                               : std::numeric_limits<double>::quiet_NaN();
    });

    StudyTable t;
    t.name = "lambda_refinement";
    t.columns = {"lambda_hi", "lambda_lo", "metric_mean", "metric_se", "blown_paths"};
    std::vector<MeanSe> stats(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        stats[i] = reduce(metric[i]);
        t.rows.push_back({spec.schedule[i], spec.schedule[i + 1], stats[i].mean, stats[i].se,
                          static_cast<double>(stats[i].skipped)});
    }
    for (std::size_t i = 1; i < pairs; ++i)
        t.add_assertion("pair metric nonincreasing (" + format17(spec.schedule[i]) + ")",
                        stats[i].mean <= stats[i - 1].mean + stats[i].se + stats[i - 1].se);
    t.add_assertion("no blown-up cells", blowups.load() == 0);
    return t;
}

StudyTable epsilon_smoothing(const StudySpec& spec) {
    spec.validate(true);
    if (spec.schedule.back() != 0.0)
        throw Error(ErrorCode::ValidationError,
                    "smoothing schedule must end at epsilon = 0 (the reference cell)");
    const std::size_t cells = spec.schedule.size();
    std::vector<std::vector<double>> dist(cells - 1, std::vector<double>(spec.n_paths, 0.0));

    for_each_path(spec.n_paths, [&](int p) {
        SimulationConfig c0 = dense_config(spec.base);
        const TrajectoryRecord ref = run_trajectory(c0, static_cast<std::uint64_t>(p));
        for (std::size_t i = 0; i + 1 < cells; ++i) {
            SimulationConfig c = dense_config(spec.base);
            c.noise = spec.base.noise.smooth_covariance(spec.schedule[i]);
            dist[i][p] = trajectory_distance(run_trajectory(c, static_cast<std::uint64_t>(p)), ref);
        }
    });

    StudyTable t;
    t.name = "epsilon_smoothing";
    t.columns = {"epsilon", "covariance_gap", "dist_mean", "dist_se"};
    std::vector<double> gaps, means;
    std::vector<MeanSe> stats(cells - 1);
    for (std::size_t i = 0; i + 1 < cells; ++i) {
        stats[i] = reduce(dist[i]);
        const double gap =
            spec.base.noise.hs_distance(spec.base.noise.smooth_covariance(spec.schedule[i]));
        gaps.push_back(gap);
        means.push_back(stats[i].mean);
        t.rows.push_back({spec.schedule[i], gap, stats[i].mean, stats[i].se});
    }
    t.rows.push_back({0.0, 0.0, 0.0, 0.0});
    for (std::size_t i = 1; i + 1 < cells; ++i)
        t.add_assertion("distance decreasing (" + format17(spec.schedule[i]) + ")",
                        stats[i].mean <= stats[i - 1].mean + stats[i].se + stats[i - 1].se);
    const double slope = loglog_slope(gaps, means);
    t.add_assertion("log-log slope vs covariance gap in [0.7, 1.3], got " + format17(slope),
                    slope >= 0.7 && slope <= 1.3);
    return t;
}

StudyTable continuous_dependence(const StudySpec& spec) {
    spec.validate(true);
    const Domain& d = spec.base.domain;
    ScalarField shape = spec.perturbation_shape.coeffs().empty()
                            ? ScalarField::from_function(d, [&](double x, double y) {
                                  const double pi = std::numbers::pi;
                                  double v = std::cos(2.0 * pi * x / d.length[0]);
                                  if (d.ndim == 2) v *= std::cos(2.0 * pi * y / d.length[1]);
                                  return v;
                              })
                            : spec.perturbation_shape;
    if (std::abs(shape.mean()) > 1e-12)
        throw Error(ErrorCode::MeanMismatch,
                    "perturbation must preserve the spatial mean of the initial state");

    const std::size_t cells = spec.schedule.size();
    std::vector<std::vector<double>> sup_sq(cells, std::vector<double>(spec.n_paths, 0.0));
    std::vector<std::vector<double>> grad_sq(cells, std::vector<double>(spec.n_paths, 0.0));

    for_each_path(spec.n_paths, [&](int p) {
        SimulationConfig c0 = dense_config(spec.base);
        const TrajectoryRecord ref = run_trajectory(c0, static_cast<std::uint64_t>(p));
        for (std::size_t i = 0; i < cells; ++i) {
            SimulationConfig c = dense_config(spec.base);
            c.initial = spec.base.initial + shape * spec.schedule[i];
            const TrajectoryRecord rec = run_trajectory(c, static_cast<std::uint64_t>(p));
            double sup = 0.0, gsq = 0.0;
            for (std::size_t n = 0; n < rec.size(); ++n) {
                const ScalarField diff = rec.u[n] - ref.u[n];
                sup = std::max(sup, diff.norm(NormKind::DualStar));
                if (n > 0) {
                    const double g = diff.norm(NormKind::V1Semi);
                    gsq += rec.dt * g * g;
                }
            }
            sup_sq[i][p] = sup * sup;
            grad_sq[i][p] = gsq;
        }
    });

    StudyTable t;
    t.name = "continuous_dependence";
    t.columns = {"delta", "lhs", "rhs", "ratio"};
    std::vector<double> deltas, lhss, ratios;
    for (std::size_t i = 0; i < cells; ++i) {
        const double lhs = std::sqrt(reduce(sup_sq[i]).mean) + std::sqrt(reduce(grad_sq[i]).mean);
        const double rhs = (shape * spec.schedule[i]).norm(NormKind::DualStar);
        const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
        t.rows.push_back({spec.schedule[i], lhs, rhs, ratio});
        if (spec.schedule[i] > 0.0) {
            deltas.push_back(spec.schedule[i]);
            lhss.push_back(lhs);
            ratios.push_back(ratio);
        }
    }
    const double slope = loglog_slope(deltas, lhss);
    t.add_assertion("log-log slope of lhs vs delta in [0.8, 1.2], got " + format17(slope),
                    slope >= 0.8 && slope <= 1.2);
    const auto [rmin, rmax] = std::minmax_element(ratios.begin(), ratios.end());
    t.add_assertion("lhs/rhs ratio spread below 10x",
                    !ratios.empty() && *rmax <= 10.0 * *rmin);
    return t;
}

namespace {

// iterate sequence of states (one field per step, including t = 0)
using Path = std::vector<ScalarField>;

Path solve_frozen(const SimulationConfig& config, const Path& gain_source, int n_steps,
                  std::uint64_t path_id) {
    StepState state = make_initial_state(config);
    Path out;
    out.reserve(n_steps + 1);
    out.push_back(state.u);
    for (int n = 0; n < n_steps; ++n) {
        const ScalarField noise = config.noise.sample_increment(
            gain_source[n], config.dt, config.seed, path_id, static_cast<std::uint64_t>(n));
        advance(state, config, noise);
        out.push_back(state.u);
    }
    return out;
}

double path_l2_dual(const Path& a, const Path& b, double dt) {
    double acc = 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) {
        const double v = (a[n] - b[n]).norm(NormKind::DualStar);
        acc += dt * v * v;
    }
    return acc;
}

}  // namespace

StudyTable picard_contraction(const StudySpec& spec) {
    spec.validate(true);
    if (!spec.base.noise.multiplicative())
        throw Error(ErrorCode::NotMultiplicative,
                    "the contraction study needs a multiplicative noise model");
    if (spec.picard_iterations < 2)
        throw Error(ErrorCode::ValidationError, "need at least two fixed-point iterations");

    StudyTable t;
    t.name = "picard_contraction";
    t.columns = {"horizon", "d_prev", "d_last", "q"};
    std::vector<double> qs;
    for (double t0 : spec.schedule) {
        SimulationConfig c = dense_config(spec.base);
        c.t_final = t0;
        c.validate();
        const int n_steps = c.steps();
        const int iters = spec.picard_iterations;
        std::vector<std::vector<double>> dists(iters, std::vector<double>(spec.n_paths, 0.0));

        for_each_path(spec.n_paths, [&](int p) {
            StepState init = make_initial_state(c);
            Path prev(n_steps + 1, init.u);  // constant-in-time seed iterate
            for (int m = 0; m < iters; ++m) {
                Path cur = solve_frozen(c, prev, n_steps, static_cast<std::uint64_t>(p));
                dists[m][p] = path_l2_dual(cur, prev, c.dt);
                prev = std::move(cur);
            }
        });

        std::vector<double> d(iters);
        for (int m = 0; m < iters; ++m) d[m] = std::sqrt(reduce(dists[m]).mean);
        const double d_prev = d[iters - 2], d_last = d[iters - 1];
        const double q = d_prev > 0.0 ? d_last / d_prev : 0.0;
        qs.push_back(q);
        t.rows.push_back({t0, d_prev, d_last, q});
    }
    for (std::size_t i = 1; i < qs.size(); ++i)
        t.add_assertion("factor decreasing with the horizon (" + format17(spec.schedule[i]) + ")",
                        qs[i] <= qs[i - 1] + 1e-12);
    t.add_assertion("contraction at the smallest horizon", qs.back() < 1.0);
    return t;
}

StudyTable regularity_study(const StudySpec& spec) {
    spec.validate(true);
    const std::size_t cells = spec.schedule.size();
    std::vector<std::vector<double>> grad(cells, std::vector<double>(spec.n_paths, 0.0));
    std::vector<std::vector<double>> jint(cells, std::vector<double>(spec.n_paths, 0.0));
    std::vector<std::vector<double>> gradw(cells, std::vector<double>(spec.n_paths, 0.0));

    for_each_path(spec.n_paths, [&](int p) {
        for (std::size_t i = 0; i < cells; ++i) {
            SimulationConfig c = spec.base;
            c.lambda = spec.schedule[i];
            c.snapshot_stride = std::max(1, c.steps());  // estimates only
            const TrajectoryRecord rec = run_trajectory(c, static_cast<std::uint64_t>(p));
            grad[i][p] = rec.estimates.sup_grad_sq;
            jint[i][p] = rec.estimates.sup_j_lambda;
            gradw[i][p] = rec.estimates.sum_grad_w_sq;
        }
    });

    const GrowthClass growth = spec.base.potential.classify_growth(-4.0, 4.0, 400);
    const bool hypothesis_ok = growth.kind != GrowthKind::Unclassified &&
                               spec.base.noise.mean_mode_sigma() == 0.0;

    StudyTable t;
    t.name = "regularity_study";
    t.columns = {"lambda", "sup_grad_sq", "sup_j_lambda", "sum_grad_w_sq", "hypothesis_ok"};
    std::vector<double> g1, g2, g3;
    for (std::size_t i = 0; i < cells; ++i) {
        g1.push_back(reduce(grad[i]).mean);
        g2.push_back(reduce(jint[i]).mean);
        g3.push_back(reduce(gradw[i]).mean);
        t.rows.push_back({spec.schedule[i], g1.back(), g2.back(), g3.back(),
                          hypothesis_ok ? 1.0 : 0.0});
    }
    auto stable = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi <= 1.2 * std::max(*lo, 1e-300);
    };
    t.add_assertion("sup ||grad u||^2 stable across lambda", stable(g1));
    t.add_assertion("sup int j_lambda stable across lambda", stable(g2));
    t.add_assertion("sum dt ||grad w||^2 stable across lambda", stable(g3));
    return t;
}

bool audit_coupling(const StudySpec& spec) {
    spec.validate(true);
    if (spec.base.noise.multiplicative())
        throw Error(ErrorCode::NotMultiplicative,
                    "the coupling audit compares additive increments");
    SimulationConfig a = dense_config(spec.base);
    a.lambda = spec.schedule.front();
    SimulationConfig b = dense_config(spec.base);
    b.lambda = spec.schedule.back();
    const TrajectoryRecord ra = run_trajectory(a, 0);
    const TrajectoryRecord rb = run_trajectory(b, 0);
    if (ra.size() != rb.size()) return false;
    for (std::size_t i = 0; i < ra.size(); ++i)
        if (ra.bw[i].coeffs() != rb.bw[i].coeffs()) return false;
    return true;
}

BenchmarkResult linear_benchmark(const Domain& d, double t_final, int levels, double dt0) {
    SimulationConfig c;
    c.domain = d;
    c.potential = PotentialModel::linear();
    c.lambda = 0.0;
    c.noise = NoiseModel::silent(d);
    c.t_final = t_final;
    c.snapshot_stride = 1;
    const double pi = std::numbers::pi;
    c.initial = ScalarField::from_function(
        d, [&](double x, double) { return std::cos(pi * x / d.length[0]); });
    const double mu = d.eigenvalue(1);
    const double a0 = c.initial.coeff(1);

    BenchmarkResult r;
    for (int lev = 0; lev < levels; ++lev) {
        c.dt = dt0 / (1 << lev);
        const TrajectoryRecord rec = run_trajectory(c, 0);
        double err = 0.0;
        for (std::size_t n = 0; n < rec.size(); ++n) {
            ScalarField exact(d);
            exact.set_coeff(1, 0, a0 * std::exp(-(mu * mu + mu) * rec.times[n]));
            err = std::max(err, (rec.u[n] - exact).norm(NormKind::H));
        }
        r.dts.push_back(c.dt);
        r.errors.push_back(err);
    }
    r.order = loglog_slope(r.dts, r.errors);
    return r;
}

BenchmarkResult manufactured_benchmark(const Domain& d, const PotentialModel& potential,
                                       double lambda, double t_final, int levels, double dt0) {
    const double pi = std::numbers::pi;
    const ScalarField mode = ScalarField::from_function(
        d, [&](double x, double) { return std::cos(pi * x / d.length[0]); });
    auto ustar = [&](double t) { return mode * std::exp(-t); };
    // forcing through the potential channel: Delta g = du*/dt + Delta^2 u* - Delta N(u*)
    auto source_at = [&](double t) {
        const ScalarField u = ustar(t);
        ScalarField nl = u.apply_pointwise([&](double v) { return potential.yosida(lambda, v); });
        nl += u.apply_pointwise([&](double v) { return potential.perturbation(v); });
        ScalarField f = u * -1.0;  // du*/dt = -u*
        f += u.bilaplacian();
        f -= nl.laplacian();
        return f.inverse_neumann() * -1.0;
    };

    BenchmarkResult r;
    for (int lev = 0; lev < levels; ++lev) {
        SimulationConfig c;
        c.domain = d;
        c.potential = potential;
        c.lambda = lambda;
        c.noise = NoiseModel::silent(d);
        c.dt = dt0 / (1 << lev);
        c.t_final = t_final;
        c.initial = ustar(0.0);
        c.validate();
        StepState state = make_initial_state(c);
        double err = 0.0;
        const int n_steps = c.steps();
        for (int n = 0; n < n_steps; ++n) {
            c.source = source_at(n * c.dt);
            advance(state, c, ScalarField(d));
            err = std::max(err, (state.u - ustar((n + 1) * c.dt)).norm(NormKind::H));
        }
        r.dts.push_back(c.dt);
        r.errors.push_back(err);
    }
    r.order = loglog_slope(r.dts, r.errors);
    return r;
}

}  // namespace chs
