// SPDX-License-Identifier: Apache-2.0
//
// hsrbf - hybrid beamforming link-level simulator for mmWave railway downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hsrbf/antiblockage.hpp"
#include "hsrbf/harness.hpp"
#include "hsrbf/metrics.hpp"
#include "hsrbf/mmse.hpp"
#include "hsrbf/omp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace hsrbf;

namespace
{
    using Clock = std::chrono::steady_clock;

    struct Verdict
    {
        bool pass = false;
        std::string detail;
    };

    int failures = 0;

    void report(int id, const Verdict &v, double seconds)
    {
        std::printf("criterion %d: %s %s (%.1f s)\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!v.pass)
            ++failures;
    }

    void run(int id, const std::function<Verdict()> &check)
    {
        const auto t0 = Clock::now();
        const Verdict v = check();
        report(id, v, std::chrono::duration<double>(Clock::now() - t0).count());
    }

    std::string fmt(const char *f, double a)
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, f, a);
        return buf;
    }

    CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng, double scale = 1.0)
    {
        CMatrix x(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                x(r, c) = cdouble(standard_normal(rng), standard_normal(rng)) * scale;
        return x;
    }

    std::size_t draw_size(Rng &rng, std::size_t lo, std::size_t hi)
    {
        return lo + static_cast<std::size_t>(uniform(rng) * static_cast<double>(hi - lo + 1));
    }

    struct Stats
    {
        double mean = 0.0;
        double se = 0.0;
    };

    Stats stats(const std::vector<double> &x)
    {
        Stats s;
        const double n = static_cast<double>(x.size());
        s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double sq = 0.0;
        for (double v : x)
            sq += (v - s.mean) * (v - s.mean);
        s.se = x.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
        return s;
    }

    // Records of one (algorithm, series value, sweep value) cell, in trial order.
    std::vector<double> column(const std::vector<MetricsRecord> &recs, const std::string &algo, double series,
                               double sweep, double MetricsRecord::*field)
    {
        std::vector<double> out;
        for (const auto &r : recs)
            if (r.algorithm == algo && r.series_value == series && r.sweep_value == sweep)
                out.push_back(r.*field);
        return out;
    }

    std::vector<double> difference(const std::vector<double> &a, const std::vector<double> &b)
    {
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            d[i] = a[i] - b[i];
        return d;
    }

    std::vector<MetricsRecord> all_records;

    std::vector<MetricsRecord> sweep(ExperimentSpec spec, const std::vector<Algorithm> &algos)
    {
        std::vector<MetricsRecord> out;
        for (Algorithm a : algos)
        {
            spec.algorithm = a;
            auto recs = run_sweep(spec).records;
            out.insert(out.end(), recs.begin(), recs.end());
        }
        all_records.insert(all_records.end(), out.begin(), out.end());
        return out;
    }

    std::string csv(const std::vector<MetricsRecord> &recs)
    {
        std::ostringstream os;
        write_records_csv(os, recs);
        return os.str();
    }

    // ---------- identity suites ----------

    Verdict rate_identity()
    {
        Rng rng(101);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            const std::size_t m = draw_size(rng, 1, 6);
            const std::size_t n_tx = draw_size(rng, m, 32);
            const std::size_t n_rx = draw_size(rng, 1, 16);
            const CMatrix f = gaussian(static_cast<Eigen::Index>(n_tx), static_cast<Eigen::Index>(m), rng,
                                       1.0 / std::sqrt(static_cast<double>(n_tx * m)));
            const double s2 = std::pow(10.0, uniform(rng, -2.0, 1.0));
            for (std::size_t i = 0; i < m; ++i)
            {
                const CMatrix h = gaussian(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx), rng);
                const CVector w = optimal_combiner(h, f, i, s2);
                const double r = rate_from_sinr(sinr(h, f, i, w, s2));
                const double e = mse(h, f, w, i, s2);
                worst = std::max(worst, std::abs(r + std::log2(e)));
            }
        }
        return {worst <= 1e-9, "max |R + log2 e| = " + fmt("%.3g", worst)};
    }

    // Conjugate gradients on (H F F^H H^H + sigma^2 I) w = H f_m, independent of the
    // Cholesky path inside the library.
    CVector cg_solve(const CMatrix &a, const CVector &b)
    {
        CVector x = CVector::Zero(b.size()), r = b, p = r;
        double rs = r.squaredNorm();
        for (Eigen::Index it = 0; it < 10 * b.size() && rs > 1e-30; ++it)
        {
            const CVector ap = a * p;
            const cdouble step = rs / p.dot(ap);
            x += step * p;
            r -= step * ap;
            const double next = r.squaredNorm();
            p = r + (next / rs) * p;
            rs = next;
        }
        return x;
    }

    Verdict combiner_optimality()
    {
        Rng rng(202);
        double worst_gap = 0.0, worst_drop = 0.0;
        for (int trial = 0; trial < 100; ++trial)
        {
            const std::size_t m = draw_size(rng, 1, 6);
            const std::size_t n_tx = draw_size(rng, m, 32);
            const std::size_t n_rx = draw_size(rng, 1, 16);
            const CMatrix h = gaussian(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx), rng);
            const CMatrix f = gaussian(static_cast<Eigen::Index>(n_tx), static_cast<Eigen::Index>(m), rng,
                                       1.0 / std::sqrt(static_cast<double>(n_tx * m)));
            const double s2 = 0.1;
            const std::size_t i = draw_size(rng, 0, m - 1);
            const CMatrix hf = h * f;
            const CMatrix r = hf * hf.adjoint() + s2 * CMatrix::Identity(hf.rows(), hf.rows());
            const CVector w_ref = cg_solve(r, hf.col(static_cast<Eigen::Index>(i)));
            const CVector w = optimal_combiner(h, f, i, s2);
            const double e = mse(h, f, w, i, s2);
            worst_gap = std::max(worst_gap, std::abs(e - mse(h, f, w_ref, i, s2)));
            for (int k = 0; k < 100; ++k)
            {
                CVector d = gaussian(w.size(), 1, rng).col(0);
                d *= 1e-3 / d.norm();
                worst_drop = std::max(worst_drop, e - mse(h, f, w + d, i, s2));
            }
        }
        const bool pass = worst_gap <= 1e-8 && worst_drop <= 1e-9;
        return {pass, "max |e - e_ref| = " + fmt("%.3g", worst_gap) + ", max perturbation gain = " + fmt("%.3g", worst_drop)};
    }

    Verdict beamformer_stationarity()
    {
        Rng rng(303);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial)
        {
            const std::size_t m = draw_size(rng, 1, 6);
            const std::size_t n_tx = draw_size(rng, m, 16);
            const std::size_t n_rx = draw_size(rng, 1, 8);
            std::vector<CMatrix> h;
            std::vector<CVector> w;
            std::vector<double> alpha;
            for (std::size_t i = 0; i < m; ++i)
            {
                h.push_back(gaussian(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx), rng));
                w.push_back(gaussian(static_cast<Eigen::Index>(n_rx), 1, rng, 0.3).col(0));
                alpha.push_back(uniform(rng, 0.5, 5.0));
            }
            const double lambda = uniform(rng, 0.0, 2.0), s2 = 0.1;
            CMatrix f(static_cast<Eigen::Index>(n_tx), static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i)
                f.col(static_cast<Eigen::Index>(i)) = update_tx_beamformer(h, w, alpha, lambda, i);

            auto lagrangian = [&](const CMatrix &x)
            {
                double l = lambda * power(x);
                for (std::size_t i = 0; i < m; ++i)
                    l += alpha[i] * mse(h[i], x, w[i], i, s2);
                return l;
            };
            const double step = 1e-6;
            double g2 = 0.0;
            for (Eigen::Index c = 0; c < f.cols(); ++c)
                for (Eigen::Index r = 0; r < f.rows(); ++r)
                    for (cdouble dir : {cdouble(1, 0), cdouble(0, 1)})
                    {
                        CMatrix up = f, dn = f;
                        up(r, c) += step * dir;
                        dn(r, c) -= step * dir;
                        const double g = (lagrangian(up) - lagrangian(dn)) / (2.0 * step);
                        g2 += g * g;
                    }
            worst = std::max(worst, std::sqrt(g2));
        }
        return {worst <= 1e-4, "max finite-difference gradient norm = " + fmt("%.3g", worst)};
    }

    Verdict convergence()
    {
        ExperimentSpec spec;
        spec.trials = 100;
        spec.solver.epsilon = 1e-3;
        spec.solver.max_iterations = 50;

        auto fraction = [&](StopRule rule)
        {
            ExperimentSpec s = spec;
            s.solver.stop_rule = rule;
            const auto recs = run_sweep(s).records;
            all_records.insert(all_records.end(), recs.begin(), recs.end());
            std::size_t ok = 0;
            for (const auto &r : recs)
                ok += r.converged && r.iterations <= 50 ? 1 : 0;
            return static_cast<double>(ok) / static_cast<double>(recs.size());
        };
        const double objective = fraction(StopRule::ObjectiveChange);
        const double sum_mse = fraction(StopRule::SumMseChange);
        return {objective >= 0.95, "objective-change rule converged within 50 iterations in " + fmt("%.0f%%", 100.0 * objective) +
                                       " of seeds (sum-MSE rule: " + fmt("%.0f%%", 100.0 * sum_mse) + ")"};
    }

    struct PlantedOutcome
    {
        std::size_t exact = 0;
        double worst_err = 0.0;
    };

    PlantedOutcome planted_recovery(const Codebook &cb, std::size_t n_rf, std::size_t n_streams, Rng &rng)
    {
        PlantedOutcome out;
        for (int trial = 0; trial < 100; ++trial)
        {
            std::vector<std::size_t> idx(cb.d_size());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(n_rf);
            CMatrix d(static_cast<Eigen::Index>(cb.n_elements()), static_cast<Eigen::Index>(n_rf));
            for (std::size_t k = 0; k < n_rf; ++k)
                d.col(static_cast<Eigen::Index>(k)) = cb.atoms().col(static_cast<Eigen::Index>(idx[k]));
            const CMatrix f_star = d * gaussian(static_cast<Eigen::Index>(n_rf), static_cast<Eigen::Index>(n_streams), rng);
            const OmpResult r = omp_stage(f_star, cb, n_rf, power(f_star));
            std::vector<std::size_t> got = r.selected;
            std::sort(got.begin(), got.end());
            std::sort(idx.begin(), idx.end());
            out.exact += got == idx ? 1 : 0;
            out.worst_err = std::max(out.worst_err, (r.f_recovered - f_star).norm() / f_star.norm());
        }
        return out;
    }

    Verdict omp_recovery()
    {
        const ScenarioConfig sc;
        const Codebook cb = build_codebook(sc.num_tx_antennas, 2 * sc.num_tx_antennas, sc.wavelength_m());
        const Codebook square = build_codebook(sc.num_tx_antennas, sc.num_tx_antennas, sc.wavelength_m());
        const std::size_t n_rf = sc.num_rf_chains;
        Rng rng(606);
        const PlantedOutcome oversampled = planted_recovery(cb, n_rf, sc.num_mrs, rng);
        const PlantedOutcome orthonormal = planted_recovery(square, n_rf, sc.num_mrs, rng);

        std::size_t steps = 0, increases = 0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            const CMatrix f_star = gaussian(static_cast<Eigen::Index>(cb.n_elements()), static_cast<Eigen::Index>(sc.num_mrs), rng);
            const OmpResult r = omp_stage(f_star, cb, n_rf, 1.0);
            for (std::size_t t = 1; t < r.residual_history.size(); ++t)
            {
                ++steps;
                increases += r.residual_history[t] > r.residual_history[t - 1] ? 1 : 0;
            }
        }
        const bool pass = oversampled.exact == 100 && oversampled.worst_err <= 1e-6 && increases == 0;
        return {pass, "default codebook: " + std::to_string(oversampled.exact) + "/100 planted supports recovered, max relative error " +
                          fmt("%.3g", oversampled.worst_err) + "; D = N_tx codebook: " + std::to_string(orthonormal.exact) +
                          "/100, max relative error " + fmt("%.3g", orthonormal.worst_err) + "; residual increases " +
                          std::to_string(increases) + "/" + std::to_string(steps)};
    }

    // ---------- trend suites ----------

    Verdict ordering()
    {
        ExperimentSpec spec;
        spec.trials = 200;
        const auto recs = sweep(spec, {Algorithm::HbfProposed, Algorithm::HbfOmp, Algorithm::AbfCodebook,
                                       Algorithm::AbfAoaAod, Algorithm::HbfBenchmark});
        auto rates = [&](const char *a) { return column(recs, a, 0.0, 0.0, &MetricsRecord::sum_rate); };
        const auto prop = rates("hbf_proposed"), omp = rates("hbf_omp"), cbk = rates("abf_codebook"),
                   aoa = rates("abf_aoa_aod"), bench = rates("hbf_benchmark");

        bool pass = true;
        std::string detail;
        auto gap = [&](const char *name, const std::vector<double> &a, const std::vector<double> &b)
        {
            const Stats s = stats(difference(a, b));
            const bool ok = s.mean - 2.0 * s.se > 0.0;
            pass = pass && ok;
            detail += std::string(detail.empty() ? "" : ", ") + name + " " + fmt("%+.2f", s.mean) + fmt("+-%.2f", 2.0 * s.se);
        };
        gap("prop-omp", prop, omp);
        gap("omp-codebook", omp, cbk);
        gap("prop-bench", prop, bench);
        gap("omp-bench", omp, bench);
        gap("codebook-bench", cbk, bench);
        gap("aoa-bench", aoa, bench);
        return {pass, detail};
    }

    Verdict multiplexing()
    {
        ExperimentSpec spec;
        spec.trials = 200;
        spec.sweep = {"num_mrs", {1, 2, 4, 6, 8}};
        const auto recs = sweep(spec, {Algorithm::HbfProposed});
        bool pass = true;
        std::string detail;
        Stats prev;
        for (std::size_t i = 0; i < spec.sweep.values.size(); ++i)
        {
            const Stats s = stats(column(recs, "hbf_proposed", 0.0, spec.sweep.values[i], &MetricsRecord::sum_rate));
            if (i > 0 && s.mean - prev.mean < -2.0 * std::hypot(s.se, prev.se))
                pass = false;
            detail += std::string(i ? ", " : "M=") + fmt("%.0f:", spec.sweep.values[i]) + fmt("%.2f", s.mean);
            prev = s;
        }
        return {pass, detail};
    }

    ExperimentSpec blockage_spec(std::size_t trials)
    {
        ExperimentSpec spec;
        spec.trials = trials;
        return spec;
    }

    Verdict anti_blockage_gain()
    {
        ExperimentSpec spec = blockage_spec(500);
        spec.block_probability = 0.7;
        const auto recs = sweep(spec, {Algorithm::AntiBlockage, Algorithm::HbfProposed});
        const auto anti = column(recs, "anti_blockage", 0.0, 0.0, &MetricsRecord::effective_rate_ratio);
        const auto prior = column(recs, "hbf_proposed", 0.0, 0.0, &MetricsRecord::effective_rate_ratio);
        const double gain = stats(anti).mean - stats(prior).mean;
        return {gain >= 0.10, "ratio " + fmt("%.3f", stats(anti).mean) + " vs " + fmt("%.3f", stats(prior).mean) +
                                  ", gain " + fmt("%.1f", 100.0 * gain) + " points"};
    }

    Verdict blockage_monotonicity()
    {
        ExperimentSpec spec = blockage_spec(500);
        spec.sweep = {"block_probability", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}};
        spec.series = {"tx_power_dbm", {20.0, 30.0}};
        const auto recs = sweep(spec, {Algorithm::AntiBlockage, Algorithm::HbfProposed});

        bool pass = true;
        std::size_t violations = 0;
        auto monotone = [&](const char *algo, double series, double MetricsRecord::*field, double sign)
        {
            Stats prev;
            for (std::size_t i = 0; i < spec.sweep.values.size(); ++i)
            {
                const Stats s = stats(column(recs, algo, series, spec.sweep.values[i], field));
                if (i > 0 && sign * (s.mean - prev.mean) > 2.0 * std::hypot(s.se, prev.se))
                    ++violations;
                prev = s;
            }
        };
        for (const char *algo : {"anti_blockage", "hbf_proposed"})
            for (double p : spec.series.values)
            {
                monotone(algo, p, &MetricsRecord::effective_rate_ratio, 1.0);
                monotone(algo, p, &MetricsRecord::system_outage, -1.0);
            }

        std::size_t power_violations = 0;
        std::string outage;
        for (double pb : spec.sweep.values)
        {
            const auto lo = column(recs, "anti_blockage", 20.0, pb, &MetricsRecord::system_outage);
            const auto hi = column(recs, "anti_blockage", 30.0, pb, &MetricsRecord::system_outage);
            const Stats d = stats(difference(hi, lo));
            if (d.mean > 2.0 * d.se)
                ++power_violations;
            outage += std::string(outage.empty() ? "" : " ") + fmt("%.2f/", stats(lo).mean) + fmt("%.2f", stats(hi).mean);
        }
        pass = violations == 0 && power_violations == 0;
        return {pass, "monotonicity violations " + std::to_string(violations) + ", P0 ordering violations " +
                          std::to_string(power_violations) + ", outage 20/30 dBm: " + outage};
    }

    Verdict single_mr_severity()
    {
        ExperimentSpec spec = blockage_spec(500);
        spec.block_probability = 0.7;
        spec.sweep = {"num_mrs", {1.0, 6.0}};
        const auto recs = sweep(spec, {Algorithm::AntiBlockage});
        const Stats one = stats(column(recs, "anti_blockage", 0.0, 1.0, &MetricsRecord::effective_rate_ratio));
        const Stats six = stats(column(recs, "anti_blockage", 0.0, 6.0, &MetricsRecord::effective_rate_ratio));
        return {one.mean < 0.5 * six.mean, "ratio M=1 " + fmt("%.3f", one.mean) + fmt("+-%.3f", one.se) + " vs M=6 " +
                                               fmt("%.3f", six.mean) + fmt("+-%.3f", six.se)};
    }

    Verdict power_conservation()
    {
        std::size_t checked = 0, bad = 0, exempt = 0;
        for (const auto &r : all_records)
        {
            if (r.total_outage)
            {
                ++exempt;
                continue;
            }
            ++checked;
            const double p0 = dbm_to_watt(r.tx_power_dbm);
            bad += std::abs(r.power - p0) <= 1e-6 * p0 ? 0 : 1;
        }
        return {bad == 0 && checked > 0, std::to_string(bad) + " violations in " + std::to_string(checked) +
                                             " trials (" + std::to_string(exempt) + " total-outage trials carry no power)"};
    }

    Verdict determinism()
    {
        ExperimentSpec spec = blockage_spec(20);
        spec.sweep = {"block_probability", {0.1, 0.7}};
        spec.series = {"tx_power_dbm", {20.0, 30.0}};
        std::vector<Algorithm> algos = all_algorithms();
        const std::string a = csv(sweep(spec, algos));
        const std::string b = csv(sweep(spec, algos));
        return {a == b && !a.empty(), std::to_string(a.size()) + " bytes compared"};
    }

} // namespace

int main()
{
    run(1, rate_identity);
    run(2, combiner_optimality);
    run(3, beamformer_stationarity);
    run(4, convergence);
    run(6, omp_recovery);
    run(7, ordering);
    run(8, multiplexing);
    run(9, anti_blockage_gain);
    run(10, blockage_monotonicity);
    run(11, single_mr_severity);
    run(12, determinism);
    run(5, power_conservation);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
