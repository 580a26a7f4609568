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

#include "hsrbf/mmse.hpp"
#include "hsrbf/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace hsrbf
{
    namespace
    {
        struct CombinerSolution
        {
            CVector w;
            double e = 1.0;
        };

        // hf = H_m F. Uses the interference-plus-noise covariance R so that
        // e = 1 / (1 + a^H R^-1 a) is formed without cancellation.
        CombinerSolution solve_combiner(const CMatrix &hf, std::size_t m, double sigma_sq)
        {
            const Eigen::Index n_rx = hf.rows();
            const Eigen::Index col = static_cast<Eigen::Index>(m);
            CombinerSolution out;
            const CVector a = hf.col(col);
            if (a.squaredNorm() == 0.0)
            {
                out.w = CVector::Zero(n_rx);
                out.e = 1.0;
                return out;
            }

            CMatrix r = CMatrix::Identity(n_rx, n_rx) * sigma_sq;
            for (Eigen::Index i = 0; i < hf.cols(); ++i)
                if (i != col)
                    r.selfadjointView<Eigen::Lower>().rankUpdate(hf.col(i));
            r = r.selfadjointView<Eigen::Lower>();

            Eigen::LLT<CMatrix> llt(r);
            const CVector y = llt.solve(a);
            const double s = std::max(0.0, a.dot(y).real()); // a^H R^-1 a
            out.w = y / (1.0 + s);
            out.e = 1.0 / (1.0 + s);
            return out;
        }

        void check_stream_index(const CMatrix &f_all, std::size_t m)
        {
            if (m >= static_cast<std::size_t>(f_all.cols()))
                throw std::invalid_argument("stream index out of range.");
        }

        // Factored transmit update: with G = [sqrt(alpha_i) H_i^H w_i] = U S V^H,
        // (G G^H + lambda I)^+ B = U (S^2 + lambda)^-1 U^H B because B lies in range(G).
        class TxUpdate
        {
        public:
            TxUpdate(std::span<const CMatrix> channels, std::span<const CVector> combiners, std::span<const double> alpha)
            {
                const Eigen::Index n_tx = channels.front().cols();
                const Eigen::Index m = static_cast<Eigen::Index>(channels.size());
                CMatrix g(n_tx, m), b(n_tx, m);
                for (Eigen::Index i = 0; i < m; ++i)
                {
                    const CVector hw = channels[i].adjoint() * combiners[i];
                    g.col(i) = std::sqrt(alpha[i]) * hw;
                    b.col(i) = alpha[i] * hw;
                }
                Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeThinU);
                u_ = svd.matrixU();
                eig_ = svd.singularValues().array().square().matrix();
                proj_ = u_.adjoint() * b;
                row_energy_ = proj_.rowwise().squaredNorm();
                const double top = eig_.size() > 0 ? eig_.maxCoeff() : 0.0;
                cutoff_ = kPinvTolerance * top;
            }

            double power(double lambda) const
            {
                double p = 0.0;
                for (Eigen::Index j = 0; j < eig_.size(); ++j)
                {
                    const double d = eig_(j) + lambda;
                    if (lambda == 0.0 && eig_(j) <= cutoff_)
                        continue;
                    if (d > 0.0)
                        p += row_energy_(j) / (d * d);
                }
                return p;
            }

            CMatrix beamformer(double lambda) const
            {
                RVector inv(eig_.size());
                for (Eigen::Index j = 0; j < eig_.size(); ++j)
                {
                    const double d = eig_(j) + lambda;
                    inv(j) = (d > 0.0 && !(lambda == 0.0 && eig_(j) <= cutoff_)) ? 1.0 / d : 0.0;
                }
                return u_ * inv.asDiagonal() * proj_;
            }

            double total_energy() const { return row_energy_.sum(); }

        private:
            CMatrix u_, proj_;
            RVector eig_, row_energy_;
            double cutoff_ = 0.0;
        };

        // Smallest lambda >= 0 with Tr(F^H F) <= P_0.
        double bisect_multiplier(const TxUpdate &tx, double p0)
        {
            if (tx.power(0.0) <= p0)
                return 0.0;
            double lo = 0.0;
            double hi = std::sqrt(tx.total_energy() / p0);
            while (tx.power(hi) > p0)
                hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if (tx.power(mid) > p0)
                    lo = mid;
                else
                    hi = mid;
            }
            return hi;
        }

    } // namespace

    CVector optimal_combiner(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq)
    {
        check_stream_index(f_all, m);
        return solve_combiner(h_m * f_all, m, sigma_sq).w;
    }

    CVector scalar_normalized_combiner(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq)
    {
        check_stream_index(f_all, m);
        const CMatrix hf = h_m * f_all;
        return hf.col(static_cast<Eigen::Index>(m)) / (hf.squaredNorm() + sigma_sq);
    }

    double mse(const CMatrix &h_m, const CMatrix &f_all, const CVector &w_m, std::size_t m, double sigma_sq)
    {
        check_stream_index(f_all, m);
        const CMatrix hf = h_m * f_all;
        const Eigen::RowVectorXcd g = w_m.adjoint() * hf; // w^H H f_i for every i
        double e = std::norm(cdouble(1.0, 0.0) - g(static_cast<Eigen::Index>(m))) + sigma_sq * w_m.squaredNorm();
        for (Eigen::Index i = 0; i < g.size(); ++i)
            if (i != static_cast<Eigen::Index>(m))
                e += std::norm(g(i));
        return e;
    }

    double optimal_mse(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq)
    {
        check_stream_index(f_all, m);
        return solve_combiner(h_m * f_all, m, sigma_sq).e;
    }

    CVector update_tx_beamformer(std::span<const CMatrix> channels, std::span<const CVector> combiners,
                                 std::span<const double> alpha, double lambda, std::size_t m)
    {
        if (channels.empty() || channels.size() != combiners.size() || channels.size() != alpha.size())
            throw std::invalid_argument("update_tx_beamformer: inconsistent input sizes.");
        if (m >= channels.size())
            throw std::invalid_argument("update_tx_beamformer: stream index out of range.");

        const Eigen::Index n_tx = channels.front().cols();
        CMatrix a = CMatrix::Identity(n_tx, n_tx) * lambda;
        for (std::size_t i = 0; i < channels.size(); ++i)
        {
            const CVector hw = channels[i].adjoint() * combiners[i];
            a.noalias() += alpha[i] * (hw * hw.adjoint());
        }
        const CVector rhs = channels[m].adjoint() * combiners[m] * alpha[m];
        return pinv(a) * rhs;
    }

    double update_multiplier(double lambda, const CMatrix &f_all, double p0, double xi)
    {
        return std::max(0.0, lambda - xi * (power(f_all) - p0));
    }

    double sum_rate_objective(std::span<const double> mse_values)
    {
        double obj = 0.0;
        for (double e : mse_values)
            obj -= std::log2(e);
        return obj;
    }

    CMatrix initial_beamformer(std::span<const CMatrix> channels, double p0, std::uint64_t seed)
    {
        Rng rng(seed);
        const Eigen::Index n_tx = channels.front().cols();
        CMatrix f(n_tx, static_cast<Eigen::Index>(channels.size()));
        for (std::size_t m = 0; m < channels.size(); ++m)
        {
            CVector u(channels[m].rows());
            for (Eigen::Index i = 0; i < u.size(); ++i)
                u(i) = cdouble(standard_normal(rng), standard_normal(rng));
            u.normalize();
            f.col(static_cast<Eigen::Index>(m)) = channels[m].adjoint() * u;
        }
        const double p = power(f);
        if (p > 0.0)
            f *= std::sqrt(p0 / p);
        return f;
    }

    MmseResult mmse_stage(std::span<const CMatrix> channels, double p0, double sigma_sq, const MmseSolverConfig &config)
    {
        if (channels.empty())
            throw std::invalid_argument("mmse_stage: at least one channel is required.");
        if (!(p0 > 0.0) || !(sigma_sq > 0.0))
            throw std::invalid_argument("mmse_stage: power budget and noise power must be strictly positive.");
        for (const auto &h : channels)
            if (h.rows() != channels.front().rows() || h.cols() != channels.front().cols())
                throw std::invalid_argument("mmse_stage: all channels must share one shape.");

        const std::size_t m_count = channels.size();
        const double xi = config.step_size > 0.0 ? config.step_size : 0.1 / p0;

        MmseResult res;
        res.f = initial_beamformer(channels, p0, config.init_seed);
        res.combiners.resize(m_count);
        res.mse.assign(m_count, 1.0);
        res.alpha.assign(m_count, 1.0);

        auto refresh_combiners = [&]()
        {
            for (std::size_t m = 0; m < m_count; ++m)
            {
                auto sol = solve_combiner(channels[m] * res.f, m, sigma_sq);
                res.combiners[m] = std::move(sol.w);
                res.mse[m] = sol.e;
            }
        };
        auto sum_mse = [&]()
        {
            double s = 0.0;
            for (double e : res.mse)
                s += e;
            return s;
        };

        refresh_combiners();
        double prev_sum = sum_mse();
        double prev_obj = sum_rate_objective(res.mse);
        res.history.push_back({0, prev_sum, prev_obj, power(res.f), 0.0});

        if (power(res.f) == 0.0)
        {
            // No channel carries energy: nothing to optimize.
            res.converged = true;
            return res;
        }

        for (std::size_t t = 1; t <= config.max_iterations; ++t)
        {
            for (std::size_t m = 0; m < m_count; ++m)
                res.alpha[m] = 1.0 / res.mse[m];

            const TxUpdate tx(channels, res.combiners, res.alpha);
            if (config.multiplier_rule == MultiplierRule::Bisection)
            {
                res.lambda = bisect_multiplier(tx, p0);
                res.f = tx.beamformer(res.lambda);
            }
            else
            {
                res.lambda = update_multiplier(res.lambda, res.f, p0, xi);
                res.f = tx.beamformer(res.lambda);
                const double p = power(res.f);
                if (p > p0)
                    res.f *= std::sqrt(p0 / p);
            }

            refresh_combiners();
            const double cur_sum = sum_mse();
            const double cur_obj = sum_rate_objective(res.mse);
            res.iterations = t;
            res.history.push_back({t, cur_sum, cur_obj, power(res.f), res.lambda});

            const double change = config.stop_rule == StopRule::SumMseChange ? std::abs(cur_sum - prev_sum)
                                                                              : std::abs(cur_obj - prev_obj);
            prev_sum = cur_sum;
            prev_obj = cur_obj;
            if (change < config.epsilon)
            {
                res.converged = true;
                break;
            }
        }
        return res;
    }

} // namespace hsrbf
