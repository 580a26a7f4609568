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


#include "hsrbf/metrics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace hsrbf
{
    double sinr(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, const CVector &w_m, double sigma_sq)
    {
        if (m >= static_cast<std::size_t>(f_all.cols()))
            throw std::invalid_argument("sinr: stream index out of range.");
        const double w_energy = w_m.squaredNorm();
        if (w_energy == 0.0)
            return 0.0;
        const Eigen::RowVectorXcd g = (w_m.adjoint() * h_m) * f_all;
        double interference = sigma_sq * w_energy;
        for (Eigen::Index i = 0; i < g.size(); ++i)
            if (i != static_cast<Eigen::Index>(m))
                interference += std::norm(g(i));
        return std::norm(g(static_cast<Eigen::Index>(m))) / interference;
    }

    double sinr(const CMatrix &h_m, const CMatrix &f_rf, const CMatrix &f_bb, std::size_t m,
                const CVector &w_m, double sigma_sq)
    {
        if (f_rf.cols() != f_bb.rows())
            throw std::invalid_argument("sinr: F_RF and F_BB do not conform.");
        return sinr(h_m, f_rf * f_bb, m, w_m, sigma_sq);
    }

    double mmse_sinr(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq)
    {
        if (m >= static_cast<std::size_t>(f_all.cols()))
            throw std::invalid_argument("mmse_sinr: stream index out of range.");
        const CMatrix hf = h_m * f_all;
        const Eigen::Index col = static_cast<Eigen::Index>(m);
        CMatrix r = CMatrix::Identity(hf.rows(), hf.rows()) * sigma_sq;
        for (Eigen::Index i = 0; i < hf.cols(); ++i)
            if (i != col)
                r.noalias() += hf.col(i) * hf.col(i).adjoint();
        const CVector a = hf.col(col);
        return std::max(0.0, a.dot(Eigen::LLT<CMatrix>(r).solve(a)).real());
    }

    std::size_t LinkMetrics::num_zero_combiners() const
    {
        return static_cast<std::size_t>(std::count(zero_combiner.begin(), zero_combiner.end(), true));
    }

    LinkMetrics evaluate_links(std::span<const CMatrix> channels, const HybridBeamformer &bf, double sigma_sq)
    {
        if (channels.size() != bf.combiners.size() || channels.size() != bf.num_streams())
            throw std::invalid_argument("evaluate_links: one channel, combiner and stream per MR is required.");
        LinkMetrics out;
        for (std::size_t m = 0; m < channels.size(); ++m)
        {
            const double g = sinr(channels[m], bf.f_recovered, m, bf.combiners[m], sigma_sq);
            out.sinr.push_back(g);
            out.rate.push_back(rate_from_sinr(g));
            out.zero_combiner.push_back(bf.combiners[m].squaredNorm() == 0.0);
            out.sum_rate += out.rate.back();
        }
        return out;
    }

    double success_indicator_average(std::span<const double> sinrs, double gamma_th_db)
    {
        if (sinrs.empty())
            throw std::invalid_argument("success_indicator_average: no trials.");
        std::size_t hits = 0;
        for (double g : sinrs)
            hits += linear_to_db(g) >= gamma_th_db ? 1 : 0;
        return static_cast<double>(hits) / static_cast<double>(sinrs.size());
    }

    double system_outage(std::span<const double> per_mr_values)
    {
        if (per_mr_values.empty())
            throw std::invalid_argument("system_outage: no values.");
        double s = 0.0;
        for (double v : per_mr_values)
            s += v;
        return s / static_cast<double>(per_mr_values.size());
    }

    double blocked_capacity(std::span<const double> rates, std::span<const double> weights)
    {
        if (rates.size() != weights.size())
            throw std::invalid_argument("blocked_capacity: rates and weights differ in length.");
        double c = 0.0;
        for (std::size_t m = 0; m < rates.size(); ++m)
            c += rates[m] * weights[m];
        return c;
    }

    const std::vector<std::string> &metrics_columns()
    {
        static const std::vector<std::string> columns = {
            "algorithm", "sweep_parameter", "sweep_value", "series_parameter", "series_value",
            "trial", "seed", "position_m", "num_mrs", "tx_power_dbm", "block_probability",
            "blocked_links", "blockage_class", "action", "total_outage", "converged", "iterations",
            "power_w", "free_sum_rate", "sum_rate", "sum_rate_bps", "blocked_capacity",
            "effective_rate_ratio", "system_outage", "success_average", "zero_combiners",
            "sinr_per_mr", "rate_per_mr", "outage_per_mr"};
        return columns;
    }

    std::string format_real(double value)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", value);
        return buf;
    }

    namespace
    {
        std::string join(const std::vector<double> &values)
        {
            std::string s;
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                if (i > 0)
                    s += ';';
                s += format_real(values[i]);
            }
            return s;
        }
    } // namespace

    std::vector<std::string> metrics_row(const MetricsRecord &r)
    {
        return {r.algorithm,
                r.sweep_parameter,
                format_real(r.sweep_value),
                r.series_parameter,
                format_real(r.series_value),
                std::to_string(r.trial),
                std::to_string(r.seed),
                format_real(r.position_m),
                std::to_string(r.num_mrs),
                format_real(r.tx_power_dbm),
                format_real(r.block_probability),
                std::to_string(r.blocked_links),
                r.blockage_class,
                r.action,
                r.total_outage ? "1" : "0",
                r.converged ? "1" : "0",
                std::to_string(r.iterations),
                format_real(r.power),
                format_real(r.free_sum_rate),
                format_real(r.sum_rate),
                format_real(r.sum_rate_bps),
                format_real(r.blocked_capacity),
                format_real(r.effective_rate_ratio),
                format_real(r.system_outage),
                format_real(r.success_average),
                std::to_string(r.zero_combiners),
                join(r.sinr_per_mr),
                join(r.rate_per_mr),
                join(r.outage_per_mr)};
    }

} // namespace hsrbf
