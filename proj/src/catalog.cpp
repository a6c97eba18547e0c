// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/catalog.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/erf.hpp>


namespace rbmc::catalog
{
	namespace
	{
		constexpr double negative_infinity = -std::numeric_limits<double>::infinity();
		double const log_sqrt_two_pi = .5 * std::log(2 * std::numbers::pi);

		void require_positive(double const value, char const* what)
		{
			if (!(value > 0) || !std::isfinite(value))
				throw config_error{ std::string{ what } + " must be positive and finite" };
		}

		double log_normal_density(double const x, double const mean, double const standard_deviation)
		{
			double const z = (x - mean) / standard_deviation;
			return -.5 * z * z - std::log(standard_deviation) - log_sqrt_two_pi;
		}

		std::string format_parameter(double const value)
		{
			char buffer[32];
			std::snprintf(buffer, sizeof buffer, "%g", value);
			return buffer;
		}

		/// Cumulative table with inverse-CDF sampling over {0, ..., n - 1}.
		class cumulative_table
		{
		public:
			explicit cumulative_table(std::span<double const> const probabilities)
				: m_cumulative(probabilities.size())
			{
				std::partial_sum(probabilities.begin(), probabilities.end(), m_cumulative.begin());
				auto const last_positive = std::find_if(probabilities.rbegin(), probabilities.rend(), [](double p) { return p > 0; });
				m_last = static_cast<std::size_t>(probabilities.rend() - last_positive) - 1;
			}

			[[nodiscard]] state draw(double const u) const noexcept
			{
				double const scaled = u * m_cumulative.back();
				auto const it = std::upper_bound(m_cumulative.begin(), m_cumulative.end(), scaled);
				auto const index = std::min(static_cast<std::size_t>(it - m_cumulative.begin()), m_last);
				return static_cast<state>(index);
			}

		private:
			std::vector<double> m_cumulative;
			std::size_t m_last;
		};

		std::vector<double> checked_probabilities(std::span<double const> const values, bool const require_unit_sum)
		{
			if (values.size() < 2)
				throw config_error{ "a discrete distribution needs at least two states" };
			double total = 0;
			for (double const value : values)
			{
				if (!(value >= 0) || !std::isfinite(value))
					throw config_error{ "discrete weights must be nonnegative and finite" };
				total += value;
			}
			if (!(total > 0))
				throw config_error{ "discrete weights must not all be zero" };
			if (require_unit_sum && std::abs(total - 1) > 1e-12)
				throw config_error{ "discrete probabilities must sum to 1" };
			return { values.begin(), values.end() };
		}

		std::size_t index_of(state const x, std::size_t const count)
		{
			if (!(x >= 0) || x >= static_cast<double>(count) || x != std::floor(x))
				throw config_error{ "state " + format_parameter(x) + " is not a point of the discrete space" };
			return static_cast<std::size_t>(x);
		}

		double log_or_negative_infinity(double const value)
		{
			return value > 0 ? std::log(value) : negative_infinity;
		}
	} // namespace

	double standard_normal_quantile(double const u)
	{
		return -std::numbers::sqrt2 * boost::math::erfc_inv(2 * u);
	}

	target_model normal_target(double const mean, double const standard_deviation)
	{
		require_positive(standard_deviation, "normal standard deviation");

		target_model target;
		target.name = "N(" + format_parameter(mean) + "," + format_parameter(standard_deviation * standard_deviation) + ")";
		target.log_density = [=](state const x) { return log_normal_density(x, mean, standard_deviation); };
		target.log_gradient = [=](state const x) { return -(x - mean) / (standard_deviation * standard_deviation); };
		target.exact_normalization = 1;
		target.exact_sampler = [=](rng_stream& g) { return g.normal(mean, standard_deviation); };
		return target;
	}

	target_model standard_normal_target()
	{
		return normal_target(0, 1);
	}

	target_model scaled_normal_target(double const scale)
	{
		require_positive(scale, "target scale");

		target_model target = standard_normal_target();
		double const log_scale = std::log(scale);
		target.name = format_parameter(scale) + "*N(0,1)";
		target.log_density = [=](state const x) { return log_scale + log_normal_density(x, 0, 1); };
		target.exact_normalization = scale;
		return target;
	}

	target_model exponential_target(double const rate)
	{
		require_positive(rate, "exponential rate");

		target_model target;
		double const log_rate = std::log(rate);
		target.name = "Exp(" + format_parameter(rate) + ")";
		target.log_density = [=](state const x) { return x >= 0 ? log_rate - rate * x : negative_infinity; };
		target.log_gradient = [=](state) { return -rate; };
		target.exact_normalization = 1;
		target.exact_sampler = [=](rng_stream& g) { return g.exponential(rate); };
		return target;
	}

	target_model cauchy_target(double const scale)
	{
		require_positive(scale, "Cauchy scale");

		target_model target;
		double const log_scale_pi = std::log(scale * std::numbers::pi);
		target.name = "C(0," + format_parameter(scale) + ")";
		target.log_density = [=](state const x) { return -log_scale_pi - std::log1p((x / scale) * (x / scale)); };
		target.log_gradient = [=](state const x) { return -2 * x / (scale * scale + x * x); };
		target.exact_normalization = 1;
		target.exact_sampler = [=](rng_stream& g) { return g.cauchy(scale); };
		return target;
	}

	target_model discrete_target(std::span<double const> const weights)
	{
		auto values = checked_probabilities(weights, false);
		double const total = std::accumulate(values.begin(), values.end(), 0.);
		auto const table = std::make_shared<cumulative_table const>(values);
		auto const log_weights = [&] {
			std::vector<double> result(values.size());
			std::transform(values.begin(), values.end(), result.begin(), log_or_negative_infinity);
			return std::make_shared<std::vector<double> const>(std::move(result));
		}();

		target_model target;
		target.name = "discrete(" + std::to_string(values.size()) + ")";
		target.reference = reference_measure::discrete_finite(values.size());
		target.log_density = [log_weights](state const x) { return (*log_weights)[index_of(x, log_weights->size())]; };
		target.exact_normalization = total;
		target.exact_sampler = [table](rng_stream& g) { return table->draw(g.uniform()); };
		return target;
	}

	independent_distribution normal_distribution(double const mean, double const standard_deviation)
	{
		require_positive(standard_deviation, "normal standard deviation");

		independent_distribution distribution;
		distribution.name = "N(" + format_parameter(mean) + "," + format_parameter(standard_deviation * standard_deviation) + ")";
		distribution.sample = [=](rng_stream& g) { return g.normal(mean, standard_deviation); };
		distribution.log_density = [=](state const y) { return log_normal_density(y, mean, standard_deviation); };
		distribution.quantile = [=](double const u) { return mean + standard_deviation * standard_normal_quantile(u); };
		return distribution;
	}

	independent_distribution cauchy_distribution(double const scale)
	{
		require_positive(scale, "Cauchy scale");

		independent_distribution distribution;
		double const log_scale_pi = std::log(scale * std::numbers::pi);
		distribution.name = "C(0," + format_parameter(scale) + ")";
		distribution.sample = [=](rng_stream& g) { return g.cauchy(scale); };
		distribution.log_density = [=](state const y) { return -log_scale_pi - std::log1p((y / scale) * (y / scale)); };
		distribution.quantile = [=](double const u) { return scale * std::tan(std::numbers::pi * (u - .5)); };
		return distribution;
	}

	independent_distribution exponential_distribution(double const rate)
	{
		require_positive(rate, "exponential rate");

		independent_distribution distribution;
		double const log_rate = std::log(rate);
		distribution.name = "Exp(" + format_parameter(rate) + ")";
		distribution.sample = [=](rng_stream& g) { return g.exponential(rate); };
		distribution.log_density = [=](state const y) { return y >= 0 ? log_rate - rate * y : negative_infinity; };
		distribution.quantile = [=](double const u) { return -std::log1p(-u) / rate; };
		return distribution;
	}

	independent_distribution discrete_distribution(std::span<double const> const probabilities)
	{
		auto values = checked_probabilities(probabilities, true);
		auto const table = std::make_shared<cumulative_table const>(values);
		std::vector<double> log_values(values.size());
		std::transform(values.begin(), values.end(), log_values.begin(), log_or_negative_infinity);
		auto const log_probabilities = std::make_shared<std::vector<double> const>(std::move(log_values));

		independent_distribution distribution;
		distribution.name = "discrete(" + std::to_string(values.size()) + ")";
		distribution.sample = [table](rng_stream& g) { return table->draw(g.uniform()); };
		distribution.log_density = [log_probabilities](state const y) { return (*log_probabilities)[index_of(y, log_probabilities->size())]; };
		return distribution;
	}

	proposal_kernel gaussian_random_walk(double const standard_deviation)
	{
		require_positive(standard_deviation, "random-walk standard deviation");

		proposal_kernel proposal;
		proposal.name = "N(x," + format_parameter(standard_deviation * standard_deviation) + ")";
		proposal.sample = [=](state const x, rng_stream& g) { return g.normal(x, standard_deviation); };
		proposal.log_density = [=](state const x, state const y) { return log_normal_density(y, x, standard_deviation); };
		proposal.symmetric = true;
		proposal.quantile = [=](state const x, double const u) { return x + standard_deviation * standard_normal_quantile(u); };
		return proposal;
	}

	proposal_kernel independence_proposal(independent_distribution distribution)
	{
		auto const shared = std::make_shared<independent_distribution const>(std::move(distribution));

		proposal_kernel proposal;
		proposal.name = shared->name;
		proposal.sample = [shared](state, rng_stream& g) { return shared->sample(g); };
		proposal.log_density = [shared](state, state const y) { return shared->log_density(y); };
		if (shared->quantile)
			proposal.quantile = [shared](state, double const u) { return shared->quantile(u); };
		return proposal;
	}

	proposal_kernel independent_gaussian(double const standard_deviation)
	{
		return independence_proposal(normal_distribution(0, standard_deviation));
	}

	proposal_kernel independent_cauchy(double const scale)
	{
		return independence_proposal(cauchy_distribution(scale));
	}

	proposal_kernel independent_exponential(double const rate)
	{
		return independence_proposal(exponential_distribution(rate));
	}

	proposal_kernel discrete_matrix(std::vector<std::vector<double>> rows)
	{
		std::size_t const n = rows.size();
		if (n < 2)
			throw config_error{ "a discrete proposal matrix needs at least two rows" };

		std::vector<cumulative_table> tables;
		std::vector<std::vector<double>> log_rows;
		tables.reserve(n);
		log_rows.reserve(n);
		bool symmetric = true;
		for (std::size_t i = 0; i < n; ++i)
		{
			if (rows[i].size() != n)
				throw config_error{ "a discrete proposal matrix must be square" };
			tables.emplace_back(checked_probabilities(rows[i], true));
			auto& log_row = log_rows.emplace_back(n);
			std::transform(rows[i].begin(), rows[i].end(), log_row.begin(), log_or_negative_infinity);
			for (std::size_t j = 0; j < i; ++j)
				symmetric = symmetric && rows[i][j] == rows[j][i];
		}

		auto const shared_tables = std::make_shared<std::vector<cumulative_table> const>(std::move(tables));
		auto const shared_logs = std::make_shared<std::vector<std::vector<double>> const>(std::move(log_rows));

		proposal_kernel proposal;
		proposal.name = "matrix(" + std::to_string(n) + ")";
		proposal.sample = [shared_tables](state const x, rng_stream& g) {
			return (*shared_tables)[index_of(x, shared_tables->size())].draw(g.uniform());
		};
		proposal.log_density = [shared_logs](state const x, state const y) {
			return (*shared_logs)[index_of(x, shared_logs->size())][index_of(y, shared_logs->size())];
		};
		proposal.symmetric = symmetric;
		return proposal;
	}

	proposal_kernel discrete_uniform(std::size_t const state_count)
	{
		if (state_count < 2)
			throw config_error{ "a discrete proposal needs at least two states" };
		std::vector<std::vector<double>> rows(state_count, std::vector<double>(state_count, 1. / static_cast<double>(state_count)));
		// 1/n rounded n times may miss 1 by a few ulps; fold the residue into the diagonal.
		for (std::size_t i = 0; i < state_count; ++i)
			rows[i][i] += 1 - std::accumulate(rows[i].begin(), rows[i].end(), 0.);
		auto proposal = discrete_matrix(std::move(rows));
		proposal.name = "uniform(" + std::to_string(state_count) + ")";
		return proposal;
	}

	proposal_kernel langevin(target_model const& target, double const step)
	{
		require_positive(step, "Langevin step");
		if (!target.log_gradient)
			throw config_error{ "Langevin proposal requires a target with a log-gradient" };
		if (target.reference.is_discrete())
			throw config_error{ "Langevin proposal requires a continuous target" };

		auto const gradient = target.log_gradient;
		double const drift_scale = step * step / 2;
		auto const mean = [=](state const x) { return x + drift_scale * gradient(x); };

		proposal_kernel proposal;
		proposal.name = "Langevin(" + format_parameter(step) + ")";
		proposal.sample = [=](state const x, rng_stream& g) { return g.normal(mean(x), step); };
		proposal.log_density = [=](state const x, state const y) { return log_normal_density(y, mean(x), step); };
		proposal.quantile = [=](state const x, double const u) { return mean(x) + step * standard_normal_quantile(u); };
		return proposal;
	}

	proposal_kernel mixture(proposal_kernel local, independent_distribution global, double const large_step_probability)
	{
		if (!(large_step_probability >= 0 && large_step_probability <= 1))
			throw config_error{ "large step probability must lie in [0, 1]" };

		double const delta = large_step_probability;
		if (delta == 0)
		{
			local.name = "mix(" + local.name + "," + global.name + ",0)";
			return local;
		}
		if (delta == 1)
		{
			auto proposal = independence_proposal(std::move(global));
			proposal.name = "mix(" + local.name + "," + proposal.name + ",1)";
			return proposal;
		}

		double const log_local_weight = std::log1p(-delta);
		double const log_global_weight = std::log(delta);
		std::string const name = "mix(" + local.name + "," + global.name + "," + format_parameter(delta) + ")";
		auto const shared_local = std::make_shared<proposal_kernel const>(std::move(local));
		auto const shared_global = std::make_shared<independent_distribution const>(std::move(global));

		proposal_kernel proposal;
		proposal.name = name;
		// Component selection consumes one uniform before the component draw.
		proposal.sample = [=](state const x, rng_stream& g) {
			if (g.uniform() < delta)
				return shared_global->sample(g);
			return shared_local->sample(x, g);
		};
		proposal.log_density = [=](state const x, state const y) {
			double const a = log_local_weight + shared_local->log_density(x, y);
			double const b = log_global_weight + shared_global->log_density(y);
			double const high = std::max(a, b);
			if (high == negative_infinity)
				return negative_infinity;
			return high + std::log1p(std::exp(std::min(a, b) - high));
		};
		return proposal;
	}

	proposal_kernel point_mass_self()
	{
		proposal_kernel proposal;
		proposal.name = "self";
		proposal.sample = [](state const x, rng_stream&) { return x; };
		proposal.log_density = [](state const x, state const y) { return x == y ? 0. : negative_infinity; };
		proposal.symmetric = true;
		return proposal;
	}
} // namespace rbmc::catalog
