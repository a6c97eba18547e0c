// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/restore.hpp>

#include <cmath>
#include <limits>

#include <rbmc/catalog.hpp>


namespace rbmc
{
	namespace
	{
		constexpr double infinity = std::numeric_limits<double>::infinity();

		double killing_rate_from_log(restore_config const& config, double const log_target, state const x)
		{
			if (log_target == -infinity)
				return infinity;
			double scale = config.rate.value;
			if (config.rate.variant == rate_variant::with_normalization)
			{
				if (!config.target.exact_normalization)
					throw config_error{ "killing rate with normalization needs the exact normalization of the target", "/rate/variant" };
				scale *= *config.target.exact_normalization;
			}
			return scale * std::exp(config.transfer.log_density(x) - log_target);
		}

		void validate(restore_config const& config)
		{
			if (!(config.holding_rate > 0) || !std::isfinite(config.holding_rate))
				throw config_error{ "holding rate must be positive and finite", "/holding_rate" };
			if (!(config.rate.value > 0) || !std::isfinite(config.rate.value))
				throw config_error{ "rate constant must be positive and finite", "/rate/value" };
			if (config.rate.variant == rate_variant::with_normalization && !config.target.exact_normalization)
				throw config_error{ "killing rate with normalization needs the exact normalization of the target", "/rate/variant" };
			if (!config.transfer.sample || !config.transfer.log_density)
				throw config_error{ "transfer distribution needs a sampler and a log-density", "/transfer" };
			if (config.max_events_per_tour < 1)
				throw config_error{ "max_events_per_tour must be positive", "/max_events_per_tour" };
		}
	} // namespace

	double killing_rate(restore_config const& config, state const x)
	{
		return killing_rate_from_log(config, config.target.log_density(x), x);
	}

	tour_output simulate_tour(
		restore_config const& config,
		std::span<integrand const> const integrands,
		rng_stream& g,
		rng_stream& transfer_g)
	{
		auto const& target = config.target;
		auto const& proposal = config.local_proposal;
		auto const mode = config.mode;
		double const lambda = config.holding_rate;
		std::size_t const integrand_count = integrands.size();

		tour_output out;
		out.weighted_sums.assign(integrand_count, 0);

		state x = config.transfer.sample(transfer_g);
		double log_target = target.log_density(x);
		while (log_target == -infinity)
		{
			if (out.regeneration_retries++ >= config.max_regeneration_retries)
				throw degenerate_error{ "regeneration kept landing where the target density vanishes" };
			x = config.transfer.sample(transfer_g);
			log_target = target.log_density(x);
		}

		std::vector<double> f_x(integrand_count), f_y(integrand_count);
		auto const evaluate = [&](state const point, std::vector<double>& values) {
			for (std::size_t k = 0; k < integrand_count; ++k)
				values[k] = integrands[k](point);
		};
		auto const credit = [&](double const weight, std::vector<double> const& values) {
			out.lifetime += weight;
			for (std::size_t k = 0; k < integrand_count; ++k)
				out.weighted_sums[k] += weight * values[k];
		};
		evaluate(x, f_x);

		double kappa = killing_rate_from_log(config, log_target, x);
		double vanilla_weight = 1, product = 1;

		for (std::uint64_t events = 0;; ++events)
		{
			if (events >= config.max_events_per_tour)
				throw degenerate_error{ "tour exceeded max_events_per_tour holding intervals" };

			double const holding = g.exponential(lambda);
			double const killing = std::isinf(kappa) ? 0. : g.exponential(kappa);

			if (holding < killing)
			{
				out.physical_lifetime += holding;
				if (config.record_events)
					out.events.push_back({ holding, x, jump_terminal::local_transition });
				if (mode == estimator_mode::standard)
					credit(holding, f_x);

				state const y = proposal.sample(x, g);
				double const alpha = acceptance_probability(target, proposal, x, log_target, y);
				++out.local_steps;

				if (mode == estimator_mode::vanilla)
				{
					product *= 1 - alpha;
					vanilla_weight += product;
				}
				if (mode == estimator_mode::waste_recycling)
				{
					evaluate(y, f_y);
					out.lifetime += holding;
					for (std::size_t k = 0; k < integrand_count; ++k)
						out.weighted_sums[k] += holding * ((1 - alpha) * f_x[k] + alpha * f_y[k]);
				}

				if (g.uniform() < alpha)
				{
					++out.local_acceptances;
					if (mode == estimator_mode::vanilla)
					{
						credit(vanilla_weight / (lambda + kappa), f_x);
						vanilla_weight = product = 1;
					}
					x = y;
					log_target = target.log_density(x);
					kappa = killing_rate_from_log(config, log_target, x);
					evaluate(x, f_x);
				}
			}
			else
			{
				out.physical_lifetime += killing;
				if (config.record_events)
					out.events.push_back({ killing, x, jump_terminal::regeneration });
				if (mode == estimator_mode::vanilla)
					credit(vanilla_weight / (lambda + kappa), f_x);
				else
					credit(killing, f_x);
				return out;
			}
		}
	}

	restore_result run_jump_restore(restore_config const& config, std::span<integrand const> const integrands)
	{
		if (integrands.empty())
			throw config_error{ "at least one integrand is required", "/integrands" };
		if (config.tour_budget < 1)
			throw config_error{ "tour budget must be positive", "/budget" };
		for (std::size_t c = 0; c < config.checkpoints.size(); ++c)
		{
			auto const t = config.checkpoints[c];
			if (t < 1 || t > config.tour_budget || (c > 0 && t <= config.checkpoints[c - 1]))
				throw config_error{ "checkpoints must be strictly increasing within [1, tour_budget]", "/checkpoints" };
		}
		validate(config);

		rng_stream g{ config.rng, 0 };
		rng_stream transfer_g{ config.rng, 1 };

		restore_result result;
		result.accumulator = estimator_accumulator{ integrands.size() };
		auto& diagnostics = result.diagnostics;
		std::size_t next_checkpoint = 0;

		for (std::uint64_t tour = 1; tour <= config.tour_budget; ++tour)
		{
			auto output = simulate_tour(config, integrands, g, transfer_g);
			result.accumulator.add_weight(output.lifetime);
			for (std::size_t k = 0; k < integrands.size(); ++k)
				result.accumulator.add_weighted(k, output.weighted_sums[k]);

			diagnostics.total_lifetime += output.physical_lifetime;
			++diagnostics.tour_count;
			diagnostics.local_steps += output.local_steps;
			diagnostics.local_acceptances += output.local_acceptances;
			diagnostics.regeneration_retries += output.regeneration_retries;
			if (config.record_events)
				diagnostics.events.insert(diagnostics.events.end(), output.events.begin(), output.events.end());

			if (next_checkpoint < config.checkpoints.size() && config.checkpoints[next_checkpoint] == tour)
			{
				result.checkpoint_estimates.push_back(result.accumulator.estimates());
				++next_checkpoint;
			}
		}

		if (!(result.accumulator.total_weight() > 0))
			throw degenerate_error{ "estimator accumulated no weight" };
		result.estimates = result.accumulator.estimates();
		return result;
	}

	double estimate_normalization(double const rate_constant, double const total_lifetime, std::uint64_t const tour_count)
	{
		return rate_constant * total_lifetime / static_cast<double>(tour_count);
	}

	mh_result mixture_mh_baseline(
		mh_run_config config,
		independent_distribution const& transfer,
		double const large_step_probability,
		std::span<integrand const> const integrands)
	{
		if (!(large_step_probability >= 0 && large_step_probability <= 1))
			throw config_error{ "large step probability must lie in [0, 1]", "/large_step_probability" };
		config.proposal = catalog::mixture(std::move(config.proposal), transfer, large_step_probability);
		return run_mh_estimator(config, integrands);
	}
} // namespace rbmc
