// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/mh.hpp>

#include <cmath>
#include <string>


namespace rbmc
{
	std::string_view to_string(estimator_mode const mode) noexcept
	{
		switch (mode)
		{
		case estimator_mode::standard:
			return "standard";
		case estimator_mode::waste_recycling:
			return "waste_recycling";
		case estimator_mode::vanilla:
			return "vanilla";
		}
		return "unknown";
	}

	estimator_mode parse_estimator_mode(std::string_view const text)
	{
		for (auto const mode : all_estimator_modes)
			if (to_string(mode) == text)
				return mode;
		throw config_error{ "unknown estimator mode '" + std::string{ text } + "'" };
	}

	namespace
	{
		struct chain_position
		{
			state x;
			double log_target;
		};

		struct step_outcome
		{
			state proposal;
			double alpha;
			bool accepted;
		};

		step_outcome propose_and_decide(chain_position const& current, target_model const& target, proposal_kernel const& proposal, rng_stream& g)
		{
			state const y = proposal.sample(current.x, g);
			double const alpha = acceptance_probability(target, proposal, current.x, current.log_target, y);
			double const u = g.uniform();
			return { y, alpha, u < alpha };
		}

		chain_position initial_position(mh_run_config const& config, rng_stream& g)
		{
			auto const& target = config.target;
			state x = config.initial.point;
			if (config.initial.policy == initial_state_policy::kind::from_exact_sampler)
			{
				if (!target.exact_sampler)
					throw config_error{ "initial state policy 'from_exact_sampler' needs a target with an exact sampler", "/initial" };
				x = target.exact_sampler(g);
			}
			else if (!target.reference.contains(x))
				throw config_error{ "fixed initial point is not a state of the target space", "/initial/point" };

			chain_position position{ x, target.log_density(x) };
			std::uint64_t rejections = 0;
			for (std::uint64_t i = 0; i < config.initial.burn_in; ++i)
			{
				auto const outcome = propose_and_decide(position, target, config.proposal, g);
				if (outcome.accepted)
				{
					position = { outcome.proposal, target.log_density(outcome.proposal) };
					rejections = 0;
				}
				else if (++rejections >= config.max_tour_length)
					throw degenerate_error{ "no acceptance within max_tour_length proposals during burn-in" };
			}
			return position;
		}

		void evaluate(std::span<integrand const> const integrands, state const x, std::vector<double>& values)
		{
			for (std::size_t k = 0; k < integrands.size(); ++k)
				values[k] = integrands[k](x);
		}
	} // namespace

	mh_step_result mh_step(state const x, target_model const& target, proposal_kernel const& proposal, rng_stream& g)
	{
		auto const outcome = propose_and_decide({ x, target.log_density(x) }, target, proposal, g);
		return { outcome.accepted ? outcome.proposal : x, outcome.proposal, outcome.alpha, outcome.accepted };
	}

	std::vector<tour_record> decompose_tours(state const initial, std::span<mh_step_result const> const trace)
	{
		std::vector<tour_record> tours;
		tour_record current{ initial, 0, 1, 0, false };
		double product = 1;
		for (std::size_t k = 0; k < trace.size(); ++k)
		{
			auto const& step = trace[k];
			++current.observed_waiting;
			product *= 1 - step.alpha;
			current.vanilla_weight += product;
			if (step.accepted)
			{
				current.complete = true;
				tours.push_back(current);
				current = { step.next, 0, 1, static_cast<std::uint64_t>(k + 1), false };
				product = 1;
			}
		}
		if (current.observed_waiting > 0)
			tours.push_back(current);
		return tours;
	}

	double vanilla_weight_from_tour(
		state const accepted_state,
		std::span<state const> const proposals,
		target_model const& target,
		proposal_kernel const& proposal)
	{
		double const log_target = target.log_density(accepted_state);
		compensated_sum weight;
		weight += 1;
		double product = 1;
		for (state const y : proposals)
		{
			product *= 1 - acceptance_probability(target, proposal, accepted_state, log_target, y);
			weight += product;
		}
		return weight.value();
	}

	mh_result run_mh_estimator(mh_run_config const& config, std::span<integrand const> const integrands)
	{
		if (integrands.empty())
			throw config_error{ "at least one integrand is required", "/integrands" };
		if (config.sample_budget < 1)
			throw config_error{ "sample budget must be positive", "/budget" };
		if (config.mode == estimator_mode::waste_recycling && config.sample_budget < 2)
			throw config_error{ "waste-recycling needs a sample budget of at least 2 (one proposal)", "/budget" };
		if (config.max_tour_length < 1)
			throw config_error{ "max_tour_length must be positive", "/max_tour_length" };
		for (std::size_t c = 0; c < config.checkpoints.size(); ++c)
		{
			auto const t = config.checkpoints[c];
			if (t < 1 || t > config.sample_budget || (c > 0 && t <= config.checkpoints[c - 1]))
				throw config_error{ "checkpoints must be strictly increasing within [1, sample_budget]", "/checkpoints" };
		}

		auto const& target = config.target;
		auto const& proposal = config.proposal;
		auto const mode = config.mode;
		auto const n = config.sample_budget;
		std::size_t const integrand_count = integrands.size();

		rng_stream g{ config.rng };
		mh_result result;
		result.accumulator = estimator_accumulator{ integrand_count };
		result.checkpoint_estimates.reserve(config.checkpoints.size());
		auto& accumulator = result.accumulator;
		auto& diagnostics = result.diagnostics;

		chain_position position = initial_position(config, g);
		diagnostics.initial_state = position.x;

		std::vector<double> f_current(integrand_count), f_proposal(integrand_count);
		evaluate(integrands, position.x, f_current);

		double vanilla_weight = 1, product = 1;
		std::uint64_t tour_start = 0;
		std::size_t next_checkpoint = 0;

		for (std::uint64_t k = 1;; ++k)
		{
			if (mode == estimator_mode::standard)
			{
				accumulator.add_weight(1);
				for (std::size_t i = 0; i < integrand_count; ++i)
					accumulator.add_weighted(i, f_current[i]);
			}

			if (next_checkpoint < config.checkpoints.size() && config.checkpoints[next_checkpoint] == k)
			{
				auto& row = result.checkpoint_estimates.emplace_back(integrand_count);
				for (std::size_t i = 0; i < integrand_count; ++i)
				{
					if (mode == estimator_mode::vanilla)
						row[i] = (accumulator.weighted_sum(i) + vanilla_weight * f_current[i]) / (accumulator.total_weight() + vanilla_weight);
					else if (mode == estimator_mode::waste_recycling && k == 1)
						row[i] = f_current[i];
					else
						row[i] = accumulator.estimate(i);
				}
				++next_checkpoint;
			}

			if (mode != estimator_mode::vanilla && k >= n)
				break;

			auto const outcome = propose_and_decide(position, target, proposal, g);
			++diagnostics.proposals;

			product *= 1 - outcome.alpha;
			vanilla_weight += product;

			if (mode == estimator_mode::waste_recycling)
			{
				evaluate(integrands, outcome.proposal, f_proposal);
				accumulator.add_weight(1);
				for (std::size_t i = 0; i < integrand_count; ++i)
					accumulator.add_weighted(i, (1 - outcome.alpha) * f_current[i] + outcome.alpha * f_proposal[i]);
			}

			if (config.record_trace)
				diagnostics.trace.push_back({ outcome.accepted ? outcome.proposal : position.x, outcome.proposal, outcome.alpha, outcome.accepted });

			if (outcome.accepted)
			{
				++diagnostics.acceptances;
				if (config.record_tours)
					diagnostics.tours.push_back({ position.x, k - tour_start, vanilla_weight, tour_start, true });

				if (mode == estimator_mode::vanilla)
				{
					accumulator.add_weight(vanilla_weight);
					for (std::size_t i = 0; i < integrand_count; ++i)
						accumulator.add_weighted(i, vanilla_weight * f_current[i]);
					if (k >= n)
						break;
				}

				vanilla_weight = product = 1;
				tour_start = k;
				position = { outcome.proposal, target.log_density(outcome.proposal) };
				evaluate(integrands, position.x, f_current);
			}
			else if (k - tour_start >= config.max_tour_length)
				throw degenerate_error{ "no acceptance within max_tour_length proposals" };
		}

		if (config.record_tours && diagnostics.proposals > tour_start && mode != estimator_mode::vanilla)
			diagnostics.tours.push_back({ position.x, diagnostics.proposals - tour_start, vanilla_weight, tour_start, false });

		diagnostics.samples = diagnostics.proposals + 1;
		if (!(accumulator.total_weight() > 0))
			throw degenerate_error{ "estimator accumulated no weight" };
		result.estimates = accumulator.estimates();
		// The vanilla loop can close its last tour before reaching the final checkpoint.
		while (result.checkpoint_estimates.size() < config.checkpoints.size())
			result.checkpoint_estimates.push_back(result.estimates);
		return result;
	}
} // namespace rbmc
