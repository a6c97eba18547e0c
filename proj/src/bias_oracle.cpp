// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/bias_oracle.hpp>

#include <cmath>

#include <rbmc/exact.hpp>


namespace rbmc::bias
{
	double completion_tail(
		state const z,
		target_model const& target,
		proposal_kernel const& proposal,
		rng_stream& g,
		std::uint64_t const cap)
	{
		double const log_target = target.log_density(z);
		compensated_sum tail;
		double product = 1;
		for (std::uint64_t t = 0; t < cap; ++t)
		{
			state const y = proposal.sample(z, g);
			product *= 1 - acceptance_probability(target, proposal, z, log_target, y);
			tail += product;
			if (product < tail_threshold)
				return tail.value();
		}
		throw degenerate_error{ "completion tail did not vanish within the term cap" };
	}

	double completed_weight(tour_record const& tour, double const tail, double const trailing_product) noexcept
	{
		return tour.vanilla_weight + trailing_product * tail;
	}

	double predicted_bias(double const expected_acceptance, double const rejection_second_moment) noexcept
	{
		return (1 - expected_acceptance) / (1 - rejection_second_moment);
	}

	conditioned_tour simulate_conditioned_tour(
		state const z,
		target_model const& target,
		proposal_kernel const& proposal,
		rng_stream& g,
		std::uint64_t const max_tour_length)
	{
		double const log_target = target.log_density(z);
		conditioned_tour result;
		result.tour = { z, 0, 1, 0, false };
		double product = 1;
		while (result.tour.observed_waiting < max_tour_length)
		{
			state const y = proposal.sample(z, g);
			double const alpha = acceptance_probability(target, proposal, z, log_target, y);
			++result.tour.observed_waiting;
			result.trailing_product = product;
			product *= 1 - alpha;
			result.tour.vanilla_weight += product;
			if (g.uniform() < alpha)
			{
				result.tour.complete = true;
				result.full_product = product;
				return result;
			}
		}
		throw degenerate_error{ "no acceptance within max_tour_length proposals" };
	}

	std::vector<bias_report> verify_bias_theorem(
		target_model const& target,
		proposal_kernel const& proposal,
		std::uint64_t const tours,
		rng_stream_spec const rng)
	{
		if (!target.reference.is_discrete())
			throw config_error{ "bias verification needs a discrete target", "/target" };
		if (tours < 2)
			throw config_error{ "bias verification needs at least two tours per state", "/tours" };

		std::vector<bias_report> reports;
		std::size_t const n = target.reference.state_count();
		for (std::size_t i = 0; i < n; ++i)
		{
			auto const z = static_cast<state>(i);
			if (target.log_density(z) == -std::numeric_limits<double>::infinity())
				continue;

			bias_report report;
			report.z = z;
			report.expected_acceptance = exact::expected_acceptance(target, proposal, z);
			report.rejection_second_moment = exact::rejection_second_moment(target, proposal, z);
			report.predicted_bias = predicted_bias(report.expected_acceptance, report.rejection_second_moment);
			report.tour_count = tours;

			rng_stream_spec const spec{ rng.master_seed, rng.stream_index + i };
			rng_stream tour_g{ spec, 0 };
			rng_stream tail_g{ spec, 1 };

			std::vector<double> bias(tours), completed(tours), full(tours), douc_robert(tours), vanilla(tours);
			std::vector<std::uint64_t> waiting(tours);
			for (std::uint64_t k = 0; k < tours; ++k)
			{
				auto const run = simulate_conditioned_tour(z, target, proposal, tour_g);
				double const tail = completion_tail(z, target, proposal, tail_g);
				bias[k] = run.trailing_product * tail;
				completed[k] = completed_weight(run.tour, tail, run.trailing_product);
				full[k] = run.tour.vanilla_weight + run.full_product * tail;
				douc_robert[k] = 1 + tail;
				vanilla[k] = run.tour.vanilla_weight;
				waiting[k] = run.tour.observed_waiting;
			}

			report.empirical_bias = stats::mean(bias);
			report.standard_error = stats::standard_error(bias);
			report.completed_weight_mean = stats::mean(completed);
			report.completed_weight_se = stats::standard_error(completed);
			report.full_completion_mean = stats::mean(full);
			report.full_completion_se = stats::standard_error(full);
			report.douc_robert_mean = stats::mean(douc_robert);
			report.douc_robert_se = stats::standard_error(douc_robert);
			report.vanilla_weight_mean = stats::mean(vanilla);
			report.vanilla_weight_se = stats::standard_error(vanilla);
			if (report.expected_acceptance < 1)
				report.waiting_time_fit = stats::geometric_goodness_of_fit(waiting, report.expected_acceptance);
			reports.push_back(report);
		}
		return reports;
	}
} // namespace rbmc::bias
