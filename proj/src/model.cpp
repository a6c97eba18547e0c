// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/model.hpp>

#include <cmath>
#include <limits>


namespace rbmc
{
	bool reference_measure::contains(state const x) const noexcept
	{
		if (!is_discrete())
			return std::isfinite(x);
		return x >= 0 && x < static_cast<double>(m_state_count) && x == std::floor(x);
	}

	double acceptance_probability(
		double const log_target_x,
		double const log_target_y,
		double const log_proposal_xy,
		double const log_proposal_yx) noexcept
	{
		double const log_denominator = log_target_x + log_proposal_xy;
		if (log_denominator == -std::numeric_limits<double>::infinity())
			return 1;

		double const log_ratio = (log_target_y + log_proposal_yx) - log_denominator;
		if (!(log_ratio < 0))
			return 1;
		return std::exp(log_ratio);
	}

	double acceptance_probability(
		target_model const& target,
		proposal_kernel const& proposal,
		state const x,
		state const y)
	{
		return acceptance_probability(target, proposal, x, target.log_density(x), y);
	}

	double acceptance_probability(
		target_model const& target,
		proposal_kernel const& proposal,
		state const x,
		double const log_target_x,
		state const y)
	{
		if (log_target_x == -std::numeric_limits<double>::infinity())
			return 1;

		double const log_proposal_xy = proposal.log_density(x, y);
		if (log_proposal_xy == -std::numeric_limits<double>::infinity())
			return 1;

		return acceptance_probability(log_target_x, target.log_density(y), log_proposal_xy, proposal.log_density(y, x));
	}
} // namespace rbmc
