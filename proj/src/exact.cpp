// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/exact.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>


namespace rbmc::exact
{
	namespace
	{
		std::size_t require_discrete(target_model const& target)
		{
			if (!target.reference.is_discrete())
				throw config_error{ "exhaustive oracle requires a discrete reference measure" };
			return target.reference.state_count();
		}

		std::vector<double> acceptance_row(target_model const& target, proposal_kernel const& proposal, state const x)
		{
			std::size_t const n = target.reference.state_count();
			double const log_target_x = target.log_density(x);
			std::vector<double> row(n);
			for (std::size_t j = 0; j < n; ++j)
				row[j] = acceptance_probability(target, proposal, x, log_target_x, static_cast<state>(j));
			return row;
		}
	} // namespace

	double expected_acceptance(target_model const& target, proposal_kernel const& proposal, state const x)
	{
		std::size_t const n = require_discrete(target);
		auto const alpha = acceptance_row(target, proposal, x);
		double sum = 0;
		for (std::size_t j = 0; j < n; ++j)
			sum += std::exp(proposal.log_density(x, static_cast<state>(j))) * alpha[j];
		return sum;
	}

	double rejection_second_moment(target_model const& target, proposal_kernel const& proposal, state const x)
	{
		std::size_t const n = require_discrete(target);
		auto const alpha = acceptance_row(target, proposal, x);
		double sum = 0;
		for (std::size_t j = 0; j < n; ++j)
		{
			double const rejection = 1 - alpha[j];
			sum += std::exp(proposal.log_density(x, static_cast<state>(j))) * rejection * rejection;
		}
		if (sum >= 1 - 1e-15)
			throw degenerate_error{ "second moment of the rejection probability is 1: no proposal is ever accepted" };
		return sum;
	}

	std::vector<double> normalized_target(target_model const& target)
	{
		std::size_t const n = require_discrete(target);
		std::vector<double> mu(n);
		double total = 0;
		for (std::size_t i = 0; i < n; ++i)
			total += mu[i] = std::exp(target.log_density(static_cast<state>(i)));
		for (double& value : mu)
			value /= total;
		return mu;
	}

	matrix proposal_matrix(target_model const& target, proposal_kernel const& proposal)
	{
		std::size_t const n = require_discrete(target);
		matrix q(n, std::vector<double>(n));
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j < n; ++j)
				q[i][j] = std::exp(proposal.log_density(static_cast<state>(i), static_cast<state>(j)));
		return q;
	}

	matrix transition_matrix(target_model const& target, proposal_kernel const& proposal)
	{
		std::size_t const n = require_discrete(target);
		auto const q = proposal_matrix(target, proposal);
		matrix p(n, std::vector<double>(n));
		for (std::size_t i = 0; i < n; ++i)
		{
			auto const alpha = acceptance_row(target, proposal, static_cast<state>(i));
			double rejection = 0;
			for (std::size_t j = 0; j < n; ++j)
			{
				p[i][j] = q[i][j] * alpha[j];
				rejection += q[i][j] * (1 - alpha[j]);
			}
			p[i][i] += rejection;
		}
		return p;
	}

	matrix augmented_transition_matrix(target_model const& target, proposal_kernel const& proposal)
	{
		std::size_t const n = require_discrete(target);
		auto const q = proposal_matrix(target, proposal);
		matrix k(n * n, std::vector<double>(n * n));
		for (std::size_t x = 0; x < n; ++x)
		{
			auto const alpha = acceptance_row(target, proposal, static_cast<state>(x));
			for (std::size_t y = 0; y < n; ++y)
			{
				auto& row = k[x * n + y];
				for (std::size_t next_y = 0; next_y < n; ++next_y)
				{
					row[x * n + next_y] += (1 - alpha[y]) * q[x][next_y];
					row[y * n + next_y] += alpha[y] * q[y][next_y];
				}
			}
		}
		return k;
	}

	std::vector<double> augmented_invariant(target_model const& target, proposal_kernel const& proposal)
	{
		auto const mu = normalized_target(target);
		auto const q = proposal_matrix(target, proposal);
		std::size_t const n = mu.size();
		std::vector<double> result(n * n);
		for (std::size_t x = 0; x < n; ++x)
			for (std::size_t y = 0; y < n; ++y)
				result[x * n + y] = mu[x] * q[x][y];
		return result;
	}

	std::vector<double> left_multiply(std::vector<double> const& row, matrix const& m)
	{
		std::vector<double> result(m.empty() ? 0 : m.front().size());
		for (std::size_t i = 0; i < m.size(); ++i)
			for (std::size_t j = 0; j < result.size(); ++j)
				result[j] += row[i] * m[i][j];
		return result;
	}

	double expected_acceptance_quadrature(target_model const& target, proposal_kernel const& proposal, state const x)
	{
		if (target.reference.is_discrete())
			return expected_acceptance(target, proposal, x);
		if (!proposal.quantile)
			throw config_error{ "expected acceptance quadrature needs a proposal with a quantile function" };

		double const log_target_x = target.log_density(x);
		if (log_target_x == -std::numeric_limits<double>::infinity())
			return 1;

		auto const integrand = [&](double const u) {
			return acceptance_probability(target, proposal, x, log_target_x, proposal.quantile(x, u));
		};
		double const value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0., 1., 15, 1e-9);
		return std::clamp(value, 0., 1.);
	}

	struct expected_acceptance_curve::impl
	{
		target_model target;
		proposal_kernel proposal;
		double lower = 0;
		double upper = 0;
		boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
	};

	expected_acceptance_curve::expected_acceptance_curve(
		target_model target,
		proposal_kernel proposal,
		double const lower,
		double const upper,
		std::size_t const nodes)
	{
		auto data = std::make_shared<impl>();
		data->target = std::move(target);
		data->proposal = std::move(proposal);
		if (!data->target.reference.is_discrete())
		{
			if (!(upper > lower) || nodes < 4)
				throw config_error{ "expected acceptance curve needs a nonempty range and at least four nodes" };
			data->lower = lower;
			data->upper = upper;
			double const step = (upper - lower) / static_cast<double>(nodes - 1);
			std::vector<double> values(nodes);
			for (std::size_t i = 0; i < nodes; ++i)
				values[i] = expected_acceptance_quadrature(data->target, data->proposal, lower + step * static_cast<double>(i));
			data->spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(values.data(), values.size(), lower, step);
		}
		m_impl = std::move(data);
	}

	double expected_acceptance_curve::operator()(state const x) const
	{
		impl const& data = *m_impl;
		if (data.target.reference.is_discrete())
			return expected_acceptance(data.target, data.proposal, x);
		if (x >= data.lower && x <= data.upper)
			return std::clamp(data.spline(x), 0., 1.);
		return expected_acceptance_quadrature(data.target, data.proposal, x);
	}
} // namespace rbmc::exact
