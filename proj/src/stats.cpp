// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/stats.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include <rbmc/error.hpp>
#include <rbmc/summation.hpp>


namespace rbmc::stats
{
	double mean(std::span<double const> const values)
	{
		if (values.empty())
			return std::numeric_limits<double>::quiet_NaN();
		compensated_sum sum;
		for (double const value : values)
			sum += value;
		return sum.value() / static_cast<double>(values.size());
	}

	double variance(std::span<double const> const values)
	{
		if (values.size() < 2)
			return std::numeric_limits<double>::quiet_NaN();
		double const m = mean(values);
		compensated_sum sum;
		for (double const value : values)
			sum += (value - m) * (value - m);
		return sum.value() / static_cast<double>(values.size() - 1);
	}

	double standard_error(std::span<double const> const values)
	{
		return std::sqrt(variance(values) / static_cast<double>(values.size()));
	}

	double quantile_sorted(std::span<double const> const sorted, double const p)
	{
		if (sorted.empty())
			return std::numeric_limits<double>::quiet_NaN();
		double const h = (static_cast<double>(sorted.size()) - 1) * std::clamp(p, 0., 1.);
		auto const lower = static_cast<std::size_t>(std::floor(h));
		if (lower + 1 >= sorted.size())
			return sorted.back();
		return sorted[lower] + (h - static_cast<double>(lower)) * (sorted[lower + 1] - sorted[lower]);
	}

	double quantile(std::span<double const> const values, double const p)
	{
		std::vector<double> sorted(values.begin(), values.end());
		std::sort(sorted.begin(), sorted.end());
		return quantile_sorted(sorted, p);
	}

	chi_square_result chi_square_test(
		std::span<double const> const observed,
		std::span<double const> const expected,
		std::size_t const estimated_parameters)
	{
		if (observed.size() != expected.size())
			throw error{ "chi-square test: observed and expected bin counts differ in length" };
		if (observed.size() < 2 + estimated_parameters)
			throw error{ "chi-square test: too few bins" };

		chi_square_result result;
		for (std::size_t i = 0; i < observed.size(); ++i)
		{
			if (!(expected[i] > 0))
				throw error{ "chi-square test: expected counts must be positive" };
			double const diff = observed[i] - expected[i];
			result.statistic += diff * diff / expected[i];
		}
		result.degrees_of_freedom = observed.size() - 1 - estimated_parameters;
		boost::math::chi_squared const distribution{ static_cast<double>(result.degrees_of_freedom) };
		result.p_value = boost::math::cdf(boost::math::complement(distribution, result.statistic));
		return result;
	}

	chi_square_result geometric_goodness_of_fit(
		std::span<std::uint64_t const> const samples,
		double const p,
		double const minimum_expected)
	{
		if (!(p > 0 && p <= 1))
			throw error{ "geometric goodness of fit: success probability must lie in (0, 1]" };
		double const n = static_cast<double>(samples.size());

		// Bins {1}, {2}, ..., {K - 1} and the pooled tail {K, K + 1, ...}.
		std::vector<double> expected;
		double mass = 1, point = p;
		while (n * point >= minimum_expected && n * (mass - point) >= minimum_expected)
		{
			expected.push_back(n * point);
			mass -= point;
			point *= 1 - p;
		}
		expected.push_back(n * mass);
		if (expected.size() < 2)
			throw error{ "geometric goodness of fit: not enough samples for two bins" };

		std::vector<double> observed(expected.size());
		for (auto const k : samples)
		{
			if (k < 1)
				throw error{ "geometric goodness of fit: samples must be positive" };
			observed[std::min<std::size_t>(k - 1, expected.size() - 1)] += 1;
		}
		return chi_square_test(observed, expected);
	}

	double kolmogorov_complementary_cdf(double const x)
	{
		if (!(x > 0))
			return 1;
		if (x < 0.2)
			return 1;
		double sum = 0;
		for (int k = 1; k <= 100; ++k)
		{
			double const term = std::exp(-2. * k * k * x * x);
			sum += (k % 2 == 1 ? term : -term);
			if (term < 1e-16)
				break;
		}
		return std::clamp(2 * sum, 0., 1.);
	}

	ks_result kolmogorov_smirnov_test(std::span<double const> const samples, std::function<double(double)> const& cdf)
	{
		if (samples.empty())
			throw error{ "Kolmogorov-Smirnov test: no samples" };
		std::vector<double> sorted(samples.begin(), samples.end());
		std::sort(sorted.begin(), sorted.end());
		double const n = static_cast<double>(sorted.size());

		ks_result result;
		for (std::size_t i = 0; i < sorted.size(); ++i)
		{
			double const f = cdf(sorted[i]);
			result.statistic = std::max({ result.statistic, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n });
		}
		double const root = std::sqrt(n);
		result.p_value = kolmogorov_complementary_cdf((root + 0.12 + 0.11 / root) * result.statistic);
		return result;
	}
} // namespace rbmc::stats
