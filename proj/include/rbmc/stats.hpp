// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_STATS_INCLUDED
#define HPP_RBMC_STATS_INCLUDED


#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>


namespace rbmc::stats
{
	[[nodiscard]] double mean(std::span<double const> values);

	/// Bessel-corrected sample variance; NaN for fewer than two values.
	[[nodiscard]] double variance(std::span<double const> values);

	/// sqrt(variance / n).
	[[nodiscard]] double standard_error(std::span<double const> values);

	/// Linear interpolation between order statistics at h = (n - 1) p.
	[[nodiscard]] double quantile(std::span<double const> values, double p);

	/// Same on data that is already sorted ascending.
	[[nodiscard]] double quantile_sorted(std::span<double const> sorted, double p);

	struct chi_square_result
	{
		double statistic = 0;
		std::size_t degrees_of_freedom = 0;
		double p_value = 1;
	};

	/// Pearson test of observed counts against expected counts; the caller pools bins
	/// beforehand. `estimated_parameters` reduces the degrees of freedom.
	[[nodiscard]] chi_square_result chi_square_test(
		std::span<double const> observed,
		std::span<double const> expected,
		std::size_t estimated_parameters = 0);

	/// Pearson test of positive integer samples against Geometric(p) on {1, 2, ...},
	/// pooling the upper tail so that every bin expects at least `minimum_expected`.
	[[nodiscard]] chi_square_result geometric_goodness_of_fit(
		std::span<std::uint64_t const> samples,
		double p,
		double minimum_expected = 5);

	struct ks_result
	{
		double statistic = 0;
		double p_value = 1;
	};

	/// One-sample Kolmogorov-Smirnov test against a continuous CDF, with the asymptotic
	/// Kolmogorov distribution and Stephens' small-sample correction.
	[[nodiscard]] ks_result kolmogorov_smirnov_test(std::span<double const> samples, std::function<double(double)> const& cdf);

	/// P(K > x) for the Kolmogorov distribution.
	[[nodiscard]] double kolmogorov_complementary_cdf(double x);
} // namespace rbmc::stats


#endif // !HPP_RBMC_STATS_INCLUDED
