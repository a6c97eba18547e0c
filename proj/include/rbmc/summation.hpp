// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_SUMMATION_INCLUDED
#define HPP_RBMC_SUMMATION_INCLUDED


#include <cmath>
#include <cstddef>
#include <vector>


namespace rbmc
{
	/// Kahan-Babuska-Neumaier compensated sum.
	class compensated_sum
	{
	public:
		constexpr compensated_sum& operator+=(double const value) noexcept
		{
			double const t = m_sum + value;
			if (std::abs(m_sum) >= std::abs(value))
				m_compensation += (m_sum - t) + value;
			else
				m_compensation += (value - t) + m_sum;
			m_sum = t;
			return *this;
		}

		constexpr compensated_sum& operator+=(compensated_sum const& other) noexcept
		{
			*this += other.m_sum;
			m_compensation += other.m_compensation;
			return *this;
		}

		[[nodiscard]] constexpr double value() const noexcept { return m_sum + m_compensation; }

	private:
		double m_sum = 0;
		double m_compensation = 0;
	};

	/// Ratio-of-sums accumulator: sum_i w_i f_k(x_i) per integrand k over sum_i w_i.
	class estimator_accumulator
	{
	public:
		explicit estimator_accumulator(std::size_t const integrand_count)
			: m_weighted_sums(integrand_count)
		{}

		[[nodiscard]] std::size_t integrand_count() const noexcept { return m_weighted_sums.size(); }

		void add_weight(double const weight) noexcept { m_total_weight += weight; }
		void add_weighted(std::size_t const k, double const weighted_value) noexcept { m_weighted_sums[k] += weighted_value; }

		void merge(estimator_accumulator const& other) noexcept
		{
			m_total_weight += other.m_total_weight;
			for (std::size_t k = 0; k < m_weighted_sums.size(); ++k)
				m_weighted_sums[k] += other.m_weighted_sums[k];
		}

		[[nodiscard]] double total_weight() const noexcept { return m_total_weight.value(); }
		[[nodiscard]] double weighted_sum(std::size_t const k) const noexcept { return m_weighted_sums[k].value(); }

		/// weighted_sum(k) / total_weight(); NaN while no weight has been added.
		[[nodiscard]] double estimate(std::size_t const k) const noexcept
		{
			double const total = total_weight();
			if (!(total > 0))
				return std::nan("");
			return weighted_sum(k) / total;
		}

		[[nodiscard]] std::vector<double> estimates() const
		{
			std::vector<double> result(m_weighted_sums.size());
			for (std::size_t k = 0; k < result.size(); ++k)
				result[k] = estimate(k);
			return result;
		}

	private:
		std::vector<compensated_sum> m_weighted_sums;
		compensated_sum m_total_weight;
	};
} // namespace rbmc


#endif // !HPP_RBMC_SUMMATION_INCLUDED
