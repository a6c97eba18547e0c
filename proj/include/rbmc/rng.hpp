// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_RNG_INCLUDED
#define HPP_RBMC_RNG_INCLUDED


#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>


namespace rbmc
{
	/// Identifies one reproducible random stream: the pair (master_seed, stream_index)
	/// always yields the same draw sequence, regardless of which thread consumes it.
	struct rng_stream_spec
	{
		std::uint64_t master_seed = 0;
		std::uint64_t stream_index = 0;

		friend bool operator==(rng_stream_spec const&, rng_stream_spec const&) = default;
	};

	[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
	{
		std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
		return z ^ (z >> 31);
	}

	[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t value) noexcept
	{
		return splitmix64(value);
	}

	/// xoshiro256** seeded through splitmix64 from h(master_seed, stream_index, substream).
	///
	/// Models UniformRandomBitGenerator. The distribution helpers below are implemented
	/// here rather than taken from <random> so that draw sequences are identical across
	/// standard library implementations.
	class rng_stream
	{
	public:
		using result_type = std::uint64_t;

		explicit rng_stream(rng_stream_spec const spec, std::uint64_t const substream = 0) noexcept
		{
			std::uint64_t seed = mix64(spec.master_seed) ^ mix64(spec.stream_index + 0x632be59bd9b4e019ull);
			seed = mix64(seed) ^ mix64(substream ^ 0xd1b54a32d192ed03ull);
			for (auto& word : m_state)
				word = splitmix64(seed);
		}

		static constexpr result_type min() noexcept { return 0; }
		static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

		result_type operator()() noexcept
		{
			result_type const result = rotl(m_state[1] * 5, 7) * 9;
			result_type const t = m_state[1] << 17;

			m_state[2] ^= m_state[0];
			m_state[3] ^= m_state[1];
			m_state[1] ^= m_state[2];
			m_state[0] ^= m_state[3];
			m_state[2] ^= t;
			m_state[3] = rotl(m_state[3], 45);

			return result;
		}

		/// Uniform on [0, 1).
		double uniform() noexcept
		{
			return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
		}

		/// Uniform on (0, 1]; safe to feed to log.
		double uniform_positive() noexcept
		{
			return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
		}

		/// Exponential with the given rate by inversion. A rate of +inf yields 0.
		double exponential(double const rate) noexcept
		{
			return -std::log(uniform_positive()) / rate;
		}

		/// Standard normal via Box-Muller; consumes two uniforms per draw.
		double normal() noexcept
		{
			double const radius = std::sqrt(-2 * std::log(uniform_positive()));
			return radius * std::cos(2 * std::numbers::pi * uniform());
		}

		double normal(double const mean, double const standard_deviation) noexcept
		{
			return mean + standard_deviation * normal();
		}

		/// Cauchy with location 0 and the given scale by inversion.
		double cauchy(double const scale) noexcept
		{
			return scale * std::tan(std::numbers::pi * (uniform_positive() - .5));
		}

		friend bool operator==(rng_stream const&, rng_stream const&) = default;

	private:
		static constexpr result_type rotl(result_type const x, int const k) noexcept
		{
			return (x << k) | (x >> (64 - k));
		}

		std::array<result_type, 4> m_state{};
	}; // class rng_stream
} // namespace rbmc


#endif // !HPP_RBMC_RNG_INCLUDED
