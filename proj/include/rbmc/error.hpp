// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_ERROR_INCLUDED
#define HPP_RBMC_ERROR_INCLUDED


#include <stdexcept>
#include <string>
#include <utility>


namespace rbmc
{
	class error
		: public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	/// Invalid configuration. `field` is a JSON-pointer-like path to the offending entry, if known.
	class config_error
		: public error
	{
	public:
		explicit config_error(std::string const& message, std::string field = {})
			: error(field.empty() ? message : field + ": " + message),
			  m_field(std::move(field))
		{}

		[[nodiscard]] std::string const& field() const noexcept { return m_field; }

	private:
		std::string m_field;
	};

	/// A target/proposal pair that cannot make progress (no acceptance, no termination, ...).
	class degenerate_error
		: public error
	{
	public:
		using error::error;
	};
} // namespace rbmc


#endif // !HPP_RBMC_ERROR_INCLUDED
