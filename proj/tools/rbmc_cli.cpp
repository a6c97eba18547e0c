// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rbmc/error.hpp>
#include <rbmc/experiments.hpp>
#include <rbmc/spec_io.hpp>


namespace
{
	namespace fs = std::filesystem;
	namespace ex = rbmc::experiments;

	enum exit_code : int
	{
		exit_ok = 0,
		exit_spec_error = 2,
		exit_degenerate = 3,
		exit_gate_failure = 4
	};

	struct run_manifest
	{
		std::string spec_path;
		std::string out_dir = "out";
		std::optional<std::uint64_t> seed;
		unsigned jobs = 0;
		bool force = false;
		bool svg = false;
	};

	int report_error(std::string const& kind, std::string const& message, std::string const& field, int const code)
	{
		nlohmann::json record = { { "error", kind }, { "message", message }, { "exit_code", code } };
		if (!field.empty())
			record["field"] = field;
		std::cerr << record.dump() << '\n';
		return code;
	}

	unsigned effective_jobs(unsigned const requested)
	{
		if (requested > 0)
			return requested;
		return std::max(1u, std::thread::hardware_concurrency());
	}

	/// Writes every file or none: all targets are checked for collisions first.
	class output_set
	{
	public:
		output_set(fs::path directory, bool const force)
			: m_directory(std::move(directory)),
			  m_force(force)
		{}

		std::ostringstream& add(std::string const& name)
		{
			m_files.emplace_back(name, std::make_unique<std::ostringstream>());
			return *m_files.back().second;
		}

		void commit() const
		{
			fs::create_directories(m_directory);
			if (!m_force)
				for (auto const& [name, content] : m_files)
					if (fs::exists(m_directory / name))
						throw rbmc::config_error{ "refusing to overwrite '" + (m_directory / name).string() + "' without --force", "--force" };
			for (auto const& [name, content] : m_files)
			{
				std::ofstream out{ m_directory / name, std::ios::binary | std::ios::trunc };
				out << content->str();
				if (!out)
					throw rbmc::error{ "failed to write '" + (m_directory / name).string() + "'" };
			}
		}

	private:
		fs::path m_directory;
		bool m_force;
		std::vector<std::pair<std::string, std::unique_ptr<std::ostringstream>>> m_files;
	};

	ex::experiment_spec load(run_manifest const& manifest, ex::command_kind const expected, bool const any_command = false)
	{
		auto spec = ex::load_spec(manifest.spec_path);
		if (!any_command && spec.command != expected)
			throw rbmc::config_error{ "spec is for command '" + ex::to_string(spec.command) + "', not '" + ex::to_string(expected) + "'", "/command" };
		if (manifest.seed)
			spec.seed = *manifest.seed;
		return spec;
	}

	int cmd_table(run_manifest const& manifest)
	{
		auto const spec = load(manifest, ex::command_kind::table);
		auto const cells = ex::variance_ratio_table(spec, effective_jobs(manifest.jobs));

		output_set outputs{ manifest.out_dir, manifest.force };
		ex::write_table_csv(outputs.add(spec.name + ".csv"), cells);
		auto& text = outputs.add(spec.name + ".txt");
		ex::write_table_text(text, spec, cells);
		outputs.add("meta.json") << ex::serialize_spec(spec);
		outputs.commit();
		std::cout << text.str();

		for (auto const& cell : cells)
			if (cell.failure)
				return report_error("degenerate", *cell.failure, "", exit_degenerate);
		return exit_ok;
	}

	int cmd_fanchart(run_manifest const& manifest)
	{
		auto const spec = load(manifest, ex::command_kind::fanchart);
		auto const chart = ex::fan_chart(spec, effective_jobs(manifest.jobs));

		output_set outputs{ manifest.out_dir, manifest.force };
		ex::write_fan_chart_csv(outputs.add(spec.name + ".csv"), chart);
		if (manifest.svg)
			ex::write_fan_chart_svg(outputs.add(spec.name + ".svg"), spec, chart);
		outputs.add("meta.json") << ex::serialize_spec(spec);
		outputs.commit();

		auto const& last = chart.rows.back();
		std::printf("%s: t = %llu, interquantile width standard %.6g, vanilla %.6g\n", spec.name.c_str(),
			static_cast<unsigned long long>(last.t), last.q_hi_std - last.q_lo_std, last.q_hi_van - last.q_lo_van);
		return exit_ok;
	}

	int cmd_bias_check(run_manifest const& manifest)
	{
		auto const spec = load(manifest, ex::command_kind::bias_check);
		auto const result = ex::bias_check(spec);

		output_set outputs{ manifest.out_dir, manifest.force };
		ex::write_bias_csv(outputs.add(spec.name + ".csv"), result.reports);
		outputs.add("meta.json") << ex::serialize_spec(spec);
		outputs.commit();

		std::printf("%6s %10s %10s %12s %12s %10s %8s\n", "state", "a", "r2", "predicted", "empirical", "se", "z");
		for (auto const& r : result.reports)
		{
			double const z = r.standard_error > 0 ? (r.empirical_bias - r.predicted_bias) / r.standard_error : 0;
			std::printf("%6g %10.6f %10.6f %12.6f %12.6f %10.6f %8.3f\n", r.z, r.expected_acceptance, r.rejection_second_moment,
				r.predicted_bias, r.empirical_bias, r.standard_error, z);
		}
		std::printf("bias gate (%.3g SE): %s\n", spec.sigma_gate, result.passed ? "pass" : "FAIL");
		return result.passed ? exit_ok : report_error("gate", "empirical bias deviates from the closed form", "", exit_gate_failure);
	}

	int cmd_normalize_check(run_manifest const& manifest)
	{
		auto const spec = load(manifest, ex::command_kind::normalize_check);
		auto const result = ex::normalize_check(spec);

		output_set outputs{ manifest.out_dir, manifest.force };
		ex::write_normalize_csv(outputs.add(spec.name + ".csv"), result);
		outputs.add("meta.json") << ex::serialize_spec(spec);
		outputs.commit();

		std::printf("estimated C = %.6g, true C = %.6g, relative error %.4f over %llu tours (%s)\n", result.estimate, result.truth,
			result.relative_error, static_cast<unsigned long long>(result.tours),
			result.gate_active ? (result.passed ? "pass" : "FAIL") : "informational, below the tour floor");
		return result.passed ? exit_ok : report_error("gate", "normalization estimate outside tolerance", "", exit_gate_failure);
	}

	int cmd_budget(run_manifest const& manifest)
	{
		auto const spec = load(manifest, ex::command_kind::table, true);
		auto const report = ex::equal_budget_report(spec);

		output_set outputs{ manifest.out_dir, manifest.force };
		auto& csv = outputs.add(spec.name + "_budget.csv");
		ex::write_budget_csv(csv, report);
		outputs.commit();
		std::cout << csv.str();
		return exit_ok;
	}
} // namespace


int main(int argc, char** argv)
{
	CLI::App app{ "Rao-Blackwellized MCMC estimators: variance tables, fan charts and bias checks" };
	app.require_subcommand(1);

	run_manifest manifest;
	std::uint64_t seed = 0;
	auto const add_common = [&](CLI::App* command) {
		command->add_option("--spec", manifest.spec_path, "Run specification (JSON)")->required();
		command->add_option("--out", manifest.out_dir, "Output directory")->capture_default_str();
		command->add_option("--seed", seed, "Master seed override")->envname("RBMC_SEED");
		command->add_option("--jobs", manifest.jobs, "Worker threads (0: all cores)")->envname("RBMC_JOBS");
		command->add_flag("--force", manifest.force, "Overwrite existing outputs");
		command->add_flag("--svg", manifest.svg, "Also write an SVG chart (fanchart)");
	};

	struct entry
	{
		CLI::App* command;
		int (*run)(run_manifest const&);
	};
	std::vector<entry> const commands = {
		{ app.add_subcommand("table", "Variance-ratio table"), cmd_table },
		{ app.add_subcommand("fanchart", "Quantile fan chart of running estimates"), cmd_fanchart },
		{ app.add_subcommand("bias-check", "Truncation bias of the vanilla weight on a discrete target"), cmd_bias_check },
		{ app.add_subcommand("normalize-check", "Normalization constant from Jump Restore tour lifetimes"), cmd_normalize_check },
		{ app.add_subcommand("budget", "Realized proposal counts and timing per estimator"), cmd_budget },
	};
	for (auto const& [command, run] : commands)
		add_common(command);

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::CallForHelp const& e)
	{
		return app.exit(e);
	}
	catch (CLI::ParseError const& e)
	{
		return report_error("usage", e.what(), "", exit_spec_error);
	}

	for (auto const& [command, run] : commands)
	{
		if (!command->parsed())
			continue;
		if (command->count("--seed") > 0 || !command->get_option("--seed")->empty())
			manifest.seed = seed;
		try
		{
			return run(manifest);
		}
		catch (rbmc::config_error const& e)
		{
			return report_error("spec", e.what(), e.field(), exit_spec_error);
		}
		catch (rbmc::degenerate_error const& e)
		{
			return report_error("degenerate", e.what(), "", exit_degenerate);
		}
		catch (std::exception const& e)
		{
			return report_error("runtime", e.what(), "", 1);
		}
	}
	return exit_spec_error;
}
