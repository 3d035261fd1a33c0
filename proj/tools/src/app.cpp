#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "downcross/cli.hpp"
#include "downcross/errors.hpp"

namespace downcross::cli {

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<double> tol;
  std::optional<unsigned> workers;
};

using Command = CommandResult (*)(const RunConfig&);

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
  if (!f) throw ConfigError("failed writing " + path);
}

int execute(Command cmd, const char* default_format, const Flags& flags, std::ostream& out) {
  RunConfig cfg = flags.config.empty() ? parse_config(nlohmann::json::object())
                                       : load_config(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.tol) {
    if (!(*flags.tol > 0.0)) throw ConfigError("--tol must be positive");
    cfg.rel_tol = *flags.tol;
  }
  if (flags.workers) cfg.workers = *flags.workers;

  const std::string format = flags.format.empty() ? default_format : flags.format;
  const CommandResult r = cmd(cfg);
  const std::string json_text = r.payload.dump(2) + "\n";
  const std::string& primary = format == "csv" ? r.csv : json_text;
  if (flags.out.empty()) {
    out << primary;
  } else {
    write_file(flags.out, primary);
    // The CSV table travels with its summary.
    if (format == "csv") write_file(flags.out + ".json", json_text);
  }
  return r.exit_code;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
    return 3;
  }
  if (dynamic_cast<const Error*>(&e)) return 4;
  return 5;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Down-crossing analysis and simulation for one-dimensional diffusions",
               "downcross"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  Flags flags;

  struct Entry {
    const char* name;
    const char* help;
    const char* default_format;
    Command cmd;
  };
  const Entry entries[] = {
      {"classify", "Decide whether the process eventually stops making c-down-crossings",
       "json", &cmd_classify},
      {"onset", "Tabulate the onset survival function with its product bracket", "csv",
       &cmd_onset},
      {"simulate", "Simulate paths and stream their c-down-crossing events", "csv",
       &cmd_simulate},
      {"verify", "Compare simulated onset locations with the analytic law", "json", &cmd_verify},
      {"bessel", "Sum return probabilities along factorial levels for a Bessel process",
       "json", &cmd_bessel},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Override the configured seed");
    sub->add_option("--out", flags.out, "Write output here instead of stdout");
    sub->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", flags.tol, "Override the relative quadrature tolerance");
    sub->add_option("--workers", flags.workers, "Simulation threads (0 = all cores)");
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "downcross: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return 3;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      return execute(entry->cmd, entry->default_format, flags, out);
    } catch (const std::exception& e) {
      err << "downcross " << entry->name << ": " << e.what() << "\n";
      return exit_code_for(e);
    }
  }
  return 3;
}

}  // namespace downcross::cli
