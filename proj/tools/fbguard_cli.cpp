#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fbguard/experiment/config.hpp"
#include "fbguard/experiment/run.hpp"
#include "fbguard/idps/rule.hpp"

using namespace fbguard;
using experiment::kExitInternal;
using experiment::kExitUsage;

namespace {

int cmd_run(const std::string& file, const std::string& out_dir) {
  const auto config = experiment::load_config(file);
  const auto outputs = experiment::run(config);
  experiment::write_outputs(outputs, out_dir);
  const auto& r = outputs.report;
  std::cout << r.name << ": cycles=" << r.cycles << " availability=" << experiment::format_ratio(r.availability)
            << " hazard=" << (r.hazard ? "true" : "false");
  for (const auto& d : r.devices) std::cout << ' ' << d.name << '=' << net::to_string(d.final_state);
  std::cout << " exit=" << r.exit_status << '\n';
  return r.exit_status;
}

int cmd_sweep(const std::string& file, const std::string& attack, const std::string& rates_text,
              const std::string& out_dir) {
  const auto rates = experiment::parse_rates(rates_text);
  const auto config = experiment::load_config(file);
  const auto rows = experiment::sweep(config, attack, rates);
  std::filesystem::create_directories(out_dir);
  const auto csv = experiment::sweep_csv(rows);
  std::ofstream(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary) << csv;
  std::cout << csv;
  return 0;
}

int cmd_validate(const std::string& file) {
  const auto config = experiment::load_config(file);
  std::cout << file << ": ok (" << config.attacks.size() << " attacks)\n";
  return 0;
}

int cmd_rules_check(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot open " << file << '\n';
    return kExitUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const auto rules = idps::parse_rules(text.str());
  for (const auto& rule : rules) std::cout << rule.to_string() << '\n';
  std::cout << file << ": " << rules.size() << " rules ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbguard: function-block network simulator with an embedded IDPS"};
  app.require_subcommand(1);

  std::string file;
  std::string out_dir = "out";
  std::string attack;
  std::string rates;

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV outputs");
  run->add_option("scenario", file, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Re-run a scenario over attack rates");
  sweep->add_option("scenario", file, "Scenario file")->required();
  sweep->add_option("--attack", attack, "Attack name whose rate is substituted")->required();
  sweep->add_option("--rates", rates, "Comma-separated packets per second, strictly increasing")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario file");
  validate->add_option("scenario", file, "Scenario file")->required();

  auto* rules = app.add_subcommand("rules", "Ruleset tools");
  rules->require_subcommand(1);
  auto* check = rules->add_subcommand("check", "Parse a ruleset");
  check->add_option("ruleset", file, "Ruleset file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(file, out_dir);
    if (*sweep) return cmd_sweep(file, attack, rates, out_dir);
    if (*validate) return cmd_validate(file);
    if (*check) return cmd_rules_check(file);
  } catch (const experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const experiment::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const idps::RuleSyntaxError& e) {
    std::cerr << "rule error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const experiment::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
