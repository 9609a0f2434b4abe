#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lol/harness.hpp"

namespace {

constexpr const char* kScenarios[] = {"dim",      "soa",    "perceptron", "mw",
                                      "agnostic", "hybrid", "adversary",  "cover"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"list online learning: mistake bounds, covers, and adversaries"};
  app.require_subcommand(1);

  lol::ExperimentConfig cfg;
  std::string p_text = "0";
  std::string out_path;
  std::string construction;

  for (const char* name : kScenarios) {
    CLI::App* sub = app.add_subcommand(name, name);
    sub->add_option("--class", cfg.class_source, "class file, inline JSON, or name (p1:d=2)");
    sub->add_option("--k", cfg.k, "list size");
    sub->add_option("--T", cfg.horizon, "horizon");
    sub->add_option("--trials", cfg.trials, "independent trials");
    sub->add_option("--seed", cfg.seed, "rng seed; trial substreams are seed xor trial");
    sub->add_option("--p", p_text, "corruption rate as a rational, e.g. 1/3");
    sub->add_option("--epsilon", cfg.epsilon, "p2 adversary slack");
    sub->add_option("--gamma", cfg.gamma_target, "target margin for data generation");
    sub->add_option("--radius", cfg.radius, "feature-vector norm bound");
    sub->add_option("--D", cfg.feature_dim, "feature dimension (perceptron)");
    sub->add_option("--L", cfg.num_labels, "label count (perceptron)");
    sub->add_option("--dim-cap", cfg.dim_cap, "refuse classes beyond this dimension");
    sub->add_option("--out", out_path, "CSV destination (default: stdout)");
    sub->add_flag("--strict", cfg.strict, "exit 2 when a bound check fails");
    sub->add_flag("--anytime", cfg.anytime, "doubling-trick learner in the agnostic scenario");
    if (std::string(name) == "adversary")
      sub->add_option("construction", construction,
                      "tree|random-branch|corrupted-branch|symdiff|p1|p2|monotone")
          ->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.scenario = app.get_subcommands().front()->get_name();
  cfg.adversary = construction;

  try {
    cfg.p = lol::parse_rational(p_text);
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
      file.open(out_path);
      if (!file) throw std::invalid_argument("cannot open --out file: " + out_path);
    }
    std::ostream& csv = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
    const lol::RunOutcome outcome = lol::run_experiment(cfg, csv);
    std::cout << outcome.summary_json << "\n";
    if (!outcome.pass && cfg.strict) return 2;
    return 0;
  } catch (const lol::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
