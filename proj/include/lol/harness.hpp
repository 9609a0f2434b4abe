#pragma once

#include <iosfwd>
#include <map>

#include "lol/adversaries.hpp"
#include "lol/io.hpp"
#include "lol/learners.hpp"

namespace lol {

struct ExperimentConfig {
  std::string scenario;       // dim | soa | perceptron | mw | agnostic | hybrid | cover | adversary
  std::string adversary;      // tree | random-branch | corrupted-branch | symdiff | p1 | p2 | monotone
  std::string class_source;   // file path, inline JSON, or a name like "p1:d=2"
  int k = 1;
  long horizon = 16;          // T
  int trials = 1;
  uint64_t seed = 0;
  Rational p{0, 1};
  double epsilon = 0.5;
  double gamma_target = 0.05;
  double radius = 1.0;
  int feature_dim = 2;        // D (perceptron scenario)
  int num_labels = 3;         // L (perceptron scenario)
  int dim_cap = 64;
  bool strict = false;
  bool anytime = false;
};

/// One CSV row. Header: trial,t,loss,cum_loss,opt,regret,bound.
struct ResultRow {
  int trial = 0;
  long t = 0;
  double loss = 0;
  double cum_loss = 0;
  double opt = 0;
  double regret = 0;
  double bound = 0;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRow& row);

/// Per-prefix regret rows for a finished trace: opt is maintained with one
/// incremental mistake counter per hypothesis, regret = cum_loss - opt.
std::vector<ResultRow> regret_accounting(const Trace& trace, const HypothesisClass& cls,
                                         int trial, double bound);

struct RunOutcome {
  std::string summary_json;
  bool pass = true;
};

/// Executes the configured scenario, streaming CSV rows in trial order.
/// Throws std::invalid_argument on unusable configs and BudgetExceeded when
/// an enumeration or sampling budget runs out.
RunOutcome run_experiment(const ExperimentConfig& cfg, std::ostream& csv);

/// "p1:d=2" -> ("p1", {d:2}). Returns false when src is not of name form.
bool parse_named_source(const std::string& src, std::string* name,
                        std::map<std::string, double>* params);

/// Worker count: LOL_THREADS when set, else hardware concurrency, at least 1.
int worker_count();

}  // namespace lol
