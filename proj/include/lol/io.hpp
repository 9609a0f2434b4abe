#pragma once

#include <iosfwd>
#include <string>

#include "lol/datagen.hpp"
#include "lol/dimension.hpp"

namespace lol {

/// Parsed `--class` input: exactly one of the two members is set.
struct LoadedClass {
  std::shared_ptr<HypothesisClass> hypothesis;
  std::shared_ptr<PatternClassExplicit> pattern;

  bool is_hypothesis() const { return hypothesis != nullptr; }
  int num_labels() const;
  ClassState state() const;
};

/// Accepts `{"kind":"hypothesis",...}` or `{"kind":"pattern",...}` JSON text.
/// Pattern seeds are closed downward by the loader; contradictory seeds are
/// flagged on the result, not rejected.
LoadedClass parse_class_json(const std::string& text);
LoadedClass load_class_file(const std::string& path);

std::string class_to_json(const HypothesisClass& cls);

std::string tree_to_json(const MistakeTree& tree);
MistakeTree tree_from_json(const std::string& text);

std::string certificate_to_json(const SeparatorCertificate& cert);
SeparatorCertificate certificate_from_json(const std::string& text);

/// Columns x_1..x_D,y with 12 significant digits.
void write_dataset_csv(std::ostream& os, const Pattern& data, int feature_dim);

}  // namespace lol
