#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace embedkit::corpus {

// Fine-grained six-way labels and their two coarser views. The dataset
// stores only the six-way label; the other two are always derived.
enum class SixClass {
  kClean = 0,
  kOffensive = 1,
  kReligiousHate = 2,
  kGenderHate = 3,
  kNationalityHate = 4,
  kEthnicityHate = 5,
};

enum class ThreeClass { kClean = 0, kOffensive = 1, kHate = 2 };
enum class TwoClass { kClean = 0, kOffensiveHate = 1 };

inline constexpr int kSixClassCount = 6;
inline constexpr int kThreeClassCount = 3;
inline constexpr int kTwoClassCount = 2;

std::string_view to_string(SixClass c);
std::string_view to_string(ThreeClass c);
std::string_view to_string(TwoClass c);

// Parses the lowercase hyphenated label names; nullopt for anything else.
std::optional<SixClass> parse_six_class(std::string_view name);

ThreeClass three_class_of(SixClass c);
TwoClass two_class_of(SixClass c);

struct TaskLabels {
  TwoClass two;
  ThreeClass three;
};

// Coarsens a six-way label into the two- and three-way views.
TaskLabels derive_task_labels(SixClass c);

struct LabeledExample {
  std::string text;
  SixClass six_class;
};

using Dataset = std::vector<LabeledExample>;

// Reads a tab-separated dataset file: a `text<TAB>label` header line, then
// one example per line. Throws Error naming the line on malformed input.
Dataset load_dataset(const std::string& path);

// Class index of an example under an n-class task (n in {2, 3, 6}).
int task_label_index(SixClass c, int n_classes);

}  // namespace embedkit::corpus
