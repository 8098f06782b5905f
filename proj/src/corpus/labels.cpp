#include "embedkit/corpus/labels.hpp"

#include <fstream>

#include "embedkit/error.hpp"
#include "embedkit/strutil.hpp"

namespace embedkit::corpus {

std::string_view to_string(SixClass c) {
  switch (c) {
    case SixClass::kClean: return "clean";
    case SixClass::kOffensive: return "offensive";
    case SixClass::kReligiousHate: return "religious-hate";
    case SixClass::kGenderHate: return "gender-hate";
    case SixClass::kNationalityHate: return "nationality-hate";
    case SixClass::kEthnicityHate: return "ethnicity-hate";
  }
  return "?";
}

std::string_view to_string(ThreeClass c) {
  switch (c) {
    case ThreeClass::kClean: return "clean";
    case ThreeClass::kOffensive: return "offensive";
    case ThreeClass::kHate: return "hate";
  }
  return "?";
}

std::string_view to_string(TwoClass c) {
  switch (c) {
    case TwoClass::kClean: return "clean";
    case TwoClass::kOffensiveHate: return "offensive-hate";
  }
  return "?";
}

std::optional<SixClass> parse_six_class(std::string_view name) {
  for (int i = 0; i < kSixClassCount; ++i) {
    auto c = static_cast<SixClass>(i);
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

ThreeClass three_class_of(SixClass c) {
  switch (c) {
    case SixClass::kClean: return ThreeClass::kClean;
    case SixClass::kOffensive: return ThreeClass::kOffensive;
    default: return ThreeClass::kHate;
  }
}

TwoClass two_class_of(SixClass c) {
  return c == SixClass::kClean ? TwoClass::kClean : TwoClass::kOffensiveHate;
}

TaskLabels derive_task_labels(SixClass c) {
  return {two_class_of(c), three_class_of(c)};
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(strformat("cannot open dataset file '%s'", path.c_str()));
  std::string line;
  size_t line_no = 0;
  Dataset dataset;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "text\tlabel")
        fail(strformat("%s:1: expected header 'text<TAB>label'", path.c_str()));
      continue;
    }
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      fail(strformat("%s:%zu: missing tab separator", path.c_str(), line_no));
    std::string_view label = std::string_view(line).substr(tab + 1);
    auto six = parse_six_class(label);
    if (!six)
      fail(strformat("%s:%zu: unknown label '%.*s'", path.c_str(), line_no,
                     static_cast<int>(label.size()), label.data()));
    dataset.push_back({line.substr(0, tab), *six});
  }
  return dataset;
}

int task_label_index(SixClass c, int n_classes) {
  switch (n_classes) {
    case 2: return static_cast<int>(two_class_of(c));
    case 3: return static_cast<int>(three_class_of(c));
    case 6: return static_cast<int>(c);
    default: fail(strformat("unsupported task size %d", n_classes));
  }
}

}  // namespace embedkit::corpus
