#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unordered_map>

#include "embedkit/corpus/labels.hpp"
#include "embedkit/corpus/text.hpp"
#include "embedkit/corpus/vocab.hpp"
#include "embedkit/rng.hpp"

using namespace embedkit;
using namespace embedkit::corpus;

TEST_CASE("normalize: digit runs become 99") {
  CHECK(normalize("عام 2019") == "عام 99");
  CHECK(normalize("عام ٢٠١٩") == "عام 99");  // Arabic-Indic digits
  CHECK(normalize("1 12 123") == "99 99 99");
}

TEST_CASE("normalize: empty input") { CHECK(normalize("").empty()); }

TEST_CASE("normalize: hashtags lose # and split on underscores") {
  CHECK(normalize("#حرية_المرأة") == "حرية المرأة");
  CHECK(normalize("#free_speech now") == "free speech now");
}

TEST_CASE("normalize: letter repetition cut to two") {
  CHECK(normalize("ههههههه") == "هه");
  CHECK(normalize("cooool") == "cool");
}

TEST_CASE("normalize: mentions and URLs") {
  CHECK(normalize("@sami انظر http://t.co/ab") == "UserMention انظر");
  CHECK(normalize("@user123") == "UserMention");
  CHECK(normalize("see www.example.com page") == "see page");
  CHECK(normalize("HTTPS://X.co/y z") == "z");
}

TEST_CASE("normalize: emoji runs become one token") {
  CHECK(normalize("مرحبا \U0001F602\U0001F602") == "مرحبا Emojis");
  CHECK(normalize("a ❤️ b") == "a Emojis b");
  CHECK(normalize("\U0001F600 \U0001F601") == "Emojis Emojis");
}

TEST_CASE("normalize: punctuation, symbols and diacritics dropped") {
  CHECK(normalize("hello, world!") == "hello world");
  CHECK(normalize("price: 3$ + 4€") == "price 99 99");
  CHECK(normalize("مُحَمَّد") == "محمد");  // harakat removed
  CHECK(normalize("كـــتاب") == "كتاب");   // tatweel removed
}

TEST_CASE("normalize: whitespace collapsed and trimmed") {
  CHECK(normalize("  a \t b\n") == "a b");
}

TEST_CASE("normalize is idempotent on random-ish corpus") {
  // Mix of scripts, entities and junk; idempotence must hold for all.
  const char* samples[] = {
      "@a #b_c 123 ههههه http://x.y عالم!!",
      "😀😀😀 text;; with -- dashes & stuff 42",
      "#tag @m www.z.org ـــ مِثال	tabbed",
      "UserMention Emojis 99 plain",
  };
  Rng rng(7);
  for (const char* s : samples) {
    std::string once = normalize(s);
    CHECK(normalize(once) == once);
  }
  // Random ASCII strings.
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    for (int i = 0; i < 40; ++i)
      s.push_back(static_cast<char>(32 + rng.below(95)));
    std::string once = normalize(s);
    CHECK(normalize(once) == once);
  }
}

TEST_CASE("tokenize") {
  CHECK(tokenize("a b  c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("UserMention انظر") ==
        std::vector<std::string>{"UserMention", "انظر"});
}

TEST_CASE("build_vocab thresholds and ordering") {
  std::vector<std::string> tokens;
  for (int i = 0; i < 4; ++i) tokens.push_back("rare");
  for (int i = 0; i < 9; ++i) tokens.push_back("common");
  Vocabulary v = build_vocab(tokens, 5);
  CHECK(v.size() == 3);  // pad, unk, common
  CHECK(!v.find("rare").has_value());
  CHECK(v.lookup("common") == 2);

  Vocabulary empty = build_vocab({}, 5);
  CHECK(empty.size() == 2);

  Vocabulary v2 = build_vocab({"a", "a", "a", "b"}, 1);
  CHECK(v2.lookup("a") == 2);
  CHECK(v2.lookup("b") == 3);
  CHECK(v2.count(2) == 3);
  CHECK(v2.count(3) == 1);
}

TEST_CASE("build_vocab ties broken lexicographically") {
  Vocabulary v = build_vocab({"zz", "aa", "mm"}, 1);
  CHECK(v.token(2) == "aa");
  CHECK(v.token(3) == "mm");
  CHECK(v.token(4) == "zz");
}

TEST_CASE("build_vocab matches brute-force counting on random streams") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> tokens;
    size_t n = 100 + rng.below(10000);
    for (size_t i = 0; i < n; ++i)
      tokens.push_back("w" + std::to_string(rng.below(50)));
    uint64_t min_count = 1 + rng.below(10);

    std::unordered_map<std::string, uint64_t> brute;
    for (const auto& t : tokens) ++brute[t];

    Vocabulary v = build_vocab(tokens, min_count);
    size_t expected = 0;
    for (const auto& [tok, cnt] : brute) {
      if (cnt >= min_count) {
        ++expected;
        REQUIRE(v.find(tok).has_value());
        CHECK(v.count(*v.find(tok)) == cnt);
      } else {
        CHECK(!v.find(tok).has_value());
      }
    }
    CHECK(static_cast<size_t>(v.size()) == expected + 2);
    // Ordering invariant: counts non-increasing over non-special ids.
    for (int32_t id = 3; id < v.size(); ++id)
      CHECK(v.count(id - 1) >= v.count(id));
  }
}

TEST_CASE("encode pads, truncates and maps unknowns") {
  Vocabulary v = build_vocab({"a", "b"}, 1);
  EncodedSequence s = encode({"a", "zzz"}, v, 4);
  CHECK(s.ids == std::vector<int32_t>{2, Vocabulary::kUnkId, 0, 0});
  CHECK(s.true_length == 2);

  EncodedSequence e = encode({}, v, 4);
  CHECK(e.ids == std::vector<int32_t>{0, 0, 0, 0});
  CHECK(e.true_length == 0);

  std::vector<std::string> ten(10, "a");
  EncodedSequence t = encode(ten, v, 8);
  CHECK(t.true_length == 8);
  CHECK(t.ids.size() == 8);
}

TEST_CASE("encode/decode round trip for in-vocabulary tokens") {
  Rng rng(3);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("tok" + std::to_string(i));
  Vocabulary v = build_vocab(
      [&] {
        std::vector<std::string> all;
        for (const auto& w : words) all.push_back(w);
        return all;
      }(),
      1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> tokens;
    size_t len = rng.below(16);
    for (size_t i = 0; i < len; ++i)
      tokens.push_back(words[rng.below(words.size())]);
    EncodedSequence s = encode(tokens, v, 16);
    CHECK(decode(s, v) == tokens);
  }
}

TEST_CASE("derive_task_labels hierarchy") {
  auto r = derive_task_labels(SixClass::kReligiousHate);
  CHECK(r.two == TwoClass::kOffensiveHate);
  CHECK(r.three == ThreeClass::kHate);

  auto c = derive_task_labels(SixClass::kClean);
  CHECK(c.two == TwoClass::kClean);
  CHECK(c.three == ThreeClass::kClean);

  auto o = derive_task_labels(SixClass::kOffensive);
  CHECK(o.two == TwoClass::kOffensiveHate);
  CHECK(o.three == ThreeClass::kOffensive);

  // Exhaustive hierarchy consistency.
  for (int i = 0; i < kSixClassCount; ++i) {
    auto six = static_cast<SixClass>(i);
    auto [two, three] = derive_task_labels(six);
    CHECK((six == SixClass::kClean) == (three == ThreeClass::kClean));
    CHECK((six == SixClass::kClean) == (two == TwoClass::kClean));
    if (six == SixClass::kOffensive) CHECK(three == ThreeClass::kOffensive);
    if (six != SixClass::kClean && six != SixClass::kOffensive)
      CHECK(three == ThreeClass::kHate);
    if (three != ThreeClass::kClean) CHECK(two == TwoClass::kOffensiveHate);
  }
}

TEST_CASE("parse_six_class rejects unknown labels") {
  CHECK(parse_six_class("religious-hate") == SixClass::kReligiousHate);
  CHECK(!parse_six_class("Religious-Hate").has_value());
  CHECK(!parse_six_class("bogus").has_value());
}
