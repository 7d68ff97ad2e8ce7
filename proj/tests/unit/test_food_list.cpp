#include <sstream>

#include <gtest/gtest.h>

#include "foodprompt/error.hpp"
#include "foodprompt/food_list.hpp"

using namespace foodprompt;

namespace {

FoodList list_from(const std::string& text) {
  std::istringstream in(text);
  return load_food_list(in);
}

}  // namespace

TEST(FoodList, SearchMatchesCodeOrNameCaseInsensitively) {
  const auto list = list_from("# foods\ntoast\tWhite toast\nbutter\tButter, salted\njam\tStrawberry jam\n");
  const auto hits = list.search("TOAST");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].code.str(), "toast");
  const auto by_name = list.search("strawberry");
  ASSERT_EQ(by_name.size(), 1u);
  EXPECT_EQ(by_name[0].code.str(), "jam");
}

TEST(FoodList, SearchKeepsFileOrderAndCap) {
  std::string text;
  for (int i = 0; i < 80; ++i) text += "bread" + std::to_string(i) + "\tBread " + std::to_string(i) + "\n";
  const auto list = list_from(text);
  const auto hits = list.search("bread");
  ASSERT_EQ(hits.size(), kMaxSearchResults);
  EXPECT_EQ(hits[0].code.str(), "bread0");
  EXPECT_EQ(hits[1].code.str(), "bread1");
  EXPECT_EQ(list.search("bread", 3).size(), 3u);
}

TEST(FoodList, CodeWithoutNameUsesCode) {
  const auto list = list_from("egg\n");
  EXPECT_EQ(list.display_name(FoodCode("egg")), "egg");
  EXPECT_FALSE(list.display_name(FoodCode("ham")).has_value());
}

TEST(FoodList, DuplicateCodeRejectedWithLine) {
  try {
    list_from("egg\tEgg\nham\tHam\negg\tBoiled egg\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.line(), 3u);
  }
}
