#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tpem::glmp {

// Token <-> id bijection shared by every task. Ids are append-only, so the
// first V_k ids are exactly the vocabulary seen by task k.
//
// Ids 0..3 are PAD, SOS, EOS, UNK. Id 4 is the sentinel word of the null
// memory cell. Tokens starting with '@' are sketch tags; no ordinary token
// may start with '@', which keeps the two sets disjoint.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNull = 4;
  static constexpr std::size_t kReserved = 5;

  Vocabulary();

  // Returns the id of `token`, appending it when new.
  int add(std::string_view token);

  std::optional<int> find(std::string_view token) const;
  // Id of `token` if it is known and below `limit`, UNK otherwise.
  int id_or_unk(std::string_view token, std::size_t limit) const;
  int id_or_unk(std::string_view token) const { return id_or_unk(token, size()); }

  const std::string& token(int id) const;
  bool is_tag(int id) const;
  static bool is_tag_token(std::string_view token) { return !token.empty() && token.front() == '@'; }

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace tpem::glmp
