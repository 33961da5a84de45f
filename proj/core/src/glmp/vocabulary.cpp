#include "tpem/glmp/vocabulary.hpp"

#include "tpem/error.hpp"

namespace tpem::glmp {

Vocabulary::Vocabulary() {
  for (const char* reserved : {"<pad>", "<sos>", "<eos>", "<unk>", "$"}) {
    ids_.emplace(reserved, static_cast<int>(tokens_.size()));
    tokens_.emplace_back(reserved);
  }
}

int Vocabulary::add(std::string_view token) {
  if (token.empty()) throw DataError("vocabulary: empty token");
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

int Vocabulary::id_or_unk(std::string_view token, std::size_t limit) const {
  const auto id = find(token);
  if (!id || static_cast<std::size_t>(*id) >= limit) return kUnk;
  return *id;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw DataError("vocabulary: unknown id " + std::to_string(id));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

bool Vocabulary::is_tag(int id) const { return is_tag_token(token(id)); }

}  // namespace tpem::glmp
