#pragma once

#include <string>
#include <vector>

namespace tpem::glmp {

struct KbTriple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const KbTriple&) const = default;
};

// One training example: history X, KB tuples B, gold response Y and its
// sketch Y^s. gold_entities is kept sorted and unique.
struct DialogueSample {
  std::vector<std::string> history;
  std::vector<KbTriple> kb;
  std::vector<std::string> response;
  std::vector<std::string> sketch_response;
  std::vector<std::string> gold_entities;
  int task_id = 1;

  bool operator==(const DialogueSample&) const = default;
};

// Throws DataError naming `label` when the sample breaks an invariant:
// equal response/sketch lengths, tags exactly where they differ, every gold
// entity present among KB objects or history tokens, positive task id.
void validate(const DialogueSample& sample, const std::string& label);

// Sketch tag for an entity: "@" + relation of the first KB triple whose
// object is the entity, or "@entity" when it only occurs in the history.
std::string entity_tag(const DialogueSample& sample, const std::string& entity);

// Rebuilds the sketch by replacing gold entities in the response with tags.
std::vector<std::string> derive_sketch(const DialogueSample& sample);

}  // namespace tpem::glmp
