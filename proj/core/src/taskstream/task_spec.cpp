#include "tpem/taskstream/task_spec.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tpem/error.hpp"

namespace tpem::stream {
namespace {

using nlohmann::json;

json template_json(const UtteranceTemplate& t) { return json{{"user", t.user}, {"system", t.system}}; }

UtteranceTemplate template_from(const json& j) {
  return {j.at("user").get<std::string>(), j.at("system").get<std::string>()};
}

json spec_json(const TaskSpec& s) {
  json j;
  j["name"] = s.name;
  j["task_id"] = s.task_id;
  j["subject_type"] = s.subject_type;
  j["relations"] = s.relations;
  j["lexicons"] = s.lexicons;
  j["templates"] = json::array();
  for (const auto& t : s.templates) j["templates"].push_back(template_json(t));
  j["openers"] = json::array();
  for (const auto& t : s.openers) j["openers"].push_back(template_json(t));
  j["kb_subjects"] = s.kb_subjects;
  j["n_train"] = s.n_train;
  j["n_val"] = s.n_val;
  j["n_test"] = s.n_test;
  j["seed"] = s.seed;
  return j;
}

TaskSpec spec_from(const json& j) {
  TaskSpec s;
  s.name = j.at("name").get<std::string>();
  s.task_id = j.value("task_id", 1);
  s.subject_type = j.at("subject_type").get<std::string>();
  s.relations = j.at("relations").get<std::vector<std::string>>();
  s.lexicons = j.at("lexicons").get<std::map<std::string, std::vector<std::string>>>();
  for (const auto& t : j.at("templates")) s.templates.push_back(template_from(t));
  if (j.contains("openers"))
    for (const auto& t : j.at("openers")) s.openers.push_back(template_from(t));
  s.kb_subjects = j.value("kb_subjects", std::size_t{3});
  s.n_train = j.value("n_train", std::size_t{100});
  s.n_val = j.value("n_val", std::size_t{20});
  s.n_test = j.value("n_test", std::size_t{20});
  s.seed = j.value("seed", std::uint64_t{1});
  validate(s);
  return s;
}

}  // namespace

std::vector<std::string> template_slots(std::string_view text) {
  std::vector<std::string> slots;
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    const std::size_t end = text.find('}', pos);
    if (end == std::string_view::npos) throw ConfigError("template '" + std::string(text) + "': unclosed slot");
    slots.emplace_back(text.substr(pos + 1, end - pos - 1));
    pos = end + 1;
  }
  return slots;
}

void validate(const TaskSpec& spec) {
  auto fail = [&](const std::string& why) { throw ConfigError("task spec '" + spec.name + "': " + why); };
  if (spec.name.empty()) throw ConfigError("task spec: empty name");
  if (spec.task_id <= 0) fail("task id must be positive");
  if (spec.n_train == 0 || spec.n_val == 0 || spec.n_test == 0) fail("split counts must be at least 1");
  if (spec.kb_subjects == 0) fail("kb_subjects must be at least 1");
  if (spec.templates.empty()) fail("no templates");

  std::set<std::string> types(spec.relations.begin(), spec.relations.end());
  if (types.size() != spec.relations.size()) fail("duplicate relation names");
  if (types.count(spec.subject_type)) fail("subject type doubles as a relation");
  types.insert(spec.subject_type);
  for (const auto& type : types) {
    auto it = spec.lexicons.find(type);
    if (it == spec.lexicons.end() || it->second.empty()) fail("no lexicon for entity type '" + type + "'");
    if (type.empty() || type.front() == '@') fail("invalid entity type name '" + type + "'");
  }
  const auto& subjects = spec.lexicons.at(spec.subject_type);
  if (subjects.size() < spec.kb_subjects) {
    fail("lexicon of '" + spec.subject_type + "' has " + std::to_string(subjects.size()) +
         " entities, smaller than the " + std::to_string(spec.kb_subjects) + " KB subjects per dialogue");
  }

  std::set<std::string> seen;
  for (const auto& [type, words] : spec.lexicons) {
    if (!types.count(type)) continue;
    for (const auto& w : words) {
      if (w.empty() || w.front() == '@' || w.find(' ') != std::string::npos) fail("invalid entity '" + w + "'");
      if (!seen.insert(w).second) fail("entity '" + w + "' appears in more than one lexicon entry");
    }
  }

  auto check_slots = [&](const std::string& text) {
    for (const auto& slot : template_slots(text))
      if (!types.count(slot)) fail("template slot '{" + slot + "}' has no matching entity type");
  };
  for (const auto& t : spec.templates) {
    check_slots(t.user);
    check_slots(t.system);
    const auto user_slots = template_slots(t.user);
    if (std::find(user_slots.begin(), user_slots.end(), spec.subject_type) == user_slots.end()) {
      fail("user template '" + t.user + "' does not mention {" + spec.subject_type + "}");
    }
  }
  for (const auto& t : spec.openers) {
    if (!template_slots(t.user).empty() || !template_slots(t.system).empty()) fail("openers cannot contain slots");
  }
}

std::string to_json(const TaskSpec& spec) { return spec_json(spec).dump(2); }

TaskSpec task_spec_from_json(std::string_view text) {
  try {
    return spec_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("task spec: ") + e.what());
  }
}

std::vector<TaskSpec> load_task_specs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task spec file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    const json j = json::parse(buffer.str());
    std::vector<TaskSpec> specs;
    if (j.is_array()) {
      for (const auto& item : j) specs.push_back(spec_from(item));
    } else {
      specs.push_back(spec_from(j));
    }
    return specs;
  } catch (const json::exception& e) {
    throw ConfigError("task spec file '" + path + "': " + e.what());
  }
}

}  // namespace tpem::stream
