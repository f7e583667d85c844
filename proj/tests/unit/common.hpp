#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "mqe/catalogue.hpp"
#include "mqe/named_groups.hpp"

namespace mqe::test {

inline const Catalogue& shipped_catalogue() {
  static const Catalogue cat = load_catalogue(std::string(MQE_DATA_DIR) + "/catalogue.json");
  return cat;
}

inline nlohmann::json read_json(const std::string& relative) {
  std::ifstream f(std::string(MQE_DATA_DIR) + "/" + relative);
  return nlohmann::json::parse(f);
}

inline std::shared_ptr<const FiniteGroup> named(const NamedGroupDescriptor& d) {
  return std::make_shared<const FiniteGroup>(construct_named(d));
}

inline std::string label_of(const FiniteGroup& G) { return shipped_catalogue().identify(G).value_or("?"); }

}  // namespace mqe::test
