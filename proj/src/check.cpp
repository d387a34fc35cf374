#include "attposet/check.hpp"

namespace attposet {

nlohmann::ordered_json Witness::to_json() const {
  nlohmann::ordered_json j;
  j["component"] = component;
  if (row) j["row"] = *row;
  if (col) j["col"] = *col;
  if (trial) j["trial"] = *trial;
  if (index) j["index"] = *index;
  if (lhs) j["lhs"] = lhs->to_json();
  if (rhs) j["rhs"] = rhs->to_json();
  if (lhs && rhs) j["residual"] = (*lhs - *rhs).to_json();
  if (!note.empty()) j["note"] = note;
  return j;
}

nlohmann::ordered_json CheckResult::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["mode"] = mode;
  j["trials"] = trials;
  j["seed"] = seed;
  j["pass"] = pass;
  j["witness"] = witness ? witness->to_json() : nlohmann::ordered_json(nullptr);
  j["components"] = components;
  if (!detail.empty()) j["detail"] = detail;
  if (!data.is_null()) j["data"] = data;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

}  // namespace attposet
