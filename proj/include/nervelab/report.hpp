#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace nervelab {

// JSON-lines run report: a header, one line per check, and a trailing summary.
// Lines are emitted in a deterministic order and written once, so identical
// inputs produce byte-identical reports.
class Reporter {
 public:
  using json = nlohmann::ordered_json;

  explicit Reporter(std::string command);

  void note(const std::string& key, const json& value);  // header fields
  void check(const std::string& name, bool pass, json details = json::object());

  bool all_pass() const { return failures_ == 0; }
  int failures() const { return failures_; }
  std::string render();  // finalizes the summary line

 private:
  json header_;
  std::vector<json> lines_;
  int failures_ = 0;
};

}  // namespace nervelab
