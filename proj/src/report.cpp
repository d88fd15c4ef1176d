#include "nervelab/report.hpp"

namespace nervelab {

Reporter::Reporter(std::string command) {
  header_["tool"] = "nervelab";
  header_["command"] = std::move(command);
}

void Reporter::note(const std::string& key, const json& value) { header_[key] = value; }

void Reporter::check(const std::string& name, bool pass, json details) {
  json line;
  line["check"] = name;
  line["pass"] = pass;
  for (auto it = details.begin(); it != details.end(); ++it) line[it.key()] = it.value();
  lines_.push_back(std::move(line));
  if (!pass) ++failures_;
}

std::string Reporter::render() {
  std::string out = header_.dump() + "\n";
  for (const auto& line : lines_) out += line.dump() + "\n";
  json summary;
  summary["summary"] = true;
  summary["checks"] = static_cast<int>(lines_.size());
  summary["failures"] = failures_;
  summary["pass"] = failures_ == 0;
  out += summary.dump() + "\n";
  return out;
}

}  // namespace nervelab
