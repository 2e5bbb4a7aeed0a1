#include "sketchwork/ids.hpp"

namespace sketchwork {

namespace {

void append_prefixed(std::string& out, std::string_view part) {
  out += std::to_string(part.size());
  out += ':';
  out += part;
}

}  // namespace

std::string encode_pair(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size() + b.size() + 8);
  append_prefixed(out, a);
  out += ',';
  out += b;
  return out;
}

std::string encode_tuple(const std::vector<std::string>& parts) {
  std::string out = "[";
  for (const auto& p : parts) append_prefixed(out, p);
  out += ']';
  return out;
}

std::string encode_path(const std::vector<Id>& edges, std::string_view at_node) {
  std::string out = "~";
  if (edges.empty()) {
    out += '@';
    out += at_node;
    return out;
  }
  for (const auto& e : edges) append_prefixed(out, e);
  return out;
}

}  // namespace sketchwork
