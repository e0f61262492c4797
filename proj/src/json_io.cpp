#include "fixpave/json_io.hpp"

#include <utility>
#include <vector>

namespace fixpave {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Builds the DOM like nlohmann's own parser, additionally recording the
// literal text of numbers.
class RawNumberSax : public nlohmann::json_sax<Json> {
 public:
  explicit RawNumberSax(JsonDocument& doc) : doc_(doc) {}

  bool null() override { return emit(Json(nullptr)).second != nullptr; }
  bool boolean(bool v) override { return emit(Json(v)).second != nullptr; }
  bool number_integer(number_integer_t v) override {
    doc_.raw_numbers[emit(Json(v)).first] = std::to_string(v);
    return true;
  }
  bool number_unsigned(number_unsigned_t v) override {
    doc_.raw_numbers[emit(Json(v)).first] = std::to_string(v);
    return true;
  }
  bool number_float(number_float_t v, const string_t& text) override {
    doc_.raw_numbers[emit(Json(v)).first] = text;
    return true;
  }
  bool string(string_t& v) override { return emit(Json(v)).second != nullptr; }
  bool binary(binary_t& v) override { return emit(Json::binary(v)).second != nullptr; }

  bool start_object(std::size_t /*elements*/) override {
    auto [path, node] = emit(Json::object());
    open_.push_back({node, std::move(path), 0, {}});
    return true;
  }
  bool key(string_t& k) override {
    open_.back().key = k;
    return true;
  }
  bool end_object() override {
    open_.pop_back();
    return true;
  }
  bool start_array(std::size_t /*elements*/) override {
    auto [path, node] = emit(Json::array());
    open_.push_back({node, std::move(path), 0, {}});
    return true;
  }
  bool end_array() override {
    open_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string& /*last_token*/,
                   const nlohmann::detail::exception& ex) override {
    error_offset_ = position;
    error_message_ = ex.what();
    return false;
  }

  std::size_t error_offset() const noexcept { return error_offset_; }
  const std::string& error_message() const noexcept { return error_message_; }

 private:
  struct Open {
    Json* node;
    std::string path;
    std::size_t next_index;
    std::string key;
  };

  std::pair<std::string, Json*> emit(Json value) {
    if (open_.empty()) {
      doc_.value = std::move(value);
      return {"", &doc_.value};
    }
    Open& parent = open_.back();
    if (parent.node->is_array()) {
      std::string path = child_pointer(parent.path, parent.next_index++);
      parent.node->push_back(std::move(value));
      return {std::move(path), &parent.node->back()};
    }
    std::string path = child_pointer(parent.path, parent.key);
    Json& slot = (*parent.node)[parent.key];
    slot = std::move(value);
    return {std::move(path), &slot};
  }

  JsonDocument& doc_;
  std::vector<Open> open_;
  std::size_t error_offset_ = 0;
  std::string error_message_;
};

double read_number(const Json& j, const std::string& pointer) {
  if (!j.is_number()) throw SchemaError(pointer, "expected a number");
  return j.get<double>();
}

}  // namespace

const std::string* JsonDocument::raw(const std::string& pointer) const {
  auto it = raw_numbers.find(pointer);
  return it == raw_numbers.end() ? nullptr : &it->second;
}

JsonDocument parse_json_document(std::string_view text) {
  JsonDocument doc;
  RawNumberSax sax(doc);
  if (!Json::sax_parse(text, &sax)) {
    throw JsonSyntaxError(sax.error_message(), sax.error_offset());
  }
  return doc;
}

std::string child_pointer(const std::string& parent, const std::string& key) {
  return parent + "/" + escape_token(key);
}

std::string child_pointer(const std::string& parent, std::size_t index) {
  return parent + "/" + std::to_string(index);
}

Json to_json(const Interval& x) { return Json::array({x.lo(), x.hi()}); }

Json to_json(const Box& b) {
  Json out = Json::array();
  for (const auto& x : b) out.push_back(to_json(x));
  return out;
}

Interval interval_from_json(const Json& j, const std::string& pointer, const JsonDocument* doc) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(pointer, "expected [lo, hi]");
  const std::string lo_ptr = child_pointer(pointer, std::size_t{0});
  const std::string hi_ptr = child_pointer(pointer, std::size_t{1});
  double lo = read_number(j[0], lo_ptr);
  double hi = read_number(j[1], hi_ptr);
  try {
    if (doc != nullptr) {
      if (const auto* raw = doc->raw(lo_ptr)) lo = rounding::decimal_down(raw->c_str());
      if (const auto* raw = doc->raw(hi_ptr)) hi = rounding::decimal_up(raw->c_str());
    }
    return Interval(lo, hi);
  } catch (const InvalidInterval& e) {
    throw SchemaError(pointer, e.what());
  }
}

Box box_from_json(const Json& j, const std::string& pointer, const JsonDocument* doc) {
  if (!j.is_array() || j.empty()) throw SchemaError(pointer, "expected a non-empty array of [lo, hi]");
  std::vector<Interval> dims;
  dims.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    dims.push_back(interval_from_json(j[i], child_pointer(pointer, i), doc));
  }
  return Box(std::move(dims));
}

Box box_from_json_text(std::string_view text) {
  const JsonDocument doc = parse_json_document(text);
  return box_from_json(doc.value, "", &doc);
}

}  // namespace fixpave
