#include "riots/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riots/errors.hpp"

namespace riots {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

class SchemaReader {
 public:
  SchemaReader(const ParseOptions& opts, std::vector<std::string>* warnings)
      : opts_(opts), warnings_(warnings) {}

  GraphDocument read(const json& j) {
    GraphDocument doc;
    expect_object(j, "document");
    check_keys(j, "document",
               {"riots_version", "root", "components", "suppliers", "owners",
                "integrator", "description"});

    const json* version = require(j, "riots_version", "document");
    if (version) {
      if (!version->is_number_integer()) {
        fail("riots_version: must be an integer");
      } else if (version->get<int>() != 1) {
        fail("riots_version: unsupported version " +
             std::to_string(version->get<int>()) + " (expected 1)");
      } else {
        doc.version = 1;
      }
    }

    doc.root = read_id(j, "root", "document", true);
    doc.integrator = read_id(j, "integrator", "document", false);
    if (const json* d = optional(j, "description")) {
      if (!d->is_string()) fail("description: must be a string");
      else doc.description = d->get<std::string>();
    }

    const json* components = require(j, "components", "document");
    if (components) {
      if (!components->is_array()) {
        fail("components: must be an array");
      } else {
        for (std::size_t i = 0; i < components->size(); ++i) {
          doc.components.push_back(
              read_component((*components)[i], "components[" + std::to_string(i) + "]"));
        }
      }
    }
    if (const json* suppliers = optional(j, "suppliers")) {
      if (!suppliers->is_array()) {
        fail("suppliers: must be an array");
      } else {
        for (std::size_t i = 0; i < suppliers->size(); ++i) {
          doc.suppliers.push_back(
              read_supplier((*suppliers)[i], "suppliers[" + std::to_string(i) + "]"));
        }
      }
    }
    if (const json* owners = optional(j, "owners")) {
      if (!owners->is_array()) {
        fail("owners: must be an array");
      } else {
        for (std::size_t i = 0; i < owners->size(); ++i) {
          doc.owners.push_back(
              read_owner((*owners)[i], "owners[" + std::to_string(i) + "]"));
        }
      }
    }

    if (!issues_.empty()) throw ValidationError(std::move(issues_));
    return doc;
  }

 private:
  void fail(const std::string& message,
            ErrorKind kind = ErrorKind::SchemaViolation) {
    issues_.push_back({kind, message});
  }

  void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      throw ValidationError({{ErrorKind::SchemaViolation, path + ": must be an object"}});
    }
  }

  void check_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (allowed.count(key)) continue;
      const std::string message = path + ": unknown key \"" + key + "\"";
      if (opts_.lenient) {
        if (warnings_) warnings_->push_back(message + " (ignored)");
      } else {
        fail(message);
      }
    }
  }

  const json* require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) {
      fail(path + ": missing required key \"" + std::string(key) + "\"");
      return nullptr;
    }
    return &*it;
  }

  static const json* optional(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  std::string read_id(const json& j, const char* key, const std::string& path,
                      bool required) {
    const json* v = required ? require(j, key, path) : optional(j, key);
    if (!v) return "";
    const std::string where =
        path == "document" ? std::string(key) : path + "." + key;
    if (!v->is_string()) {
      fail(where + ": must be a string");
      return "";
    }
    const std::string id = v->get<std::string>();
    if (id.empty()) fail(where + ": must not be empty");
    if (id.find('.') != std::string::npos) {
      fail(where + ": must not contain \".\" (reserved for flattening)");
    }
    return id;
  }

  double read_probability(const json& j, const char* key, const std::string& path,
                          bool required = true) {
    const json* v = required ? require(j, key, path) : optional(j, key);
    if (!v) return 0.0;
    const std::string where = path + "." + key;
    if (!v->is_number()) {
      fail(where + ": must be a number in [0,1]");
      return 0.0;
    }
    const double value = v->get<double>();
    if (!(value >= 0.0 && value <= 1.0)) {
      std::ostringstream msg;
      msg << where << ": must lie in [0,1] (got " << value << ")";
      fail(msg.str());
      return 0.0;
    }
    return value;
  }

  std::vector<std::string> read_string_list(const json& v, const std::string& where) {
    std::vector<std::string> out;
    if (!v.is_array()) {
      fail(where + ": must be an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) {
        fail(where + "[" + std::to_string(i) + "]: must be a string");
        continue;
      }
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  ComponentRecord read_component(const json& j, const std::string& path) {
    ComponentRecord rec;
    expect_object(j, path);
    check_keys(j, path, {"id", "gate", "depends_on", "supplier", "risk", "sub_system"});
    rec.id = read_id(j, "id", path, true);
    if (const json* gate = require(j, "gate", path)) {
      if (!gate->is_string()) {
        fail(path + ".gate: must be \"and\" or \"or\"");
      } else {
        rec.gate = gate->get<std::string>();
        if (rec.gate != "and" && rec.gate != "or") {
          fail(path + ".gate: must be \"and\" or \"or\" (got \"" + rec.gate + "\")");
        }
      }
    }
    if (const json* deps = require(j, "depends_on", path)) {
      rec.depends_on = read_string_list(*deps, path + ".depends_on");
    }
    if (const json* supplier = require(j, "supplier", path)) {
      if (!supplier->is_string() || supplier->get<std::string>().empty()) {
        fail(path + ".supplier: must be a non-empty string");
      } else {
        rec.supplier = supplier->get<std::string>();
      }
    }
    rec.risk = read_probability(j, "risk", path);
    if (const json* sub = optional(j, "sub_system")) {
      if (!sub->is_string() || sub->get<std::string>().empty()) {
        fail(path + ".sub_system: must be a non-empty string");
      } else {
        rec.sub_system = sub->get<std::string>();
      }
    }
    return rec;
  }

  SupplierRecord read_supplier(const json& j, const std::string& path) {
    SupplierRecord rec;
    expect_object(j, path);
    check_keys(j, path, {"id", "owner", "risk", "trust", "specified", "actual"});
    rec.id = read_id(j, "id", path, true);
    if (const json* owner = optional(j, "owner")) {
      if (!owner->is_string() || owner->get<std::string>().empty()) {
        fail(path + ".owner: must be a non-empty string");
      } else {
        rec.owner = owner->get<std::string>();
      }
    }
    rec.risk = read_probability(j, "risk", path);
    if (const json* trust = optional(j, "trust")) {
      if (!trust->is_number()) {
        fail(path + ".trust: must be a number in [0,1]");
      } else {
        const double value = trust->get<double>();
        if (!(value >= 0.0 && value <= 1.0)) {
          fail(path + ".trust: must lie in [0,1]");
        } else {
          rec.trust = value;
        }
      }
    }
    if (const json* specified = optional(j, "specified")) {
      rec.specified = read_string_list(*specified, path + ".specified");
    }
    if (const json* actual = optional(j, "actual")) {
      rec.actual = read_string_list(*actual, path + ".actual");
    }
    return rec;
  }

  OwnerRecord read_owner(const json& j, const std::string& path) {
    OwnerRecord rec;
    expect_object(j, path);
    check_keys(j, path, {"id", "risk", "owner"});
    rec.id = read_id(j, "id", path, true);
    rec.risk = read_probability(j, "risk", path);
    if (const json* owner = optional(j, "owner")) {
      if (!owner->is_string()) {
        fail(path + ".owner: must be a string");
      } else {
        rec.owner = owner->get<std::string>();
      }
    }
    return rec;
  }

  const ParseOptions& opts_;
  std::vector<std::string>* warnings_;
  std::vector<Diagnostic> issues_;
};

}  // namespace

GraphDocument document_from_json(const std::string& text, const ParseOptions& opts,
                                 std::vector<std::string>* warnings) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": not valid JSON";
    throw Error(ErrorKind::SyntaxError, msg.str());
  }
  return SchemaReader(opts, warnings).read(j);
}

GraphDocument parse_document(const std::string& path, const ParseOptions& opts,
                             std::vector<std::string>* warnings) {
  // Every error raised here carries the file path as its stage so callers
  // can tell which document of a composite system failed.
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error(ErrorKind::IoError, "cannot open \"" + path + "\" for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
      throw Error(ErrorKind::IoError, "cannot read \"" + path + "\"");
    }
    return document_from_json(buffer.str(), opts, warnings);
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(path);
    throw;
  }
}

std::string document_to_json(const GraphDocument& doc, int indent) {
  json j;
  j["riots_version"] = doc.version;
  j["root"] = doc.root;
  if (!doc.integrator.empty()) j["integrator"] = doc.integrator;
  if (!doc.description.empty()) j["description"] = doc.description;

  json components = json::array();
  for (const auto& rec : doc.components) {
    json c;
    c["id"] = rec.id;
    c["gate"] = rec.gate;
    c["depends_on"] = rec.depends_on;
    c["supplier"] = rec.supplier;
    c["risk"] = rec.risk;
    if (rec.sub_system) c["sub_system"] = *rec.sub_system;
    components.push_back(std::move(c));
  }
  j["components"] = std::move(components);

  json suppliers = json::array();
  for (const auto& rec : doc.suppliers) {
    json s;
    s["id"] = rec.id;
    s["risk"] = rec.risk;
    if (rec.owner) s["owner"] = *rec.owner;
    if (rec.trust) s["trust"] = *rec.trust;
    if (rec.specified) s["specified"] = *rec.specified;
    if (rec.actual) s["actual"] = *rec.actual;
    suppliers.push_back(std::move(s));
  }
  j["suppliers"] = std::move(suppliers);

  json owners = json::array();
  for (const auto& rec : doc.owners) {
    json o;
    o["id"] = rec.id;
    o["risk"] = rec.risk;
    if (rec.owner) o["owner"] = *rec.owner;
    owners.push_back(std::move(o));
  }
  j["owners"] = std::move(owners);

  return j.dump(indent) + "\n";
}

void write_document(const GraphDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open \"" + path + "\" for writing");
  }
  out << document_to_json(doc);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot write \"" + path + "\"");
  }
}

}  // namespace riots
