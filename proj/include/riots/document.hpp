#pragma once

#include <optional>
#include <string>
#include <vector>

namespace riots {

// On-disk records mirroring the graph types. Optional members stay unset
// when the corresponding key is absent from the file.
struct ComponentRecord {
  std::string id;
  std::string gate = "or";
  std::vector<std::string> depends_on;
  std::string supplier;
  double risk = 0.0;
  std::optional<std::string> sub_system;  // reference to another document
  bool operator==(const ComponentRecord&) const = default;
};

struct SupplierRecord {
  std::string id;
  std::optional<std::string> owner;
  double risk = 0.0;
  std::optional<double> trust;
  std::optional<std::vector<std::string>> specified;
  std::optional<std::vector<std::string>> actual;
  bool operator==(const SupplierRecord&) const = default;
};

struct OwnerRecord {
  std::string id;
  double risk = 0.0;
  // Parsed but rejected downstream: only one level of ownership is modeled.
  std::optional<std::string> owner;
  bool operator==(const OwnerRecord&) const = default;
};

struct GraphDocument {
  int version = 1;
  std::string root;
  std::string integrator;  // required when the document is used as a sub-system
  std::string description;
  std::vector<ComponentRecord> components;
  std::vector<SupplierRecord> suppliers;
  std::vector<OwnerRecord> owners;
  bool operator==(const GraphDocument&) const = default;
};

struct ParseOptions {
  // With lenient set, unknown keys are reported through `warnings` instead
  // of failing the parse.
  bool lenient = false;
};

// Parse and schema-check a graph document from a file (IoError when the
// file cannot be read) or from a JSON string. Syntax problems report line
// and column; schema problems name the offending field.
GraphDocument parse_document(const std::string& path,
                             const ParseOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr);
GraphDocument document_from_json(const std::string& text,
                                 const ParseOptions& opts = {},
                                 std::vector<std::string>* warnings = nullptr);

std::string document_to_json(const GraphDocument& doc, int indent = 2);
void write_document(const GraphDocument& doc, const std::string& path);

}  // namespace riots
