#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfg/alphabet.hpp"
#include "nfg/graph.hpp"

namespace nfg {

/// On-disk form of an NFG (JSON text). Mirrors the file one-to-one, so a
/// document can hold references that do not resolve to a valid graph; those
/// are caught by to_nfg / validate.
///
///   {"format": 1,
///    "alphabets": [{"id": "A", "size": 4, "field": {"p": 2, "k": 2}}, ...],
///    "variables": [{"id": "x", "alphabet": "A", "kind": "internal"}, ...],
///    "factors": [{"id": "f", "ports": ["x", "y"], "values": [[re, im], ...]},
///                {"id": "g", "ports": ["x", "z", "w"], "builtin": "equality"}],
///    "prefactor": [re, im]}
///
/// Values are row-major with the last port fastest. A null real part stands
/// for +inf (the min-sum zero).
struct NfgDocument {
  struct AlphabetEntry {
    std::string id;
    std::size_t size = 0;
    std::optional<FieldStructure> field;
    friend bool operator==(const AlphabetEntry&, const AlphabetEntry&) = default;
  };
  struct VariableEntry {
    std::string id;
    std::string alphabet;
    VariableKind kind = VariableKind::kInternal;
    friend bool operator==(const VariableEntry&, const VariableEntry&) = default;
  };
  struct FactorEntry {
    std::string id;
    std::vector<std::string> ports;
    /// Builtin kind; when empty, `values` holds the dense table.
    std::string builtin;
    std::vector<Complex> values;
    friend bool operator==(const FactorEntry&, const FactorEntry&) = default;
  };

  int format = 1;
  std::vector<AlphabetEntry> alphabets;
  std::vector<VariableEntry> variables;
  std::vector<FactorEntry> factors;
  std::optional<Complex> prefactor;

  friend bool operator==(const NfgDocument&, const NfgDocument&) = default;
};

/// Throws ParseError on bad syntax (with line and column), unknown or
/// missing fields, dangling alphabet/variable references, builtin arity
/// errors and dense tables of the wrong length (with a JSON pointer).
NfgDocument parse_document(std::string_view text);

/// Canonical text: fixed field order, two-space indent, shortest
/// round-tripping doubles, trailing newline.
std::string serialize(const NfgDocument& document);

/// Builds the graph. Structure is not validated here.
Nfg to_nfg(const NfgDocument& document);

/// Dense document of a graph.
NfgDocument from_nfg(const Nfg& nfg);

NfgDocument read_document(const std::filesystem::path& path);
void write_document(const std::filesystem::path& path, const NfgDocument& document);

}  // namespace nfg
