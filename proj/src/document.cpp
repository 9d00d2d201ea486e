#include "nfg/document.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "nfg/builtin_factors.hpp"
#include "nfg/errors.hpp"

namespace nfg {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string pointer(const std::string& base, std::string_view key) {
  return base + "/" + std::string(key);
}

std::string pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void require_object(const Json& j, const std::string& where,
                    std::initializer_list<std::string_view> required,
                    std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  for (auto key : required) {
    if (!j.contains(key)) throw ParseError(where.empty() ? "/" : where, "missing field '" + std::string(key) + "'");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : required) known = known || key == k;
    for (auto k : optional) known = known || key == k;
    if (!known) throw ParseError(pointer(where, key), "unknown field '" + key + "'");
  }
}

const Json& require_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  return j;
}

std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

long long require_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<long long>();
}

Complex require_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where, "expected a [re, im] pair");
  double re = 0.0;
  if (j[0].is_null()) {
    re = std::numeric_limits<double>::infinity();
  } else if (j[0].is_number()) {
    re = j[0].get<double>();
  } else {
    throw ParseError(pointer(where, 0), "expected a number or null");
  }
  if (!j[1].is_number()) throw ParseError(pointer(where, 1), "expected a number");
  return {re, j[1].get<double>()};
}

OrderedJson complex_json(Complex v) {
  OrderedJson re = std::isinf(v.real()) && v.real() > 0 ? OrderedJson(nullptr) : OrderedJson(v.real());
  return OrderedJson::array({re, v.imag()});
}

NfgDocument from_json(const Json& root) {
  require_object(root, "", {"format", "alphabets", "variables", "factors"}, {"prefactor"});
  NfgDocument doc;
  doc.format = static_cast<int>(require_integer(root["format"], "/format"));
  if (doc.format != 1) {
    throw ParseError("/format", "unsupported format " + std::to_string(doc.format));
  }

  std::unordered_map<std::string, std::size_t> alphabet_size;
  const auto& alphabets = require_array(root["alphabets"], "/alphabets");
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    const std::string where = pointer("/alphabets", i);
    const auto& a = alphabets[i];
    require_object(a, where, {"id", "size"}, {"field"});
    NfgDocument::AlphabetEntry entry;
    entry.id = require_string(a["id"], pointer(where, "id"));
    const long long size = require_integer(a["size"], pointer(where, "size"));
    if (size < 1) throw ParseError(pointer(where, "size"), "alphabet size must be positive");
    entry.size = static_cast<std::size_t>(size);
    if (a.contains("field")) {
      const std::string fw = pointer(where, "field");
      require_object(a["field"], fw, {"p", "k"});
      FieldStructure field;
      field.p = static_cast<int>(require_integer(a["field"]["p"], pointer(fw, "p")));
      field.k = static_cast<int>(require_integer(a["field"]["k"], pointer(fw, "k")));
      if (!is_prime(field.p)) throw ParseError(pointer(fw, "p"), "p must be prime");
      if (field.k < 1) throw ParseError(pointer(fw, "k"), "k must be positive");
      std::size_t expected = 1;
      for (int t = 0; t < field.k; ++t) expected *= static_cast<std::size_t>(field.p);
      if (expected != entry.size) {
        throw ParseError(pointer(where, "size"), "size " + std::to_string(entry.size) +
                                                     " does not equal p^k = " +
                                                     std::to_string(expected));
      }
      entry.field = field;
    }
    if (alphabet_size.count(entry.id)) {
      throw ParseError(pointer(where, "id"), "duplicate alphabet '" + entry.id + "'");
    }
    alphabet_size[entry.id] = entry.size;
    doc.alphabets.push_back(std::move(entry));
  }

  std::unordered_map<std::string, std::string> variable_alphabet;
  const auto& variables = require_array(root["variables"], "/variables");
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const std::string where = pointer("/variables", i);
    const auto& v = variables[i];
    require_object(v, where, {"id", "alphabet", "kind"});
    NfgDocument::VariableEntry entry;
    entry.id = require_string(v["id"], pointer(where, "id"));
    entry.alphabet = require_string(v["alphabet"], pointer(where, "alphabet"));
    if (!alphabet_size.count(entry.alphabet)) {
      throw ParseError(pointer(where, "alphabet"), "undeclared alphabet '" + entry.alphabet + "'");
    }
    const std::string kind = require_string(v["kind"], pointer(where, "kind"));
    if (kind == "internal") {
      entry.kind = VariableKind::kInternal;
    } else if (kind == "external") {
      entry.kind = VariableKind::kExternal;
    } else {
      throw ParseError(pointer(where, "kind"), "kind must be 'internal' or 'external', got '" +
                                                   kind + "'");
    }
    variable_alphabet[entry.id] = entry.alphabet;
    doc.variables.push_back(std::move(entry));
  }

  std::unordered_map<std::string, const NfgDocument::AlphabetEntry*> alphabet_entry;
  for (const auto& a : doc.alphabets) alphabet_entry[a.id] = &a;

  const auto& factors = require_array(root["factors"], "/factors");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string where = pointer("/factors", i);
    const auto& f = factors[i];
    require_object(f, where, {"id", "ports"}, {"builtin", "values"});
    NfgDocument::FactorEntry entry;
    entry.id = require_string(f["id"], pointer(where, "id"));
    const auto& ports = require_array(f["ports"], pointer(where, "ports"));
    std::vector<Alphabet> port_alphabets;
    std::size_t volume = 1;
    for (std::size_t p = 0; p < ports.size(); ++p) {
      const std::string pw = pointer(pointer(where, "ports"), p);
      std::string port = require_string(ports[p], pw);
      const auto it = variable_alphabet.find(port);
      if (it == variable_alphabet.end()) {
        throw ParseError(pw, "factor '" + entry.id + "' references undeclared variable '" + port +
                                 "'");
      }
      const auto* a = alphabet_entry.at(it->second);
      port_alphabets.push_back(a->field ? Alphabet(a->id, *a->field) : Alphabet(a->id, a->size));
      volume *= a->size;
      entry.ports.push_back(std::move(port));
    }

    const bool has_builtin = f.contains("builtin");
    if (has_builtin == f.contains("values")) {
      throw ParseError(where, "factor '" + entry.id + "' needs exactly one of 'builtin' and 'values'");
    }
    if (has_builtin) {
      const std::string bw = pointer(where, "builtin");
      entry.builtin = require_string(f["builtin"], bw);
      try {
        make_builtin(entry.builtin, port_alphabets);
      } catch (const ContractViolation& e) {
        throw ParseError(bw, e.what());
      }
    } else {
      const std::string vw = pointer(where, "values");
      const auto& values = require_array(f["values"], vw);
      if (values.size() != volume) {
        throw ParseError(vw, "factor '" + entry.id + "' has " + std::to_string(values.size()) +
                                 " values, its ports require " + std::to_string(volume));
      }
      entry.values.reserve(volume);
      for (std::size_t k = 0; k < values.size(); ++k) {
        entry.values.push_back(require_complex(values[k], pointer(vw, k)));
      }
    }
    doc.factors.push_back(std::move(entry));
  }

  if (root.contains("prefactor")) doc.prefactor = require_complex(root["prefactor"], "/prefactor");
  return doc;
}

}  // namespace

NfgDocument parse_document(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line..." prefix.
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(line_column(text, e.byte), what);
  }
  return from_json(root);
}

std::string serialize(const NfgDocument& document) {
  OrderedJson root;
  root["format"] = document.format;
  root["alphabets"] = OrderedJson::array();
  for (const auto& a : document.alphabets) {
    OrderedJson entry;
    entry["id"] = a.id;
    entry["size"] = a.size;
    if (a.field) entry["field"] = {{"p", a.field->p}, {"k", a.field->k}};
    root["alphabets"].push_back(std::move(entry));
  }
  root["variables"] = OrderedJson::array();
  for (const auto& v : document.variables) {
    OrderedJson entry;
    entry["id"] = v.id;
    entry["alphabet"] = v.alphabet;
    entry["kind"] = std::string(to_string(v.kind));
    root["variables"].push_back(std::move(entry));
  }
  root["factors"] = OrderedJson::array();
  for (const auto& f : document.factors) {
    OrderedJson entry;
    entry["id"] = f.id;
    entry["ports"] = f.ports;
    if (!f.builtin.empty()) {
      entry["builtin"] = f.builtin;
    } else {
      entry["values"] = OrderedJson::array();
      for (const auto& v : f.values) entry["values"].push_back(complex_json(v));
    }
    root["factors"].push_back(std::move(entry));
  }
  if (document.prefactor) root["prefactor"] = complex_json(*document.prefactor);
  return root.dump(2) + "\n";
}

Nfg to_nfg(const NfgDocument& document) {
  Nfg nfg;
  for (const auto& a : document.alphabets) {
    nfg.add_alphabet(a.field ? Alphabet(a.id, *a.field) : Alphabet(a.id, a.size));
  }
  for (const auto& v : document.variables) nfg.add_variable(v.id, v.alphabet, v.kind);
  for (const auto& f : document.factors) {
    if (f.builtin.empty()) {
      nfg.add_factor(f.id, f.ports, f.values);
      continue;
    }
    std::vector<Alphabet> ports;
    for (const auto& p : f.ports) ports.push_back(nfg.alphabet_of(p));
    nfg.add_factor(f.id, f.ports, make_builtin(f.builtin, ports));
  }
  nfg.set_prefactor(document.prefactor);
  return nfg;
}

NfgDocument from_nfg(const Nfg& nfg) {
  NfgDocument doc;
  for (const auto& a : nfg.alphabets()) doc.alphabets.push_back({a.id(), a.size(), a.field()});
  for (const auto& v : nfg.variables()) doc.variables.push_back({v.id, v.alphabet, v.kind});
  for (const auto& f : nfg.factors()) doc.factors.push_back({f.id, f.ports, "", f.table.values()});
  doc.prefactor = nfg.prefactor();
  return doc;
}

NfgDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_document(text.str());
}

void write_document(const std::filesystem::path& path, const NfgDocument& document) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << serialize(document);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace nfg
