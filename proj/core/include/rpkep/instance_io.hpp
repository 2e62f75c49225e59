#ifndef RPKEP_INSTANCE_IO_HPP
#define RPKEP_INSTANCE_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rpkep/instance.hpp"

namespace rpkep::io {

inline constexpr const char* kSchemaVersion = "1";

/// Schema violation; `locus` is a JSON-pointer-style path into the document.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string locus, std::string code, std::string detail);
  const std::string locus;
  const std::string code;
};

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::ordered_json instance_to_json(const Instance& inst);

Instance read_instance(const std::filesystem::path& path);

/// Canonical field ordering, UTF-8, write-to-temp + rename.
void write_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace rpkep::io

#endif
