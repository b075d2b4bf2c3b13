#pragma once

#include <string>

#include "ecoloom/config.hpp"
#include "ecoloom/errors.hpp"
#include "ecoloom/model.hpp"
#include "ecoloom/program.hpp"
#include "ecoloom/validate.hpp"

namespace ecoloom {

class CompileError : public Error {
 public:
  explicit CompileError(ValidationReport report)
      : Error("model failed validation:\n" + report.to_text()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Lowers a model into the engine's intermediate representation. Defaults
/// are applied first; throws CompileError if the model does not validate.
SimProgram compile(const ConceptualModel& m);

/// `<kind>-<source>[-<target>]`, lowercased, non-alphanumerics as hyphens.
std::string procedure_name(MethodKind kind, std::string_view source,
                           std::string_view target = {});

/// NetLogo-dialect source for the program. Pure: equal inputs give
/// byte-identical text. `cfg` supplies the world constants set in startup.
std::string emit_netlogo(const SimProgram& p, const EngineConfig& cfg = {});

/// JSON dump of the intermediate representation (the `--emit ir` backend).
std::string emit_ir(const SimProgram& p);

}  // namespace ecoloom
