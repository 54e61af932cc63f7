#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "egb/cospan.hpp"
#include "egb/saturate.hpp"
#include "egb/signature.hpp"

namespace egb {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cospan JSON. With `canonical` the ids are renumbered densely first so
/// equal runs give identical bytes. The signature field is optional.
std::string to_json(const ExtendedCospan& c, const Signature* sig = nullptr, bool canonical = true);

/// Throws FormatError. Plain edge typing is read off the endpoint labels.
ExtendedCospan cospan_from_json(std::string_view text, Signature* sig = nullptr);
ExtendedCospan load_cospan(const std::string& path, Signature* sig = nullptr);

/// Graphviz export: boxes become clusters, e-box blocks nested clusters.
std::string to_dot(const ExtendedCospan& c, const std::string& name = "G");

std::string to_json(const SaturationReport& r);

}  // namespace egb
