#pragma once

#include <string>

#include "truecon/es.hpp"
#include "truecon/net.hpp"
#include "truecon/tsi.hpp"

namespace truecon {

// Line-oriented text formats; '#' starts a comment except as the separator of
// a `conflict a # b` line. Errors are ParseError with 1-based line/column.
Tsi parse_tsi(const std::string& text);
PetriNet parse_net(const std::string& text);
EventStructure parse_es(const std::string& text);

std::string write_tsi(const Tsi& t);
std::string write_net(const PetriNet& n);
std::string write_es(const EventStructure& e);

std::string read_file(const std::string& path);

} // namespace truecon
