#pragma once

#include <string>

#include "truecon/es.hpp"
#include "truecon/formats.hpp"
#include "truecon/net.hpp"
#include "truecon/tsi.hpp"

#ifndef TRUECON_FIXTURES
#error "TRUECON_FIXTURES must name the fixture directory"
#endif

namespace fx {

inline std::string path(const std::string& name) { return std::string(TRUECON_FIXTURES) + "/" + name; }
inline std::string text(const std::string& name) { return truecon::read_file(path(name)); }

// .tsi, .net or .es fixture as a TSI.
inline truecon::Tsi tsi(const std::string& name) {
    auto t = text(name);
    if (name.ends_with(".net")) return truecon::net_to_tsi(truecon::parse_net(t));
    if (name.ends_with(".es")) return truecon::es_to_tsi(truecon::parse_es(t));
    return truecon::parse_tsi(t);
}

} // namespace fx
