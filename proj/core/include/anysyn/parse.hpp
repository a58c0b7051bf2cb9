#ifndef ANYSYN_PARSE_HPP
#define ANYSYN_PARSE_HPP

#include <string>
#include <string_view>

#include "anysyn/dfa.hpp"
#include "anysyn/model.hpp"

namespace anysyn {

/// Parses and validates a component file (kind dfts | mc | mdp).
Component parse_component(std::string_view text);

/// Parses and validates a specification automaton file (kind dfa).
Dfa parse_dfa(std::string_view text);

/// File-reading wrappers; diagnostics are prefixed with the path.
Component load_component(const std::string& path);
Dfa load_dfa(const std::string& path);

/// Canonical text form; parse(render(c)) reproduces c exactly.
std::string render_component(const Dfts& t);
std::string render_component(const Mc& m);
std::string render_component(const Mdp& m);
std::string render_component(const Component& c);

} // namespace anysyn

#endif
