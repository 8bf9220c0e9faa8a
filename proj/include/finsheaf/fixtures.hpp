#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finsheaf/etale.hpp"
#include "finsheaf/presheaf.hpp"

namespace finsheaf::fixtures {

/// Points a, b; opens {}, {a}, {a,b}.
SpacePtr sierpinski();
/// Discrete on p, q.
SpacePtr two_points();
/// The one-point space on *.
SpacePtr point();
/// Points a, b, c, d with minimal opens {a}, {b}, {a,b,c}, {d}.
SpacePtr mixed4();

/// Base SIERP; S({})={*}, S({a})={f,g}, S(X)={h}; h restricts to f.
PresheafPtr p1();
/// Base DISC2; {0,1} on every open, identity restrictions.
PresheafPtr const2();
/// Base DISC2; S({p})=S({q})={0,1}, S(X)={c} restricting to 0 on both.
PresheafPtr gluefail();
/// Base DISC2; S(X)={s,t}, singletons elsewhere.
PresheafPtr s1fail();

using NamedPresheaf = std::pair<std::string, PresheafPtr>;
using NamedSheaf = std::pair<std::string, SheafPtr>;
using NamedSpace = std::pair<std::string, SpacePtr>;

/// P1, CONST2, GLUEFAIL, S1FAIL.
std::vector<NamedPresheaf> presheaves();
std::vector<NamedSpace> spaces();
/// Sheafifications of the four presheaf fixtures.
std::vector<NamedSheaf> sheaves();

std::vector<std::string> values(std::size_t m);

}  // namespace finsheaf::fixtures
