#ifndef ECOGAME_ECOGAME_HPP
#define ECOGAME_ECOGAME_HPP

#include "ecogame/errors.hpp"
#include "ecogame/model.hpp"
#include "ecogame/numeric.hpp"
#include "ecogame/parallel.hpp"
#include "ecogame/dynamics.hpp"
#include "ecogame/equilibria.hpp"
#include "ecogame/exploit.hpp"
#include "ecogame/sensitivity.hpp"

#endif  // ECOGAME_ECOGAME_HPP
