#pragma once

#include "nikishin/asymptotics.hpp"
#include "nikishin/config.hpp"
#include "nikishin/equilibrium.hpp"
#include "nikishin/hermite_pade.hpp"
#include "nikishin/recurrence.hpp"
#include "nikishin/second_kind.hpp"
