#pragma once

#include "coexkit/linalg.hpp"
#include "coexkit/povm.hpp"
#include "coexkit/simplex.hpp"
#include "coexkit/coexistence.hpp"
#include "coexkit/moments.hpp"
#include "coexkit/phasespace.hpp"
#include "coexkit/qubit_models.hpp"
