#pragma once

#include "nilmult/abelian.hpp"
#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/fng.hpp"
#include "nilmult/hall.hpp"
#include "nilmult/multipliers.hpp"
#include "nilmult/oracle.hpp"
#include "nilmult/serialize.hpp"
#include "nilmult/smith.hpp"
#include "nilmult/witt.hpp"
