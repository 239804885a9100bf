#pragma once

#include "hitlog/piglite/interpreter.hpp"
#include "hitlog/piglite/relation.hpp"
#include "hitlog/piglite/syntax.hpp"
