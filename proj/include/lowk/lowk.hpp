#pragma once

#include "lowk/errors.hpp"
#include "lowk/laurent.hpp"
#include "lowk/potential.hpp"
#include "lowk/brackets.hpp"
#include "lowk/coeffgen.hpp"
#include "lowk/oracle.hpp"
#include "lowk/assembler.hpp"
