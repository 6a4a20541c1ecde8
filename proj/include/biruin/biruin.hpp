#pragma once

#include "biruin/clayton.hpp"
#include "biruin/config.hpp"
#include "biruin/engine.hpp"
#include "biruin/errors.hpp"
#include "biruin/io.hpp"
#include "biruin/joint.hpp"
#include "biruin/marginal.hpp"
#include "biruin/oracle.hpp"
#include "biruin/real.hpp"
#include "biruin/reproduce.hpp"
#include "biruin/zeta.hpp"
