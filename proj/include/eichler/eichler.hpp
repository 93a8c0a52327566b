#pragma once

// umbrella header

#include "eichler/arith.hpp"
#include "eichler/cmfield.hpp"
#include "eichler/imagquad.hpp"
#include "eichler/linalg.hpp"
#include "eichler/oracle.hpp"
#include "eichler/orders.hpp"
#include "eichler/quaternion.hpp"
#include "eichler/realquad.hpp"
#include "eichler/report.hpp"
#include "eichler/verify.hpp"
