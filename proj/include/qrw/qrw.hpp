#pragma once

// Umbrella header for the two-state quantum walk library.

#include "qrw/absorption.hpp"
#include "qrw/coin.hpp"
#include "qrw/error.hpp"
#include "qrw/limit.hpp"
#include "qrw/pathsum.hpp"
#include "qrw/sampling.hpp"
#include "qrw/walk.hpp"
