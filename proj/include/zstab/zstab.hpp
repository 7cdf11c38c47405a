#pragma once

#include "zstab/corpus.hpp"
#include "zstab/error.hpp"
#include "zstab/isolation.hpp"
#include "zstab/polybound_trials.hpp"
#include "zstab/polynomial.hpp"
#include "zstab/rational.hpp"
#include "zstab/realfunc.hpp"
#include "zstab/rootfind.hpp"
#include "zstab/serialize.hpp"
#include "zstab/uniformbounds.hpp"
#include "zstab/zstability.hpp"
