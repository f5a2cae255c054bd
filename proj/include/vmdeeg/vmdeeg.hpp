#pragma once

#include "vmdeeg/features.hpp"
#include "vmdeeg/mlp.hpp"
#include "vmdeeg/pipeline.hpp"
#include "vmdeeg/signal.hpp"
#include "vmdeeg/spectral.hpp"
#include "vmdeeg/vmd.hpp"
