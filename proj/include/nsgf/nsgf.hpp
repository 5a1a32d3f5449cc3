#pragma once

#include "nsgf/approx.hpp"
#include "nsgf/bapu.hpp"
#include "nsgf/corpus.hpp"
#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/fft.hpp"
#include "nsgf/frame.hpp"
#include "nsgf/io.hpp"
#include "nsgf/spaces.hpp"
#include "nsgf/svg.hpp"
