#pragma once

#include "gaborwf/atom.hpp"
#include "gaborwf/error.hpp"
#include "gaborwf/fourier.hpp"
#include "gaborwf/frames.hpp"
#include "gaborwf/grid.hpp"
#include "gaborwf/io.hpp"
#include "gaborwf/quadflow.hpp"
#include "gaborwf/stft.hpp"
#include "gaborwf/wavefront.hpp"
#include "gaborwf/window.hpp"
