#pragma once

#include "chroma/bits.hpp"
#include "chroma/cayley.hpp"
#include "chroma/certificate.hpp"
#include "chroma/certify.hpp"
#include "chroma/coloring.hpp"
#include "chroma/distance.hpp"
#include "chroma/errors.hpp"
#include "chroma/graph.hpp"
#include "chroma/io.hpp"
