// p-adic arithmetic coding: grid/path primitives, digit streams, models and
// the encoder/decoder.
#pragma once

#include "padic/codec.hpp"
#include "padic/core.hpp"
#include "padic/digitio.hpp"
#include "padic/models.hpp"
