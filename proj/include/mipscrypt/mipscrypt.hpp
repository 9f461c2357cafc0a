#pragma once

#include "mipscrypt/activity.hpp"
#include "mipscrypt/aes.hpp"
#include "mipscrypt/assembler.hpp"
#include "mipscrypt/cipher.hpp"
#include "mipscrypt/des.hpp"
#include "mipscrypt/error.hpp"
#include "mipscrypt/image.hpp"
#include "mipscrypt/isa.hpp"
#include "mipscrypt/machine.hpp"
#include "mipscrypt/pipeline.hpp"
#include "mipscrypt/power.hpp"
#include "mipscrypt/benchmark.hpp"
