#pragma once

#include "glcert/certificate.hpp"
#include "glcert/energy.hpp"
#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/lattice.hpp"
#include "glcert/minimizer.hpp"
#include "glcert/scaling.hpp"
#include "glcert/snapshot.hpp"
#include "glcert/state.hpp"
#include "glcert/version.hpp"
