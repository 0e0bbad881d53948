#pragma once

// Everything at once.

#include <salamander/errors.hpp>
#include <salamander/field.hpp>
#include <salamander/matrix.hpp>
#include <salamander/subquotient.hpp>
#include <salamander/grid.hpp>
#include <salamander/corners.hpp>
#include <salamander/theorems.hpp>
#include <salamander/total.hpp>
#include <salamander/construct.hpp>
#include <salamander/twist.hpp>
#include <salamander/nfold.hpp>
#include <salamander/io.hpp>
