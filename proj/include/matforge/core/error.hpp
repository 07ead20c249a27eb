// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace matforge {

/// Base of every error thrown by the library. Subclasses name the violated contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MATFORGE_DECLARE_ERROR(Name)            \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

MATFORGE_DECLARE_ERROR(InvalidArgument);
MATFORGE_DECLARE_ERROR(IoError);

// pbr
MATFORGE_DECLARE_ERROR(MixKindError);
MATFORGE_DECLARE_ERROR(MapShapeError);
MATFORGE_DECLARE_ERROR(EmptyLibraryError);

// procgen / render
MATFORGE_DECLARE_ERROR(GenerationError);
MATFORGE_DECLARE_ERROR(RenderError);

// simloss
MATFORGE_DECLARE_ERROR(CrossSetError);
MATFORGE_DECLARE_ERROR(NormError);
MATFORGE_DECLARE_ERROR(RoleOrderError);
MATFORGE_DECLARE_ERROR(SamplingError);
MATFORGE_DECLARE_ERROR(BatchSizeError);

// evalbench
MATFORGE_DECLARE_ERROR(EmptyMaskError);
MATFORGE_DECLARE_ERROR(IndexError);

// dataset
MATFORGE_DECLARE_ERROR(IncompleteSetError);
MATFORGE_DECLARE_ERROR(EmptyDatasetError);
MATFORGE_DECLARE_ERROR(ParseError);
MATFORGE_DECLARE_ERROR(SchemaVersionError);
MATFORGE_DECLARE_ERROR(ValidationError);

#undef MATFORGE_DECLARE_ERROR

}  // namespace matforge
