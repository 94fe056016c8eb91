#pragma once

#include <stdexcept>
#include <string>

namespace magsphere {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// q left [eps_q, pi - eps_q] during a flow or evaluation.
class CollisionApproach : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// The general m2 formula is indeterminate at q = pi/2.
class NearRightAngle : public Error {
public:
    using Error::Error;
};

class NoAdmissibleRoot : public Error {
public:
    using Error::Error;
};

class ResidualTooLarge : public Error {
public:
    using Error::Error;
};

class OutsideDomain : public Error {
public:
    using Error::Error;
};

class DegeneratePoint : public Error {
public:
    using Error::Error;
};

/// q1 = +-q2, the reduced frame is undefined.
class DegenerateConfiguration : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

} // namespace magsphere
