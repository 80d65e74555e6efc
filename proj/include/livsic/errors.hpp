#pragma once

#include <stdexcept>
#include <string>

namespace livsic {

/// Base class of all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NewtonDivergence : public Error {
public:
    explicit NewtonDivergence(const std::string& what) : Error(what) {}
};

class EnumerationOverflow : public Error {
public:
    explicit EnumerationOverflow(const std::string& what) : Error(what) {}
};

class BasisMismatch : public Error {
public:
    explicit BasisMismatch(const std::string& what) : Error(what) {}
};

class NonRealObservable : public Error {
public:
    explicit NonRealObservable(const std::string& what) : Error(what) {}
};

class IncompatiblePair : public Error {
public:
    explicit IncompatiblePair(const std::string& what) : Error(what) {}
};

class DegenerateLeadingEigenvalue : public Error {
public:
    explicit DegenerateLeadingEigenvalue(const std::string& what) : Error(what) {}
};

class ContourCrossesSpectrum : public Error {
public:
    explicit ContourCrossesSpectrum(const std::string& what) : Error(what) {}
};

class WrongEnclosedCount : public Error {
public:
    explicit WrongEnclosedCount(const std::string& what) : Error(what) {}
};

class ProjectionKilledChi : public Error {
public:
    explicit ProjectionKilledChi(const std::string& what) : Error(what) {}
};

class DensityVanishes : public Error {
public:
    explicit DensityVanishes(const std::string& what) : Error(what) {}
};

class SingularResolvent : public Error {
public:
    explicit SingularResolvent(const std::string& what) : Error(what) {}
};

class BranchExplosion : public Error {
public:
    explicit BranchExplosion(const std::string& what) : Error(what) {}
};

class NoneCertified : public Error {
public:
    explicit NoneCertified(const std::string& what) : Error(what) {}
};

class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& what) : Error(what) {}
};

} // namespace livsic
