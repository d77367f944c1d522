#pragma once

#include <stdexcept>
#include <string>

namespace porowave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MaterialError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class RiemannError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class PlaneWaveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace porowave
