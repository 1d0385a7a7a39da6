#pragma once

#include <stdexcept>
#include <string>

namespace firesquad {

// Malformed or inconsistent input data (map, annotation, scenario files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simulation reached a non-finite state and cannot continue.
class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(const std::string &what, std::string snapshot)
      : std::runtime_error(what), snapshot_(std::move(snapshot)) {}

  const std::string &snapshot() const noexcept { return snapshot_; }

 private:
  std::string snapshot_;
};

}  // namespace firesquad
