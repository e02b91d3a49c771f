#pragma once

#include <stdexcept>
#include <string>

namespace acedoe {

/// Invalid argument or violated precondition (bad dimensions, out-of-support data, bad config).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a finite result.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string estimator, const std::string& what)
      : std::runtime_error(estimator + ": " + what), estimator_(std::move(estimator)) {}

  const std::string& estimator() const noexcept { return estimator_; }

 private:
  std::string estimator_;
};

}  // namespace acedoe
