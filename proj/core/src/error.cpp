#include "factorbreak/error.hpp"

#include <exception>

namespace factorbreak {

void rethrow_with_context(const std::string& stage) {
  try {
    throw;
  } catch (const DegenerateVarianceError& e) {
    throw DegenerateVarianceError(stage + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(stage + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(stage + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(stage + ": " + e.what());
  }
}

}  // namespace factorbreak
