#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace featrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;
using IndexList = std::vector<int>;

/// Raised for malformed inputs: bad files, dimension mismatches, values
/// outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot proceed on otherwise well-formed inputs.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { Binary, Multiclass };
enum class Variant { Current, Speed, Combined };
enum class Method { ReliefF, MRMR, Lasso, SpikeSlab, ArdLogistic };

inline constexpr Task kAllTasks[] = {Task::Binary, Task::Multiclass};
inline constexpr Variant kAllVariants[] = {Variant::Current, Variant::Speed,
                                           Variant::Combined};
inline constexpr Method kAllMethods[] = {Method::ArdLogistic, Method::SpikeSlab,
                                         Method::Lasso, Method::ReliefF,
                                         Method::MRMR};

// Config/CLI identifiers ("binary", "combined", "spike_slab", ...).
std::string_view to_string(Task t);
std::string_view to_string(Variant v);
std::string_view to_string(Method m);

std::optional<Task> parse_task(std::string_view s);
std::optional<Variant> parse_variant(std::string_view s);
std::optional<Method> parse_method(std::string_view s);

/// Short column labels used in rendered tables.
std::string_view display_name(Method m);

}  // namespace featrank
