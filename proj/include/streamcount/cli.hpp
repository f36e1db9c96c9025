#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace streamcount {

// One line of "key=value" pairs separated by spaces. Keys keep insertion order.
class RunRecord {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  std::string to_line() const;
  // Throws Error(kParseError) on a token without '='.
  static RunRecord parse(const std::string& line);

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAborted = 3;

// Entry point behind the streamcount binary; args exclude the program name.
// Records go to out; diagnostics and wall time go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamcount
