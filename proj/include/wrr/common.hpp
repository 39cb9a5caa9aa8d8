#ifndef WRR_COMMON_HPP
#define WRR_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wrr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Relative tolerance deciding when two vector lengths count as tied.
// Every tie-sensitive comparison in the library goes through this constant.
inline constexpr double kTieTol = 1e-9;

// Error with a stable machine-readable name next to the human message.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& msg)
      : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& msg) {
  throw Error(name, msg);
}

inline bool lex_less(const IVec& a, const IVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Canonical representative of the pair {v, -v}: first nonzero entry positive.
inline IVec canonical_rep(const IVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return v[i] > 0 ? v : IVec(-v);
  }
  return v;
}

inline bool is_canonical(const IVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return v[i] > 0;
  }
  return false;
}

}  // namespace wrr

#endif
