#pragma once

#include <cstdint>
#include <vector>

#include "rnbpg/errors.hpp"

namespace rnbpg {

// Ring buffer over the last m+1 objective values; max() is the nonmonotone
// acceptance reference F(x^{l(k)}).
class ObjectiveWindow {
 public:
  explicit ObjectiveWindow(std::uint32_t m) : buf_(static_cast<std::size_t>(m) + 1) {}

  void push(double f) {
    buf_[head_] = f;
    head_ = (head_ + 1) % buf_.size();
    if (count_ < buf_.size()) ++count_;
  }

  double max() const {
    if (count_ == 0) throw Error(ErrorCode::logic, "objective window is empty");
    std::size_t at = oldest_index();
    double m = buf_[at];
    for (std::size_t i = 1; i < count_; ++i) {
      at = (at + 1) % buf_.size();
      if (buf_[at] > m) m = buf_[at];
    }
    return m;
  }

  double newest() const {
    if (count_ == 0) throw Error(ErrorCode::logic, "objective window is empty");
    return buf_[(head_ + buf_.size() - 1) % buf_.size()];
  }

  // oldest-first snapshot, for failure diagnostics
  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(count_);
    std::size_t at = oldest_index();
    for (std::size_t i = 0; i < count_; ++i) {
      out.push_back(buf_[at]);
      at = (at + 1) % buf_.size();
    }
    return out;
  }

  std::size_t size() const { return count_; }
  std::size_t capacity() const { return buf_.size(); }

 private:
  std::size_t oldest_index() const {
    return count_ < buf_.size() ? 0 : head_;
  }

  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

inline double window_max(const ObjectiveWindow& w) { return w.max(); }

}  // namespace rnbpg
