#include "torsionkit/stream.hpp"

#include <stdexcept>

namespace torsionkit {

RelatorStream::RelatorStream(std::string description, Factory factory)
    : description_(std::move(description)), factory_(std::move(factory)) {}

RelatorStream RelatorStream::from_list(std::vector<Word> relators, std::string description) {
  auto shared = std::make_shared<const std::vector<Word>>(std::move(relators));
  return RelatorStream(std::move(description), [shared] {
    std::size_t pos = 0;
    return std::make_unique<BufferedCursor>([shared, pos](std::vector<Relator>& out) mutable {
      if (pos >= shared->size()) return false;
      out.push_back({(*shared)[pos], "input " + std::to_string(pos)});
      ++pos;
      return true;
    });
  });
}

std::unique_ptr<RelatorCursor> RelatorStream::open() const {
  if (!factory_) throw std::logic_error("relator stream has no producer");
  return factory_();
}

std::vector<Relator> RelatorStream::take(std::size_t n) const {
  std::vector<Relator> out;
  auto cursor = open();
  while (out.size() < n) {
    auto item = cursor->next();
    if (!item) break;
    out.push_back(std::move(*item));
  }
  return out;
}

StreamPrefix::StreamPrefix(const RelatorStream& stream) : cursor_(stream.open()) {}

std::size_t StreamPrefix::extend_to(std::size_t n) {
  while (!finished_ && items_.size() < n) {
    auto item = cursor_->next();
    if (!item) {
      finished_ = true;
      cursor_.reset();
      break;
    }
    items_.push_back(std::move(*item));
  }
  return items_.size();
}

std::optional<Relator> BufferedCursor::next() {
  if (pos_ >= buffer_.size()) {
    if (ended_) return std::nullopt;
    buffer_.clear();
    pos_ = 0;
    ended_ = !refill_(buffer_);
    if (buffer_.empty()) {
      if (ended_) return std::nullopt;
      buffer_.push_back({Word{}, "idle"});
    }
  }
  return buffer_[pos_++];
}

}  // namespace torsionkit
