#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torsionkit/words.hpp"

namespace torsionkit {

/// One emitted relator and the event that caused it. Producers with nothing
/// new to say at a step emit the empty word with cause "idle", so every
/// request for n items terminates.
struct Relator {
  Word word;
  std::string cause;

  friend bool operator==(const Relator&, const Relator&) = default;
};

/// Single-consumer position in a relator stream. Each call to `next` does a
/// bounded amount of work. std::nullopt means the stream is finite and has
/// ended.
class RelatorCursor {
 public:
  virtual ~RelatorCursor() = default;
  virtual std::optional<Relator> next() = 0;
};

/// Deterministic, restartable producer of relators. Every `open` starts a
/// fresh cursor, and two cursors agree item by item.
class RelatorStream {
 public:
  using Factory = std::function<std::unique_ptr<RelatorCursor>()>;

  RelatorStream() = default;
  RelatorStream(std::string description, Factory factory);

  /// Stream over a fixed list; cause of item i is "input <i>".
  static RelatorStream from_list(std::vector<Word> relators, std::string description = "finite");

  const std::string& description() const { return description_; }
  std::unique_ptr<RelatorCursor> open() const;
  /// First `n` items of a fresh cursor (fewer if the stream ends).
  std::vector<Relator> take(std::size_t n) const;

 private:
  std::string description_;
  Factory factory_;
};

/// Memoised prefix of a stream, shared by repeated queries against the same
/// presentation so expensive producers run once.
class StreamPrefix {
 public:
  explicit StreamPrefix(const RelatorStream& stream);

  /// Reads until `n` items are cached or the stream ends; returns the number
  /// cached.
  std::size_t extend_to(std::size_t n);
  bool finished() const { return finished_; }
  const std::vector<Relator>& items() const { return items_; }

 private:
  std::unique_ptr<RelatorCursor> cursor_;
  std::vector<Relator> items_;
  bool finished_ = false;
};

/// Cursor adaptor for lambdas that fill a buffer; `refill` appends zero or
/// more items and returns false once the stream has ended.
class BufferedCursor : public RelatorCursor {
 public:
  using Refill = std::function<bool(std::vector<Relator>&)>;
  explicit BufferedCursor(Refill refill) : refill_(std::move(refill)) {}
  std::optional<Relator> next() override;

 private:
  Refill refill_;
  std::vector<Relator> buffer_;
  std::size_t pos_ = 0;
  bool ended_ = false;
};

}  // namespace torsionkit
