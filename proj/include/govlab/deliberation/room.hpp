#pragma once

#include "govlab/core/clock.hpp"
#include "govlab/identity/identity.hpp"

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace govlab::deliberation {

using identity::Address;

inline constexpr std::size_t kDefaultRoomCapacity = 10;

struct RoomMessage {
  std::uint64_t seq = 0;  // per room, from 1, gapless
  Address author;
  std::string text;
  TimestampMs at = 0;
  friend bool operator==(const RoomMessage&, const RoomMessage&) = default;
};

/// Group chat room. The room is its own sequencer: seq assignment and
/// delivery to subscribers happen under one lock, so every subscriber sees
/// the same order.
class Room {
 public:
  using Subscriber = std::function<void(const RoomMessage&)>;

  Room(std::string id, std::string condition, std::size_t capacity, std::vector<std::string> suggested_topics);

  const std::string& id() const noexcept { return id_; }
  const std::string& condition() const noexcept { return condition_; }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::vector<std::string>& suggested_topics() const noexcept { return topics_; }

  /// Idempotent for existing members. Throws Conflict "ROOM_FULL".
  void join(const Address& member);
  void leave(const Address& member);
  bool is_member(const Address& member) const;
  std::set<Address> members() const;
  bool full() const;

  /// Throws Forbidden "NOT_MEMBER" or InvalidArgument "EMPTY_TEXT".
  RoomMessage post(const Address& author, const std::string& text, TimestampMs now);

  std::vector<RoomMessage> messages(std::uint64_t after = 0) const;
  /// Blocks until a message with seq > after exists or the timeout passes.
  std::vector<RoomMessage> wait_messages(std::uint64_t after, std::chrono::milliseconds timeout) const;

  /// Replays the existing backlog to the new subscriber before live messages.
  std::uint64_t subscribe(Subscriber subscriber);
  void unsubscribe(std::uint64_t token);

 private:
  std::string id_;
  std::string condition_;
  std::size_t capacity_;
  std::vector<std::string> topics_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::set<Address> members_;
  std::vector<RoomMessage> log_;
  std::map<std::uint64_t, Subscriber> subscribers_;
  std::uint64_t next_token_ = 1;
};

/// Fills rooms in arrival order within a condition; a new room opens when the current one is full.
class RoomDirectory {
 public:
  explicit RoomDirectory(std::size_t capacity = kDefaultRoomCapacity, std::vector<std::string> topics = {});

  /// Returns the room the member was placed in (the existing one if already placed).
  std::shared_ptr<Room> assign(const Address& member, const std::string& condition);
  std::shared_ptr<Room> room(const std::string& id) const;
  std::vector<std::shared_ptr<Room>> rooms() const;

 private:
  std::size_t capacity_;
  std::vector<std::string> topics_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Room>> rooms_;
  std::map<std::string, std::vector<std::string>> by_condition_;
  std::map<Address, std::string> placement_;
};

}  // namespace govlab::deliberation
