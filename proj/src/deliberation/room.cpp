#include "govlab/deliberation/room.hpp"

#include "govlab/core/error.hpp"

namespace govlab::deliberation {

Room::Room(std::string id, std::string condition, std::size_t capacity, std::vector<std::string> suggested_topics)
    : id_(std::move(id)), condition_(std::move(condition)), capacity_(capacity), topics_(std::move(suggested_topics)) {
  if (capacity_ == 0) throw Error(ErrorKind::kInvalidArgument, "BAD_CAPACITY", "room capacity must be positive");
}

void Room::join(const Address& member) {
  std::lock_guard lock(mu_);
  if (members_.contains(member)) return;
  if (members_.size() >= capacity_) throw Error(ErrorKind::kConflict, "ROOM_FULL", "room " + id_ + " is full");
  members_.insert(member);
}

void Room::leave(const Address& member) {
  std::lock_guard lock(mu_);
  members_.erase(member);
}

bool Room::is_member(const Address& member) const {
  std::lock_guard lock(mu_);
  return members_.contains(member);
}

std::set<Address> Room::members() const {
  std::lock_guard lock(mu_);
  return members_;
}

bool Room::full() const {
  std::lock_guard lock(mu_);
  return members_.size() >= capacity_;
}

RoomMessage Room::post(const Address& author, const std::string& text, TimestampMs now) {
  if (text.empty()) throw Error(ErrorKind::kInvalidArgument, "EMPTY_TEXT", "message text is empty");
  std::lock_guard lock(mu_);
  if (!members_.contains(author)) {
    throw Error(ErrorKind::kForbidden, "NOT_MEMBER", author + " is not a member of room " + id_);
  }
  RoomMessage msg{log_.size() + 1, author, text, now};
  log_.push_back(msg);
  for (const auto& [_, sub] : subscribers_) sub(msg);
  cv_.notify_all();
  return msg;
}

std::vector<RoomMessage> Room::messages(std::uint64_t after) const {
  std::lock_guard lock(mu_);
  if (after >= log_.size()) return {};
  return {log_.begin() + static_cast<std::ptrdiff_t>(after), log_.end()};
}

std::vector<RoomMessage> Room::wait_messages(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return log_.size() > after; });
  if (after >= log_.size()) return {};
  return {log_.begin() + static_cast<std::ptrdiff_t>(after), log_.end()};
}

std::uint64_t Room::subscribe(Subscriber subscriber) {
  std::lock_guard lock(mu_);
  for (const auto& m : log_) subscriber(m);
  const auto token = next_token_++;
  subscribers_.emplace(token, std::move(subscriber));
  return token;
}

void Room::unsubscribe(std::uint64_t token) {
  std::lock_guard lock(mu_);
  subscribers_.erase(token);
}

RoomDirectory::RoomDirectory(std::size_t capacity, std::vector<std::string> topics)
    : capacity_(capacity), topics_(std::move(topics)) {}

std::shared_ptr<Room> RoomDirectory::assign(const Address& member, const std::string& condition) {
  std::lock_guard lock(mu_);
  if (auto it = placement_.find(member); it != placement_.end()) return rooms_.at(it->second);

  auto& ids = by_condition_[condition];
  std::shared_ptr<Room> target;
  if (!ids.empty() && !rooms_.at(ids.back())->full()) target = rooms_.at(ids.back());
  if (!target) {
    const std::string label = condition.empty() ? "room" : condition;
    std::string id = label + "-r" + std::to_string(ids.size() + 1);
    target = std::make_shared<Room>(id, condition, capacity_, topics_);
    rooms_.emplace(id, target);
    ids.push_back(id);
  }
  target->join(member);
  placement_.emplace(member, target->id());
  return target;
}

std::shared_ptr<Room> RoomDirectory::room(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = rooms_.find(id);
  if (it == rooms_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_ROOM", "unknown room '" + id + "'");
  return it->second;
}

std::vector<std::shared_ptr<Room>> RoomDirectory::rooms() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Room>> out;
  for (const auto& [_, r] : rooms_) out.push_back(r);
  return out;
}

}  // namespace govlab::deliberation
