#pragma once
// Core model of a collaborative tagging community.
//
// A community is the set of (user, tag, item, timestamp) events plus six
// inverted views (user->items, user->tags, item->users, item->tags,
// tag->users, tag->items).  Entities are interned to dense ordinals; all
// analyses downstream work on ordinals and only the ingest/CLI layers see
// the raw labels again.
//
// Construction canonicalizes the event stream: labels are trimmed, exact
// duplicate events collapse to one, and events are ordered by
// (timestamp, user, tag, item) label tuples.  The built Community is
// therefore a pure function of the event *set* -- any permutation of the
// input yields an identical object -- and it is immutable afterwards.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "folkstat/errors.hpp"

namespace folkstat {

struct UserId {
    std::uint32_t value = 0;
    friend bool operator==(UserId, UserId) = default;
    friend auto operator<=>(UserId, UserId) = default;
};
struct ItemId {
    std::uint32_t value = 0;
    friend bool operator==(ItemId, ItemId) = default;
    friend auto operator<=>(ItemId, ItemId) = default;
};
struct TagId {
    std::uint32_t value = 0;
    friend bool operator==(TagId, TagId) = default;
    friend auto operator<=>(TagId, TagId) = default;
};

// One tagging event, label form. This is what ingest and the generator
// produce and what Community::build consumes.
struct Assignment {
    std::string user;
    std::string tag;
    std::string item;
    std::int64_t timestamp = 0;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// One tagging event, interned form.
struct TagAssignment {
    UserId user;
    TagId tag;
    ItemId item;
    std::int64_t timestamp = 0;

    friend bool operator==(const TagAssignment&, const TagAssignment&) = default;
};

struct SummaryStats {
    std::size_t num_users = 0;
    std::size_t num_items = 0;
    std::size_t num_tags = 0;
    std::size_t num_assignments = 0;

    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

inline std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n\f\v";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos)
        return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

class Community {
public:
    Community() = default;

    static Community build(std::span<const Assignment> input);

    std::span<const TagAssignment> assignments() const { return assignments_; }

    std::size_t num_users() const { return user_labels_.size(); }
    std::size_t num_items() const { return item_labels_.size(); }
    std::size_t num_tags() const { return tag_labels_.size(); }
    bool empty() const { return assignments_.empty(); }

    SummaryStats summary() const {
        return {num_users(), num_items(), num_tags(), assignments_.size()};
    }

    // The six indexes. Entries are sorted ascending by ordinal.
    const std::vector<ItemId>& items_of(UserId u) const { return user_items_[check(u)]; }
    const std::vector<TagId>& tags_of(UserId u) const { return user_tags_[check(u)]; }
    const std::vector<UserId>& users_of(ItemId i) const { return item_users_[check(i)]; }
    const std::vector<TagId>& tags_of(ItemId i) const { return item_tags_[check(i)]; }
    const std::vector<UserId>& users_of(TagId t) const { return tag_users_[check(t)]; }
    const std::vector<ItemId>& items_of(TagId t) const { return tag_items_[check(t)]; }

    // The (I_k, T_k) pair of one user.
    std::pair<std::span<const ItemId>, std::span<const TagId>> user_view(UserId u) const {
        return {items_of(u), tags_of(u)};
    }

    const std::string& label(UserId u) const { return user_labels_[check(u)]; }
    const std::string& label(ItemId i) const { return item_labels_[check(i)]; }
    const std::string& label(TagId t) const { return tag_labels_[check(t)]; }

    std::optional<UserId> find_user(std::string_view raw) const {
        auto it = user_lookup_.find(std::string(trim(raw)));
        if (it == user_lookup_.end())
            return std::nullopt;
        return UserId{it->second};
    }

    friend bool operator==(const Community& a, const Community& b) {
        return a.assignments_ == b.assignments_ && a.user_labels_ == b.user_labels_ &&
               a.item_labels_ == b.item_labels_ && a.tag_labels_ == b.tag_labels_;
    }

private:
    std::uint32_t check(UserId u) const {
        if (u.value >= user_labels_.size())
            throw unknown_entity_error("unknown user ordinal " + std::to_string(u.value));
        return u.value;
    }
    std::uint32_t check(ItemId i) const {
        if (i.value >= item_labels_.size())
            throw unknown_entity_error("unknown item ordinal " + std::to_string(i.value));
        return i.value;
    }
    std::uint32_t check(TagId t) const {
        if (t.value >= tag_labels_.size())
            throw unknown_entity_error("unknown tag ordinal " + std::to_string(t.value));
        return t.value;
    }

    std::vector<TagAssignment> assignments_;

    std::vector<std::string> user_labels_, item_labels_, tag_labels_;
    std::unordered_map<std::string, std::uint32_t> user_lookup_, item_lookup_, tag_lookup_;

    std::vector<std::vector<ItemId>> user_items_;
    std::vector<std::vector<TagId>> user_tags_;
    std::vector<std::vector<UserId>> item_users_;
    std::vector<std::vector<TagId>> item_tags_;
    std::vector<std::vector<UserId>> tag_users_;
    std::vector<std::vector<ItemId>> tag_items_;
};

inline Community Community::build(std::span<const Assignment> input) {
    struct Event {
        std::string user, tag, item;
        std::int64_t timestamp;
    };

    std::vector<Event> events;
    events.reserve(input.size());
    for (const Assignment& a : input) {
        Event e{std::string(trim(a.user)), std::string(trim(a.tag)), std::string(trim(a.item)),
                a.timestamp};
        if (e.user.empty() || e.tag.empty() || e.item.empty())
            throw validation_error("assignment with empty label");
        if (e.timestamp < 0)
            throw validation_error("assignment with negative timestamp");
        events.push_back(std::move(e));
    }

    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        return std::tie(x.timestamp, x.user, x.tag, x.item) <
               std::tie(y.timestamp, y.user, y.tag, y.item);
    });
    events.erase(std::unique(events.begin(), events.end(),
                             [](const Event& x, const Event& y) {
                                 return x.timestamp == y.timestamp && x.user == y.user &&
                                        x.tag == y.tag && x.item == y.item;
                             }),
                 events.end());

    Community c;
    auto intern = [](std::vector<std::string>& labels,
                     std::unordered_map<std::string, std::uint32_t>& lookup,
                     const std::string& label) -> std::uint32_t {
        auto [it, inserted] = lookup.try_emplace(label, static_cast<std::uint32_t>(labels.size()));
        if (inserted)
            labels.push_back(label);
        return it->second;
    };

    c.assignments_.reserve(events.size());
    for (const Event& e : events) {
        TagAssignment a;
        a.user = UserId{intern(c.user_labels_, c.user_lookup_, e.user)};
        a.tag = TagId{intern(c.tag_labels_, c.tag_lookup_, e.tag)};
        a.item = ItemId{intern(c.item_labels_, c.item_lookup_, e.item)};
        a.timestamp = e.timestamp;
        c.assignments_.push_back(a);
    }

    c.user_items_.resize(c.user_labels_.size());
    c.user_tags_.resize(c.user_labels_.size());
    c.item_users_.resize(c.item_labels_.size());
    c.item_tags_.resize(c.item_labels_.size());
    c.tag_users_.resize(c.tag_labels_.size());
    c.tag_items_.resize(c.tag_labels_.size());

    for (const TagAssignment& a : c.assignments_) {
        c.user_items_[a.user.value].push_back(a.item);
        c.user_tags_[a.user.value].push_back(a.tag);
        c.item_users_[a.item.value].push_back(a.user);
        c.item_tags_[a.item.value].push_back(a.tag);
        c.tag_users_[a.tag.value].push_back(a.user);
        c.tag_items_[a.tag.value].push_back(a.item);
    }

    auto sort_unique = [](auto& index) {
        for (auto& entry : index) {
            std::sort(entry.begin(), entry.end());
            entry.erase(std::unique(entry.begin(), entry.end()), entry.end());
        }
    };
    sort_unique(c.user_items_);
    sort_unique(c.user_tags_);
    sort_unique(c.item_users_);
    sort_unique(c.item_tags_);
    sort_unique(c.tag_users_);
    sort_unique(c.tag_items_);

    return c;
}

inline Community build_community(std::span<const Assignment> input) {
    return Community::build(input);
}

} // namespace folkstat
