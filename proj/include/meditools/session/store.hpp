#pragma once

#include "meditools/session/state_value.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace meditools::session {

struct SessionKey {
    std::string session_id;
    std::string ns;
    std::string key;
};

/// Held for the duration of a multi-step update to one (session, namespace)
/// so that, for example, a case reset cannot interleave with a chat append.
class NamespaceLock {
public:
    explicit NamespaceLock(std::shared_ptr<std::mutex> mutex)
        : mutex_(std::move(mutex)), lock_(*mutex_)
    {
    }

private:
    std::shared_ptr<std::mutex> mutex_;
    std::unique_lock<std::mutex> lock_;
};

/// In-memory, per-session namespaced key/value state.
///
/// Sessions idle longer than the TTL are evicted and then behave exactly like
/// sessions that never existed (UnknownSession). Individual get/put calls are
/// atomic; callers that read-modify-write hold lock_namespace().
class SessionStore {
public:
    using Clock = std::chrono::system_clock;

    struct Options {
        std::chrono::seconds idle_ttl = std::chrono::hours(24);
        std::function<Clock::time_point()> now = [] { return Clock::now(); };
    };

    SessionStore();
    explicit SessionStore(Options options);

    /// Issues a fresh opaque token.
    std::string create_session();
    bool exists(const std::string& session_id) const;

    void put(const SessionKey& key, StateValue value);
    std::optional<StateValue> get(const SessionKey& key) const;
    bool erase(const SessionKey& key);

    /// Removes every key in the namespace; returns how many there were.
    std::size_t reset_namespace(const std::string& session_id, const std::string& ns);

    /// Sorted key names currently set in the namespace.
    std::vector<std::string> keys(const std::string& session_id, const std::string& ns) const;

    NamespaceLock lock_namespace(const std::string& session_id, const std::string& ns);

    std::size_t evict_idle();
    std::size_t size() const;

    void save_snapshot(const std::filesystem::path& file) const;
    /// Replaces current contents with the snapshot; returns sessions loaded.
    std::size_t load_snapshot(const std::filesystem::path& file);

private:
    struct Session {
        mutable std::mutex mutex;
        std::map<std::string, std::map<std::string, StateValue>> namespaces;
        std::map<std::string, std::shared_ptr<std::mutex>> ns_locks;
        mutable Clock::time_point last_access;
    };

    std::shared_ptr<Session> find(const std::string& session_id) const;
    bool expired(const Session& session, Clock::time_point now) const;

    Options options_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

} // namespace meditools::session
