#include "meditools/session/store.hpp"

#include "meditools/error.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace meditools::session {

namespace {

void validate(const SessionKey& key)
{
    if (key.session_id.empty() || key.ns.empty() || key.key.empty())
        throw Error(ErrorCode::InvalidRequest, "session key parts must be nonempty");
}

std::string random_token()
{
    static thread_local std::random_device device;
    static constexpr char kHex[] = "0123456789abcdef";
    std::string token;
    token.reserve(32);
    for (int i = 0; i < 4; ++i) {
        auto word = device();
        for (int j = 0; j < 8; ++j) {
            token.push_back(kHex[word & 0xF]);
            word >>= 4;
        }
    }
    return token;
}

[[noreturn]] void unknown_session(const std::string& session_id)
{
    // The token itself is a credential; report only its length.
    throw Error(ErrorCode::UnknownSession, "unknown or expired session",
                {{"token_length", session_id.size()}});
}

} // namespace

SessionStore::SessionStore() : SessionStore(Options{}) {}

SessionStore::SessionStore(Options options) : options_(std::move(options)) {}

bool SessionStore::expired(const Session& session, Clock::time_point now) const
{
    return now - session.last_access > options_.idle_ttl;
}

std::string SessionStore::create_session()
{
    auto session = std::make_shared<Session>();
    session->last_access = options_.now();
    std::unique_lock lock(mutex_);
    std::string token;
    do {
        token = random_token();
    } while (sessions_.count(token));
    sessions_.emplace(token, std::move(session));
    return token;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& session_id) const
{
    std::shared_ptr<Session> session;
    {
        std::shared_lock lock(mutex_);
        auto it = sessions_.find(session_id);
        if (it == sessions_.end())
            unknown_session(session_id);
        session = it->second;
    }
    const auto now = options_.now();
    std::lock_guard guard(session->mutex);
    if (expired(*session, now))
        unknown_session(session_id);
    session->last_access = now;
    return session;
}

bool SessionStore::exists(const std::string& session_id) const
{
    try {
        find(session_id);
        return true;
    } catch (const Error&) {
        return false;
    }
}

void SessionStore::put(const SessionKey& key, StateValue value)
{
    validate(key);
    auto session = find(key.session_id);
    std::lock_guard guard(session->mutex);
    session->namespaces[key.ns][key.key] = std::move(value);
}

std::optional<StateValue> SessionStore::get(const SessionKey& key) const
{
    validate(key);
    auto session = find(key.session_id);
    std::lock_guard guard(session->mutex);
    auto ns = session->namespaces.find(key.ns);
    if (ns == session->namespaces.end())
        return std::nullopt;
    auto it = ns->second.find(key.key);
    if (it == ns->second.end())
        return std::nullopt;
    return it->second;
}

bool SessionStore::erase(const SessionKey& key)
{
    validate(key);
    auto session = find(key.session_id);
    std::lock_guard guard(session->mutex);
    auto ns = session->namespaces.find(key.ns);
    return ns != session->namespaces.end() && ns->second.erase(key.key) > 0;
}

std::size_t SessionStore::reset_namespace(const std::string& session_id, const std::string& ns)
{
    auto session = find(session_id);
    std::lock_guard guard(session->mutex);
    auto it = session->namespaces.find(ns);
    if (it == session->namespaces.end())
        return 0;
    const std::size_t removed = it->second.size();
    session->namespaces.erase(it);
    return removed;
}

std::vector<std::string> SessionStore::keys(const std::string& session_id, const std::string& ns) const
{
    auto session = find(session_id);
    std::lock_guard guard(session->mutex);
    std::vector<std::string> out;
    if (auto it = session->namespaces.find(ns); it != session->namespaces.end())
        for (const auto& entry : it->second)
            out.push_back(entry.first);
    return out;
}

NamespaceLock SessionStore::lock_namespace(const std::string& session_id, const std::string& ns)
{
    std::shared_ptr<std::mutex> mutex;
    {
        auto session = find(session_id);
        std::lock_guard guard(session->mutex);
        auto& slot = session->ns_locks[ns];
        if (!slot)
            slot = std::make_shared<std::mutex>();
        mutex = slot;
    }
    return NamespaceLock(std::move(mutex));
}

std::size_t SessionStore::evict_idle()
{
    const auto now = options_.now();
    std::unique_lock lock(mutex_);
    return std::erase_if(sessions_, [&](const auto& entry) {
        std::lock_guard guard(entry.second->mutex);
        return expired(*entry.second, now);
    });
}

std::size_t SessionStore::size() const
{
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

void SessionStore::save_snapshot(const std::filesystem::path& file) const
{
    nlohmann::json doc = {{"version", 1}, {"sessions", nlohmann::json::object()}};
    {
        std::shared_lock lock(mutex_);
        for (const auto& [id, session] : sessions_) {
            std::lock_guard guard(session->mutex);
            nlohmann::json namespaces = nlohmann::json::object();
            for (const auto& [ns, entries] : session->namespaces) {
                nlohmann::json values = nlohmann::json::object();
                for (const auto& [key, value] : entries)
                    values[key] = to_json(value);
                namespaces[ns] = std::move(values);
            }
            doc["sessions"][id] = {
                {"last_access_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                       session->last_access.time_since_epoch())
                                       .count()},
                {"namespaces", std::move(namespaces)}};
        }
    }
    if (file.has_parent_path())
        std::filesystem::create_directories(file.parent_path());
    const auto tmp = std::filesystem::path(file.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::Internal, "cannot write session snapshot " + tmp.string());
        out << doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    }
    std::filesystem::rename(tmp, file);
}

std::size_t SessionStore::load_snapshot(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Internal, "cannot read session snapshot " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    std::map<std::string, std::shared_ptr<Session>> loaded;
    try {
        const auto doc = nlohmann::json::parse(buf.str());
        for (const auto& [id, entry] : doc.at("sessions").items()) {
            auto session = std::make_shared<Session>();
            session->last_access = Clock::time_point(
                std::chrono::duration_cast<Clock::duration>(
                    std::chrono::milliseconds(entry.at("last_access_ms").get<std::int64_t>())));
            for (const auto& [ns, values] : entry.at("namespaces").items())
                for (const auto& [key, value] : values.items())
                    session->namespaces[ns].emplace(key, from_json(value));
            loaded.emplace(id, std::move(session));
        }
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Internal, "corrupt session snapshot " + file.string() + ": " + e.what());
    }

    std::unique_lock lock(mutex_);
    sessions_ = std::move(loaded);
    return sessions_.size();
}

} // namespace meditools::session
