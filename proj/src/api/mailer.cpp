#include "meditools/api/mailer.hpp"

#include "meditools/error.hpp"

#include <nlohmann/json.hpp>

#include <ctime>

namespace meditools::api {

void FeedbackMessage::validate() const
{
    if (body.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::InvalidRequest, "feedback body is empty", {{"field", "body"}});
}

std::string format_timestamp(std::chrono::system_clock::time_point t)
{
    const std::time_t seconds = std::chrono::system_clock::to_time_t(t);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

void MemoryMailer::send(const FeedbackMessage& message)
{
    std::lock_guard lock(mutex_);
    if (down_)
        throw Error(ErrorCode::MailerUnavailable, "mail relay is unavailable");
    messages_.push_back(message);
}

std::vector<FeedbackMessage> MemoryMailer::messages() const
{
    std::lock_guard lock(mutex_);
    return messages_;
}

void MemoryMailer::set_outage(bool down)
{
    std::lock_guard lock(mutex_);
    down_ = down;
}

SendGridMailer::SendGridMailer(std::shared_ptr<net::HttpTransport> transport, SendGridOptions options)
    : transport_(std::move(transport)), options_(std::move(options))
{
}

void SendGridMailer::send(const FeedbackMessage& message)
{
    if (options_.api_key.empty() || options_.to.empty() || options_.from.empty())
        throw Error(ErrorCode::MailerUnavailable, "mail relay is not configured");

    const std::string text = "From: " + (message.sender_contact.empty() ? "(anonymous)" : message.sender_contact) +
                             "\nSubmitted: " + format_timestamp(message.submitted_at) + "\n\n" + message.body;
    const nlohmann::json payload{
        {"personalizations", {{{"to", {{{"email", options_.to}}}}}}},
        {"from", {{"email", options_.from}}},
        {"subject", "Feedback"},
        {"content", {{{"type", "text/plain"}, {"value", text}}}},
    };

    net::HttpRequest request;
    request.method = "POST";
    request.url = options_.endpoint;
    request.content_type = "application/json";
    request.body = payload.dump();
    request.headers.emplace("Authorization", "Bearer " + options_.api_key);

    net::HttpResponse response;
    try {
        response = transport_->send(request);
    } catch (const net::TransportError&) {
        throw Error(ErrorCode::MailerUnavailable, "mail relay is unreachable");
    }
    if (!response.ok())
        throw Error(ErrorCode::MailerUnavailable, "mail relay rejected the message",
                    {{"status", response.status}});
}

} // namespace meditools::api
