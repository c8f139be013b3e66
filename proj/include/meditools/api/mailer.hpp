#pragma once

#include "meditools/net/http.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace meditools::api {

struct FeedbackMessage {
    std::string sender_contact;
    std::string body;
    std::chrono::system_clock::time_point submitted_at;

    /// Throws InvalidRequest for a blank body.
    void validate() const;
};

std::string format_timestamp(std::chrono::system_clock::time_point t);

/// Relays feedback somewhere a human reads it. send() returns only once the
/// message is accepted; otherwise it throws Error(MailerUnavailable).
class Mailer {
public:
    virtual ~Mailer() = default;
    virtual void send(const FeedbackMessage& message) = 0;
};

class MemoryMailer : public Mailer {
public:
    void send(const FeedbackMessage& message) override;

    std::vector<FeedbackMessage> messages() const;
    /// While set, every send fails.
    void set_outage(bool down);

private:
    mutable std::mutex mutex_;
    std::vector<FeedbackMessage> messages_;
    bool down_ = false;
};

struct SendGridOptions {
    std::string endpoint = "https://api.sendgrid.com/v3/mail/send";
    std::string api_key;
    std::string from;
    std::string to;
};

/// Transactional-email API (SendGrid v3 wire format).
class SendGridMailer : public Mailer {
public:
    SendGridMailer(std::shared_ptr<net::HttpTransport> transport, SendGridOptions options);

    void send(const FeedbackMessage& message) override;

private:
    std::shared_ptr<net::HttpTransport> transport_;
    SendGridOptions options_;
};

} // namespace meditools::api
