#include "support.hpp"

#include "meditools/llm/chat_memory.hpp"
#include "meditools/llm/gateway.hpp"
#include "meditools/llm/mock_provider.hpp"
#include "meditools/llm/openai_compatible.hpp"
#include "meditools/llm/prompt_template.hpp"
#include "meditools/llm/registry.hpp"

#include <doctest.h>

using namespace meditools;
using namespace meditools::llm;
using support::error_code_of;

namespace {

struct Fixture {
    std::shared_ptr<MockProvider> openai = std::make_shared<MockProvider>([](const CompletionRequest&) {
        return std::string("from-openai");
    });
    std::shared_ptr<MockProvider> aggregator = std::make_shared<MockProvider>([](const CompletionRequest&) {
        return std::string("from-aggregator");
    });
    std::shared_ptr<MockProvider> mock = std::make_shared<MockProvider>();
    LlmGateway gateway{ModelRegistry::load(support::data_dir() / "registry.json"),
                       ProviderSet{openai, aggregator, mock, mock}};
};

ChatTranscript one_turn(const std::string& text)
{
    ChatTranscript t;
    t.append(Role::User, text);
    return t;
}

} // namespace

TEST_SUITE("llm")
{
    TEST_CASE("registry routes models to providers")
    {
        Fixture f;
        CHECK(f.gateway.route_model("gpt-4o") == ProviderRoute::OpenAiDirect);
        CHECK(f.gateway.route_model("anthropic/claude-3-haiku") == ProviderRoute::Aggregator);
        CHECK(f.gateway.route_model("meta-llama/llama-3-8b-instruct") == ProviderRoute::Aggregator);
        CHECK(error_code_of([&] { f.gateway.route_model("gpt-5-imaginary"); }) == ErrorCode::UnknownModel);
        CHECK(error_code_of([&] { f.gateway.route_model(""); }) == ErrorCode::UnknownModel);

        CHECK(f.gateway.complete_chat(f.gateway.make_request("gpt-4o", one_turn("hi"))).content == "from-openai");
        CHECK(f.gateway.complete_chat(f.gateway.make_request("anthropic/claude-3-haiku", one_turn("hi"))).content ==
              "from-aggregator");
        CHECK(f.openai->chat_calls() == 1);
        CHECK(f.aggregator->chat_calls() == 1);
    }

    TEST_CASE("registry file validation")
    {
        CHECK(error_code_of([] {
                  ModelRegistry::from_json(nlohmann::json::parse(R"({"models":[{"id":"a","route":"openai"},
                                                                      {"id":"a","route":"mock"}]})"));
              }) == ErrorCode::InvalidRequest);
        CHECK(error_code_of([] { ModelRegistry::from_json(nlohmann::json::parse(R"({"models":[{"id":"a","route":"x"}]})")); }) ==
              ErrorCode::InvalidRequest);
        CHECK(error_code_of([] { ModelRegistry::load("/nonexistent/registry.json"); }) == ErrorCode::MissingFile);
        const auto reg = ModelRegistry::from_json(nlohmann::json::parse(R"({"models":[{"id":"m","route":"mock"}]})"));
        CHECK(reg.info("m").display_name == "m");
        CHECK(reg.route("m") == ProviderRoute::Mock);
    }

    TEST_CASE("missing provider slot is unavailable, not a crash")
    {
        LlmGateway gateway(ModelRegistry({{"gpt-4o", "GPT-4o", ProviderRoute::OpenAiDirect}}), ProviderSet{});
        CHECK(error_code_of([&] { gateway.complete_chat(gateway.make_request("gpt-4o", one_turn("x"))); }) ==
              ErrorCode::ProviderUnavailable);
        CHECK(error_code_of([&] { gateway.synthesize_speech("hello"); }) == ErrorCode::ProviderUnavailable);
    }

    TEST_CASE("prompt templates")
    {
        PromptTemplate t("Hello {name}, {{literal}} {name} { not a key } {x1}");
        CHECK(t.required_keys() == std::set<std::string>{"name", "x1"});
        CHECK(t.render({{"name", "Ann"}, {"x1", "{name}"}}) == "Hello Ann, {literal} Ann { not a key } {name}");
        try {
            t.render({{"name", "Ann"}});
            FAIL("expected MissingKey");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MissingKey);
            CHECK(std::string(e.what()).find("x1") != std::string::npos);
        }
        CHECK(PromptTemplate("no placeholders").render({}) == "no placeholders");
        CHECK(PromptTemplate::load(support::data_dir() / "prompts" / "paper_chat.txt").required_keys().count("full_text"));
    }

    TEST_CASE("transcript ordering rule and json")
    {
        ChatTranscript t;
        t.append(Role::System, "sys");
        t.append(Role::User, "u");
        t.append(Role::Assistant, "a");
        CHECK(error_code_of([&] { t.append(Role::System, "late"); }) == ErrorCode::InvalidRequest);
        CHECK(t.count(Role::User) == 1);
        CHECK(transcript_from_json(to_json(t)) == t);
        CHECK(error_code_of([] {
                  transcript_from_json(nlohmann::json::parse(R"([{"role":"user","content":"a"},{"role":"system","content":"b"}])"));
              }) == ErrorCode::InvalidRequest);
        CHECK(error_code_of([] { transcript_from_json(nlohmann::json::parse(R"([{"role":"wizard","content":"a"}])")); }) ==
              ErrorCode::InvalidRequest);
    }

    TEST_CASE("completion request validation")
    {
        Fixture f;
        auto req = f.gateway.make_request("gpt-4o", ChatTranscript{});
        CHECK(error_code_of([&] { req.validate(); }) == ErrorCode::InvalidRequest);
        req = f.gateway.make_request("gpt-4o", one_turn("x"));
        req.temperature = 2.5;
        CHECK(error_code_of([&] { req.validate(); }) == ErrorCode::InvalidRequest);
        req.temperature = 0.0;
        req.max_tokens = 0;
        CHECK(error_code_of([&] { req.validate(); }) == ErrorCode::InvalidRequest);
    }

    TEST_CASE("mock provider is deterministic")
    {
        MockProvider a(&MockProvider::scripted), b(&MockProvider::scripted);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 200; ++i) {
            CompletionRequest req;
            req.model = "m";
            req.transcript = one_turn(support::random_phrase(rng));
            req.purpose = i % 2 ? "patient" : "labs";
            CHECK(a.complete(req) == b.complete(req));
        }
        CompletionRequest req;
        req.model = "m";
        req.transcript = one_turn("same");
        CHECK(MockProvider().complete(req).content == "same");
    }

    TEST_CASE("converse keeps exactly one reply per user message")
    {
        Fixture f;
        ChatTranscript memory;
        memory.append(Role::System, "be brief");
        CHECK(converse(f.gateway, memory, "meta-llama/llama-3-70b-instruct", "q1").content == "from-aggregator");
        CHECK(memory.size() == 3);

        f.aggregator->set_failure(ErrorCode::ProviderUnavailable);
        CHECK(error_code_of([&] { converse(f.gateway, memory, "anthropic/claude-3-haiku", "q2"); }) ==
              ErrorCode::ProviderUnavailable);
        CHECK(memory.size() == 3);
        CHECK(error_code_of([&] { converse(f.gateway, memory, "unknown/model", "q3"); }) == ErrorCode::UnknownModel);
        CHECK(memory.size() == 3);
        CHECK(memory.count(Role::User) == memory.count(Role::Assistant));
    }

    TEST_CASE("context limit surfaces as ContextTooLong")
    {
        Fixture f;
        f.mock->set_context_limit(10);
        LlmGateway gateway(ModelRegistry({{"mock", "Mock", ProviderRoute::Mock}}), ProviderSet{nullptr, nullptr, f.mock, f.mock});
        CHECK(error_code_of([&] { gateway.complete_chat(gateway.make_request("mock", one_turn(std::string(50, 'x')))); }) ==
              ErrorCode::ContextTooLong);
        CHECK(gateway.complete_chat(gateway.make_request("mock", one_turn("short"))).content == "short");
    }

    TEST_CASE("audio validation")
    {
        Fixture f;
        const auto wav = support::make_wav(1.5);
        CHECK(wav_duration(wav) == doctest::Approx(1.5));
        CHECK(payload_matches_format(wav, AudioFormat::Wav));
        CHECK_FALSE(payload_matches_format(wav, AudioFormat::Mp3));
        CHECK(f.gateway.transcribe_audio({wav, AudioFormat::Wav, 1.5}) == "mock transcription");
        CHECK(error_code_of([&] { f.gateway.transcribe_audio({"", AudioFormat::Wav, 0}); }) ==
              ErrorCode::UnsupportedFormat);
        CHECK(error_code_of([&] { f.gateway.transcribe_audio({wav, AudioFormat::Mp3, 0}); }) ==
              ErrorCode::UnsupportedFormat);
        CHECK(error_code_of([&] { f.gateway.transcribe_audio({"plain text", AudioFormat::Wav, 0}); }) ==
              ErrorCode::UnsupportedFormat);
        CHECK(error_code_of([] { audio_format_from_string("ogg"); }) == ErrorCode::UnsupportedFormat);
        CHECK(audio_format_from_string("mp3") == AudioFormat::Mp3);

        CHECK(error_code_of([&] { f.gateway.synthesize_speech("   "); }) == ErrorCode::EmptyText);
        CHECK_FALSE(f.gateway.synthesize_speech("hello").bytes.empty());
    }

    TEST_CASE("openai-compatible wire format")
    {
        net::HttpRequest seen;
        auto transport = std::make_shared<net::FunctionTransport>([&](const net::HttpRequest& r) {
            seen = r;
            return net::HttpResponse{200, {}, R"({"choices":[{"message":{"role":"assistant","content":"hi there"}}]})"};
        });
        OpenAiCompatibleProvider provider(transport, openrouter_config("sk-or-test-key"));
        CompletionRequest req;
        req.model = "anthropic/claude-3-haiku";
        req.transcript.append(Role::System, "sys");
        req.transcript.append(Role::User, "hello");
        req.temperature = 0.2;
        req.purpose = "patient";
        CHECK(provider.complete(req).content == "hi there");
        CHECK(seen.url == "https://openrouter.ai/api/v1/chat/completions");
        CHECK(net::header_value(seen.headers, "Authorization") == "Bearer sk-or-test-key");
        const auto body = nlohmann::json::parse(seen.body);
        CHECK(body["model"] == "anthropic/claude-3-haiku");
        CHECK(body["messages"][0]["role"] == "system");
        CHECK(body["messages"][1]["content"] == "hello");
        CHECK(body["temperature"] == 0.2);
        CHECK_FALSE(body.contains("purpose"));
    }

    TEST_CASE("openai-compatible error mapping")
    {
        int status = 0;
        std::string payload;
        bool drop = false;
        auto transport = std::make_shared<net::FunctionTransport>([&](const net::HttpRequest&) {
            if (drop)
                throw net::TransportError("connection reset");
            return net::HttpResponse{status, {}, payload};
        });
        OpenAiCompatibleProvider provider(transport, openai_config("sk-test-abcdef"));
        CompletionRequest req;
        req.model = "gpt-4o";
        req.transcript = one_turn("x");
        auto code = [&] { return error_code_of([&] { provider.complete(req); }); };

        status = 401;
        payload = R"({"error":{"message":"Incorrect API key"}})";
        CHECK(code() == ErrorCode::AuthFailure);
        status = 400;
        payload = R"({"error":{"message":"too long","code":"context_length_exceeded"}})";
        CHECK(code() == ErrorCode::ContextTooLong);
        payload = R"({"error":{"message":"bad temperature"}})";
        CHECK(code() == ErrorCode::ProviderUnavailable);
        status = 503;
        payload = "<html>down</html>";
        CHECK(code() == ErrorCode::ProviderUnavailable);
        status = 200;
        payload = "{\"choices\":[]}";
        CHECK(code() == ErrorCode::ProviderUnavailable);
        payload = R"({"choices":[{"message":{"content":null},"finish_reason":"content_filter"}]})";
        CHECK(code() == ErrorCode::ProviderUnavailable);
        drop = true;
        CHECK(code() == ErrorCode::ProviderUnavailable);

        OpenAiCompatibleProvider keyless(transport, openai_config(""));
        CHECK(error_code_of([&] { keyless.complete(req); }) == ErrorCode::AuthFailure);
    }

    TEST_CASE("openai-compatible audio endpoints")
    {
        net::HttpRequest seen;
        const auto wav = support::make_wav(0.5);
        auto transport = std::make_shared<net::FunctionTransport>([&](const net::HttpRequest& r) {
            seen = r;
            if (r.url.find("transcriptions") != std::string::npos)
                return net::HttpResponse{200, {}, R"({"text":"my skin itches"})"};
            return net::HttpResponse{200, {}, wav};
        });
        OpenAiCompatibleProvider provider(transport, openai_config("sk-test"));
        CHECK(provider.transcribe({wav, AudioFormat::Wav, 0.5}) == "my skin itches");
        CHECK(seen.content_type.rfind("multipart/form-data; boundary=", 0) == 0);
        CHECK(seen.body.find("whisper-1") != std::string::npos);
        const auto clip = provider.synthesize("hello", "alloy", AudioFormat::Wav);
        CHECK(clip.duration_s == doctest::Approx(0.5));
        CHECK(nlohmann::json::parse(seen.body)["voice"] == "alloy");
    }
}
