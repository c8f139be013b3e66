#include "support.hpp"

#include "meditools/derm/engine.hpp"
#include "meditools/derm/lab_table.hpp"

#include <doctest.h>

using namespace meditools;
using namespace meditools::derm;
using support::error_code_of;

namespace {

struct Sim {
    std::shared_ptr<session::SessionStore> store = std::make_shared<session::SessionStore>();
    std::shared_ptr<llm::MockProvider> mock = std::make_shared<llm::MockProvider>(support::scripted_responder());
    std::shared_ptr<catalog::Catalog> catalog =
        std::make_shared<catalog::Catalog>(catalog::Catalog::scan(support::fixture_dir() / "images"));
    std::shared_ptr<llm::LlmGateway> gateway = std::make_shared<llm::LlmGateway>(
        llm::ModelRegistry({{"mock-model", "Mock", llm::ProviderRoute::Mock},
                            {"gpt-4o", "GPT-4o", llm::ProviderRoute::OpenAiDirect}}),
        llm::ProviderSet{mock, nullptr, mock, mock});
    DermEngine engine{store, catalog, gateway, DermConfig::load(support::data_dir())};
    std::string session = store->create_session();
    std::mt19937_64 rng{42};

    CaseSpec ready_case(FeedbackMode mode = FeedbackMode::AtEnd)
    {
        engine.create_case(session, rng);
        engine.set_feedback_mode(session, mode);
        return engine.select_model(session, "mock-model");
    }
};

bool contains(const std::vector<CaseAction>& actions, CaseAction a)
{
    return std::find(actions.begin(), actions.end(), a) != actions.end();
}

} // namespace

TEST_SUITE("derm")
{
    TEST_CASE("lab table parsing")
    {
        const auto rows = parse_lab_table(
            "Here are the results.\n\n| Test | Result | Reference Range |\n|---|---|---|\n"
            "### Complete Blood Count\n| **WBC** | 8.3 x10^3/uL | 4.5-11.0 | x10^3/uL |\n"
            "| Hemoglobin | 13.9 g/dL | 13.5-17.5 g/dL |\nNote: values are simulated.\n"
            "Liver Panel\nALT | 25 U/L | 7-56 U/L\n| broken row |\n");
        REQUIRE(rows.size() == 3);
        CHECK(rows[0] == LabRow{"Complete Blood Count", "WBC", "8.3 x10^3/uL", "4.5-11.0 x10^3/uL"});
        CHECK(rows[1].section == "Complete Blood Count");
        CHECK(rows[2] == LabRow{"Liver Panel", "ALT", "25 U/L", "7-56 U/L"});
        CHECK(format_lab_table(rows) == "Test | Result | Reference Range\nComplete Blood Count\n"
                                        "WBC | 8.3 x10^3/uL | 4.5-11.0 x10^3/uL\n"
                                        "Hemoglobin | 13.9 g/dL | 13.5-17.5 g/dL\nLiver Panel\nALT | 25 U/L | 7-56 U/L");
        CHECK(parse_lab_table(format_lab_table(rows)) == rows);
        CHECK(parse_lab_table("I cannot provide lab results.").empty());
        CHECK(parse_lab_table("").empty());
    }

    TEST_CASE("feedback splitting")
    {
        auto segs = split_feedback("[FEEDBACK] Avoid jargon.\n  [FEEDBACK] Ask consent.\nIt itches a lot.\n\nMostly at night.",
                                   "[FEEDBACK]");
        REQUIRE(segs.size() == 2);
        CHECK(segs[0].kind == ReplySegment::Kind::Feedback);
        CHECK(segs[0].text == "Avoid jargon.\nAsk consent.");
        CHECK(segs[1].kind == ReplySegment::Kind::Patient);
        CHECK(segs[1].text == "It itches a lot.\n\nMostly at night.");
        CHECK(split_feedback("Just talking.", "[FEEDBACK]").size() == 1);
        CHECK(split_feedback("", "[FEEDBACK]").empty());
        CHECK(split_feedback("[FEEDBACK]   ", "[FEEDBACK]").empty());
    }

    TEST_CASE("case state round trip and public view hides the condition")
    {
        Sim sim;
        const auto spec = sim.ready_case(FeedbackMode::PerQuestion);
        CHECK(case_from_state(to_state(spec)) == spec);
        const auto view = public_view(spec).dump();
        CHECK(view.find(spec.condition_name) == std::string::npos);
        CHECK(view.find(spec.image.path) == std::string::npos);
        CHECK(public_view(spec)["feedback_mode"] == "per_question");
        CHECK(spec.case_id.size() == 16);
        CHECK(error_code_of([] { feedback_mode_from_string("sometimes"); }) == ErrorCode::InvalidRequest);
    }

    TEST_CASE("model selection gates every interaction")
    {
        Sim sim;
        CHECK(sim.engine.available_actions(sim.session) == std::vector<CaseAction>{CaseAction::NewCase});
        CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, "", "hello"); }) == ErrorCode::NoActiveCase);

        const auto spec = sim.engine.create_case(sim.session, sim.rng);
        CHECK_FALSE(spec.model.has_value());
        CHECK(sim.engine.available_actions(sim.session) == std::vector<CaseAction>{CaseAction::NewCase});
        const auto id = spec.case_id;
        CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, id, "hi"); }) == ErrorCode::ModelNotSelected);
        CHECK(error_code_of([&] { sim.engine.order_labs(sim.session, id, "CBC"); }) == ErrorCode::ModelNotSelected);
        CHECK(error_code_of([&] { sim.engine.reveal_image(sim.session, id); }) == ErrorCode::ModelNotSelected);
        CHECK(error_code_of([&] { sim.engine.submit_guess(sim.session, id, "x"); }) == ErrorCode::ModelNotSelected);
        CHECK(sim.mock->chat_calls() == 0);

        CHECK(error_code_of([&] { sim.engine.select_model(sim.session, "no-such-model"); }) == ErrorCode::UnknownModel);
        sim.engine.select_model(sim.session, "mock-model");
        const auto actions = sim.engine.available_actions(sim.session);
        CHECK(contains(actions, CaseAction::Message));
        CHECK_FALSE(contains(actions, CaseAction::Report));
        CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, "0000000000000000", "hi"); }) ==
              ErrorCode::NoActiveCase);
        CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, id, "   "); }) == ErrorCode::InvalidRequest);
    }

    TEST_CASE("patient chat keeps the condition confidential")
    {
        Sim sim;
        std::vector<std::string> system_prompts;
        sim.mock->set_responder([&](const llm::CompletionRequest& r) {
            if (r.purpose == "patient")
                system_prompts.push_back(r.transcript.messages().front().content);
            return llm::MockProvider::scripted(r);
        });
        const auto spec = sim.ready_case();
        for (const char* q : {"What brings you in?", "How long has it been?", "Does it itch?"})
            sim.engine.patient_reply(sim.session, spec.case_id, q);

        REQUIRE(system_prompts.size() == 3);
        for (const auto& p : system_prompts) {
            CHECK(p.find(spec.condition_name) != std::string::npos);
            CHECK(p.find(spec.profile.name) != std::string::npos);
        }
        const auto t = sim.engine.transcript(sim.session);
        CHECK_FALSE(t.has_system());
        CHECK(t.size() == 6);
        CHECK(to_json(t).dump().find(spec.condition_name) == std::string::npos);
        CHECK(contains(sim.engine.available_actions(sim.session), CaseAction::Report));
    }

    TEST_CASE("per-question feedback mode adds the coaching clause")
    {
        Sim sim;
        auto spec = sim.ready_case(FeedbackMode::AtEnd);
        CHECK(sim.engine.assemble_patient_prompt(spec).find("[FEEDBACK]") == std::string::npos);
        spec = sim.engine.set_feedback_mode(sim.session, FeedbackMode::PerQuestion);
        CHECK(sim.engine.assemble_patient_prompt(spec).find("[FEEDBACK]") != std::string::npos);

        sim.mock->set_responder([](const llm::CompletionRequest&) {
            return std::string("[FEEDBACK] Introduce yourself first.\nHello doctor.");
        });
        const auto reply = sim.engine.patient_reply(sim.session, spec.case_id, "what's wrong");
        REQUIRE(reply.segments.size() == 2);
        CHECK(reply.segments[0].kind == ReplySegment::Kind::Feedback);
        CHECK(reply.segments[1].text == "Hello doctor.");
    }

    TEST_CASE("lab injection")
    {
        Sim sim;
        const auto spec = sim.ready_case();
        sim.engine.patient_reply(sim.session, spec.case_id, "Hi");
        const auto labs = sim.engine.order_labs(sim.session, spec.case_id, " Complete Blood Count ");
        CHECK(labs.test_type == "Complete Blood Count");
        CHECK(labs.rows.size() == 4);
        CHECK(labs.patient_name == spec.profile.name);
        const auto t = sim.engine.transcript(sim.session);
        const auto& last = t.messages().back();
        CHECK(last.role == llm::Role::Assistant);
        CHECK(last.content.rfind("Lab Test Results: Complete Blood Count\nPatient Name: " + spec.profile.name, 0) == 0);
        CHECK(last.content.find(labs.table) != std::string::npos);

        sim.mock->set_responder([](const llm::CompletionRequest&) { return std::string("Sorry, no table today."); });
        const auto before = sim.engine.transcript(sim.session);
        CHECK(error_code_of([&] { sim.engine.order_labs(sim.session, spec.case_id, "CRP"); }) ==
              ErrorCode::MalformedLabTable);
        CHECK(sim.engine.transcript(sim.session) == before);
        CHECK(error_code_of([&] { sim.engine.order_labs(sim.session, spec.case_id, ""); }) == ErrorCode::InvalidRequest);
    }

    TEST_CASE("image reveal")
    {
        Sim sim;
        const auto spec = sim.ready_case();
        const auto img = sim.engine.reveal_image(sim.session, spec.case_id);
        CHECK(img.media_type == catalog::media_type(spec.image.format));
        CHECK(img.bytes == sim.catalog->read(spec.image));
    }

    TEST_CASE("guess closes the case and offers three actions")
    {
        Sim sim;
        const auto spec = sim.ready_case();
        sim.engine.patient_reply(sim.session, spec.case_id, "Hello");
        const auto result = sim.engine.submit_guess(sim.session, spec.case_id, spec.condition_name);
        CHECK(result.outcome.matched);
        CHECK(result.outcome.ratio == 1.0);
        CHECK(result.revealed_condition == spec.condition_name);
        CHECK(result.next_actions ==
              std::vector<CaseAction>{CaseAction::Repeat, CaseAction::NewCase, CaseAction::Report});
        CHECK(sim.engine.available_actions(sim.session) == result.next_actions);
        CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, spec.case_id, "again"); }) ==
              ErrorCode::CaseClosed);
        CHECK(error_code_of([&] { sim.engine.submit_guess(sim.session, spec.case_id, "x"); }) == ErrorCode::CaseClosed);
        CHECK(error_code_of([&] { sim.engine.order_labs(sim.session, spec.case_id, "CBC"); }) == ErrorCode::CaseClosed);
    }

    TEST_CASE("report has three sections")
    {
        Sim sim;
        const auto spec = sim.ready_case();
        CHECK(error_code_of([&] { sim.engine.generate_report(sim.session, spec.case_id); }) ==
              ErrorCode::EmptyTranscript);
        sim.engine.patient_reply(sim.session, spec.case_id, "Where is the rash?");
        sim.engine.submit_guess(sim.session, spec.case_id, "eczema");
        const auto report = sim.engine.generate_report(sim.session, spec.case_id);
        CHECK_FALSE(report.condition_info.empty());
        CHECK(report.transcript.size() == 2);
        CHECK(report.performance_feedback.find("What went well") != std::string::npos);

        sim.mock->set_responder([](const llm::CompletionRequest& r) {
            return r.purpose == "report_feedback" ? std::string("  ") : std::string("overview");
        });
        CHECK(error_code_of([&] { sim.engine.generate_report(sim.session, spec.case_id); }) ==
              ErrorCode::ProviderUnavailable);
    }

    TEST_CASE("chain model override")
    {
        Sim sim;
        auto config = DermConfig::load(support::data_dir());
        config.chain_model = "gpt-4o";
        std::vector<std::string> models;
        auto spy = std::make_shared<llm::MockProvider>([&](const llm::CompletionRequest& r) {
            models.push_back(r.model);
            return llm::MockProvider::scripted(r);
        });
        auto gateway = std::make_shared<llm::LlmGateway>(
            llm::ModelRegistry({{"mock-model", "Mock", llm::ProviderRoute::Mock},
                                {"gpt-4o", "GPT-4o", llm::ProviderRoute::OpenAiDirect}}),
            llm::ProviderSet{spy, nullptr, spy, spy});
        DermEngine engine(sim.store, sim.catalog, gateway, config);
        auto spec = engine.create_case(sim.session, sim.rng);
        engine.select_model(sim.session, "mock-model");
        engine.patient_reply(sim.session, spec.case_id, "hi");
        engine.order_labs(sim.session, spec.case_id, "CBC");
        CHECK(models == std::vector<std::string>{"mock-model", "gpt-4o"});
    }

    TEST_CASE("repeat restores the same case with a fresh transcript")
    {
        Sim sim;
        const auto spec = sim.ready_case(FeedbackMode::PerQuestion);
        CHECK(error_code_of([&] { sim.engine.repeat_case(sim.session, spec.case_id); }) == ErrorCode::InvalidRequest);
        sim.engine.patient_reply(sim.session, spec.case_id, "Hi");
        sim.engine.submit_guess(sim.session, spec.case_id, "acne");
        const auto again = sim.engine.repeat_case(sim.session, spec.case_id);
        CHECK(again == spec);
        CHECK(sim.engine.transcript(sim.session).empty());
    }

    TEST_CASE("new case resets the namespace completely")
    {
        Sim sim;
        sim.store->put({sim.session, "pubmed", "results"}, "keep me");
        for (int round = 0; round < 20; ++round) {
            const auto spec = sim.ready_case();
            sim.engine.patient_reply(sim.session, spec.case_id, "Hello");
            if (round % 2)
                sim.engine.order_labs(sim.session, spec.case_id, "CBC");
            if (round % 3 == 0)
                sim.engine.submit_guess(sim.session, spec.case_id, "psoriasis");

            const auto fresh = sim.engine.create_case(sim.session, sim.rng);
            CHECK(sim.store->keys(sim.session, kNamespace) == std::vector<std::string>{"case", "transcript"});
            CHECK(sim.engine.transcript(sim.session).empty());
            CHECK_FALSE(fresh.model.has_value());
            CHECK(fresh.feedback_mode == FeedbackMode::AtEnd);
            CHECK(sim.engine.available_actions(sim.session) == std::vector<CaseAction>{CaseAction::NewCase});
            CHECK(error_code_of([&] { sim.engine.patient_reply(sim.session, spec.case_id, "old"); }) ==
                  ErrorCode::NoActiveCase);
        }
        CHECK(sim.store->get({sim.session, "pubmed", "results"})->text() == "keep me");
    }

    TEST_CASE("voice turn")
    {
        Sim sim;
        const auto spec = sim.ready_case();
        sim.mock->set_transcript("does it hurt");
        const llm::AudioClip clip{support::make_wav(1.0), llm::AudioFormat::Wav, 1.0};
        const auto out = sim.engine.patient_reply_audio(sim.session, spec.case_id, clip, true);
        CHECK(out.transcript == "does it hurt");
        CHECK(out.reply.message.content.find("does it hurt") != std::string::npos);
        REQUIRE(out.reply_audio.has_value());
        CHECK(sim.engine.transcript(sim.session).messages().front().content == "does it hurt");

        const llm::AudioClip bad{"not audio", llm::AudioFormat::Wav, 0};
        CHECK(error_code_of([&] { sim.engine.patient_reply_audio(sim.session, spec.case_id, bad, false); }) ==
              ErrorCode::UnsupportedFormat);
        CHECK(sim.engine.transcript(sim.session).size() == 2);

        const auto speech_before = sim.mock->speech_calls();
        sim.engine.create_case(sim.session, sim.rng);
        CHECK(error_code_of([&] { sim.engine.patient_reply_audio(sim.session, "", clip, true); }) ==
              ErrorCode::ModelNotSelected);
        CHECK(sim.mock->speech_calls() == speech_before);
    }
}
