#pragma once

#include "meditools/catalog/catalog.hpp"
#include "meditools/derm/lab_table.hpp"
#include "meditools/fuzzy/match.hpp"
#include "meditools/llm/gateway.hpp"
#include "meditools/llm/prompt_template.hpp"
#include "meditools/session/store.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace meditools::derm {

inline constexpr const char* kNamespace = "derm";

enum class FeedbackMode { AtEnd, PerQuestion };

std::string_view to_string(FeedbackMode mode);
FeedbackMode feedback_mode_from_string(std::string_view text);

struct PatientProfile {
    std::string name;
    std::string personality;

    bool operator==(const PatientProfile&) const = default;
};

struct CaseSpec {
    std::string case_id;
    PatientProfile profile;
    std::string condition_name;
    std::string condition_type;
    catalog::ImageEntry image;
    std::optional<std::string> model;
    FeedbackMode feedback_mode = FeedbackMode::AtEnd;

    bool operator==(const CaseSpec&) const = default;
};

/// Fields safe to show the learner: no condition, no image path.
nlohmann::json public_view(const CaseSpec& spec);

session::StateValue to_state(const CaseSpec& spec);
CaseSpec case_from_state(const session::StateValue& value);

struct LabResult {
    std::string test_type;
    std::string patient_name;
    std::vector<LabRow> rows;
    std::string table; // canonical text, see format_lab_table
};

struct CaseReport {
    std::string condition_info;
    llm::ChatTranscript transcript;
    std::string performance_feedback;
};

enum class CaseAction { Message, Labs, Image, Guess, Report, Repeat, NewCase };

std::string_view to_string(CaseAction action);

struct GuessResult {
    fuzzy::MatchOutcome outcome;
    std::string revealed_condition;
    std::vector<CaseAction> next_actions;
};

/// A reply split into in-character text and inline coaching.
struct ReplySegment {
    enum class Kind { Patient, Feedback } kind;
    std::string text;
};

struct PatientReply {
    llm::ChatMessage message;
    std::vector<ReplySegment> segments;
};

struct VoiceReply {
    std::string transcript;
    PatientReply reply;
    std::optional<llm::AudioClip> reply_audio;
};

struct ImageBlob {
    std::string bytes;
    std::string media_type;
};

/// Lines beginning with the marker are coaching; everything else is the
/// patient speaking. Marker text is removed from the feedback segment.
std::vector<ReplySegment> split_feedback(const std::string& content, std::string_view marker);

struct DermConfig {
    std::vector<std::string> names;
    std::vector<std::string> personalities;
    llm::PromptTemplate patient_prompt{""};
    /// Rendered with {feedback_marker} and inserted into the patient prompt as
    /// {feedback_clause} in PerQuestion mode.
    llm::PromptTemplate feedback_clause{""};
    llm::PromptTemplate lab_prompt{""};
    llm::PromptTemplate condition_info_prompt{""};
    llm::PromptTemplate performance_prompt{""};
    std::string feedback_marker = "[FEEDBACK]";
    /// Model for the lab and report chains; empty means the case's model.
    std::string chain_model;
    double match_cutoff = fuzzy::kDefaultCutoff;

    /// Reads names.txt, personalities.txt and the prompts/ templates under dir.
    static DermConfig load(const std::filesystem::path& data_dir);
};

/// Case lifecycle for the dermatology simulator.
///
/// All per-learner state lives in the session store under the "derm"
/// namespace; each operation holds that namespace's lock for its duration.
/// The hidden condition only ever appears in System-role prompts sent to the
/// model, in the guess result and in the report.
class DermEngine {
public:
    DermEngine(std::shared_ptr<session::SessionStore> store, std::shared_ptr<const catalog::Catalog> catalog,
               std::shared_ptr<const llm::LlmGateway> gateway, DermConfig config);

    /// Clears everything from the previous case, then draws a new one.
    CaseSpec create_case(const std::string& session_id, std::mt19937_64& rng);

    CaseSpec select_model(const std::string& session_id, const std::string& model);
    CaseSpec set_feedback_mode(const std::string& session_id, FeedbackMode mode);

    std::optional<CaseSpec> current_case(const std::string& session_id) const;
    /// Learner-visible conversation (no System message).
    llm::ChatTranscript transcript(const std::string& session_id) const;
    std::vector<CaseAction> available_actions(const std::string& session_id) const;

    std::string assemble_patient_prompt(const CaseSpec& spec) const;

    PatientReply patient_reply(const std::string& session_id, const std::string& case_id,
                               const std::string& user_text);
    VoiceReply patient_reply_audio(const std::string& session_id, const std::string& case_id,
                                   const llm::AudioClip& clip, bool speak_reply);
    LabResult order_labs(const std::string& session_id, const std::string& case_id, const std::string& test_type);
    GuessResult submit_guess(const std::string& session_id, const std::string& case_id, const std::string& guess);
    CaseReport generate_report(const std::string& session_id, const std::string& case_id);
    ImageBlob reveal_image(const std::string& session_id, const std::string& case_id);
    /// Post-guess only: same CaseSpec, fresh transcript.
    CaseSpec repeat_case(const std::string& session_id, const std::string& case_id);

    const DermConfig& config() const { return config_; }

private:
    session::SessionKey key(const std::string& session_id, const char* name) const;
    CaseSpec load_case(const std::string& session_id, const std::string& case_id) const;
    bool closed(const std::string& session_id) const;
    void require_open(const std::string& session_id) const;
    static void require_model(const CaseSpec& spec);
    void store_transcript(const std::string& session_id, const llm::ChatTranscript& transcript);
    std::string chain_model(const CaseSpec& spec) const;
    std::string run_chain(const CaseSpec& spec, const std::string& system_prompt, const std::string& user_text,
                          const std::string& purpose) const;

    std::shared_ptr<session::SessionStore> store_;
    std::shared_ptr<const catalog::Catalog> catalog_;
    std::shared_ptr<const llm::LlmGateway> gateway_;
    DermConfig config_;
};

} // namespace meditools::derm
