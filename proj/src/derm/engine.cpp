#include "meditools/derm/engine.hpp"

#include "meditools/error.hpp"
#include "meditools/llm/chat_memory.hpp"

#include <fstream>

namespace meditools::derm {

using session::StateValue;

namespace {

constexpr const char* kCaseKey = "case";
constexpr const char* kTranscriptKey = "transcript";
constexpr const char* kClosedKey = "closed";
constexpr const char* kGuessKey = "guess";

std::vector<std::string> read_list(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot read list " + file.string());
    std::vector<std::string> items;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        items.push_back(line.substr(first, last - first + 1));
    }
    if (items.empty())
        throw Error(ErrorCode::InvalidRequest, "list is empty: " + file.string());
    return items;
}

std::string random_case_id(std::mt19937_64& rng)
{
    static constexpr char kHex[] = "0123456789abcdef";
    auto word = rng();
    std::string id;
    for (int i = 0; i < 16; ++i) {
        id.push_back(kHex[word & 0xF]);
        word >>= 4;
    }
    return id;
}

StateValue transcript_state(const llm::ChatTranscript& transcript)
{
    StateValue::List items;
    for (const auto& m : transcript.messages())
        items.emplace_back(StateValue::Record{{"role", std::string(llm::to_string(m.role))}, {"content", m.content}});
    return items;
}

llm::ChatTranscript transcript_from_state(const StateValue& value)
{
    std::vector<llm::ChatMessage> messages;
    for (const auto& item : value.list())
        messages.push_back({llm::role_from_string(item.at("role").text()), item.at("content").text()});
    return llm::ChatTranscript(std::move(messages));
}

std::string render_transcript(const llm::ChatTranscript& transcript)
{
    std::string out;
    for (const auto& m : transcript.messages()) {
        out += m.role == llm::Role::User ? "Learner: " : "Patient: ";
        out += m.content;
        out += "\n";
    }
    return out;
}

std::string blank_trimmed(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string_view to_string(FeedbackMode mode)
{
    return mode == FeedbackMode::AtEnd ? "at_end" : "per_question";
}

FeedbackMode feedback_mode_from_string(std::string_view text)
{
    if (text == "at_end")
        return FeedbackMode::AtEnd;
    if (text == "per_question")
        return FeedbackMode::PerQuestion;
    throw Error(ErrorCode::InvalidRequest, "feedback mode must be \"at_end\" or \"per_question\"");
}

std::string_view to_string(CaseAction action)
{
    switch (action) {
    case CaseAction::Message: return "message";
    case CaseAction::Labs: return "labs";
    case CaseAction::Image: return "image";
    case CaseAction::Guess: return "guess";
    case CaseAction::Report: return "report";
    case CaseAction::Repeat: return "repeat";
    case CaseAction::NewCase: return "new_case";
    }
    return "new_case";
}

nlohmann::json public_view(const CaseSpec& spec)
{
    return {{"case_id", spec.case_id},
            {"patient_name", spec.profile.name},
            {"personality", spec.profile.personality},
            {"model", spec.model ? nlohmann::json(*spec.model) : nlohmann::json(nullptr)},
            {"feedback_mode", to_string(spec.feedback_mode)}};
}

StateValue to_state(const CaseSpec& spec)
{
    StateValue::Record record{
        {"case_id", spec.case_id},
        {"name", spec.profile.name},
        {"personality", spec.profile.personality},
        {"condition_name", spec.condition_name},
        {"condition_type", spec.condition_type},
        {"image", session::BinaryRef{spec.image.path, std::string(catalog::media_type(spec.image.format))}},
        {"feedback_mode", std::string(to_string(spec.feedback_mode))},
    };
    if (spec.model)
        record.emplace("model", *spec.model);
    return record;
}

CaseSpec case_from_state(const StateValue& value)
{
    CaseSpec spec;
    spec.case_id = value.at("case_id").text();
    spec.profile.name = value.at("name").text();
    spec.profile.personality = value.at("personality").text();
    spec.condition_name = value.at("condition_name").text();
    spec.condition_type = value.at("condition_type").text();
    const auto& image = value.at("image").as<session::BinaryRef>();
    spec.image.path = image.uri;
    spec.image.condition_name = spec.condition_name;
    spec.image.condition_type = spec.condition_type;
    spec.image.format = image.media_type == "image/png" ? catalog::ImageFormat::Png : catalog::ImageFormat::Jpeg;
    spec.feedback_mode = feedback_mode_from_string(value.at("feedback_mode").text());
    if (value.record().count("model"))
        spec.model = value.at("model").text();
    return spec;
}

std::vector<ReplySegment> split_feedback(const std::string& content, std::string_view marker)
{
    std::vector<ReplySegment> segments;
    auto push = [&](ReplySegment::Kind kind, std::string text) {
        if (!segments.empty() && segments.back().kind == kind) {
            segments.back().text += "\n" + text;
            return;
        }
        segments.push_back({kind, std::move(text)});
    };

    std::size_t pos = 0;
    while (pos <= content.size()) {
        const auto nl = content.find('\n', pos);
        std::string line = content.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
        const auto first = line.find_first_not_of(" \t");
        if (!marker.empty() && first != std::string::npos && line.compare(first, marker.size(), marker) == 0) {
            push(ReplySegment::Kind::Feedback, blank_trimmed(line.substr(first + marker.size())));
        } else if (!segments.empty() || !blank_trimmed(line).empty()) {
            push(ReplySegment::Kind::Patient, line);
        }
    }
    for (auto& s : segments)
        s.text = blank_trimmed(s.text);
    std::erase_if(segments, [](const ReplySegment& s) { return s.text.empty(); });
    return segments;
}

DermConfig DermConfig::load(const std::filesystem::path& data_dir)
{
    DermConfig config;
    config.names = read_list(data_dir / "derm" / "names.txt");
    config.personalities = read_list(data_dir / "derm" / "personalities.txt");
    const auto prompts = data_dir / "prompts";
    config.patient_prompt = llm::PromptTemplate::load(prompts / "patient_system.txt");
    config.feedback_clause = llm::PromptTemplate::load(prompts / "feedback_clause.txt");
    config.lab_prompt = llm::PromptTemplate::load(prompts / "lab_results.txt");
    config.condition_info_prompt = llm::PromptTemplate::load(prompts / "report_condition.txt");
    config.performance_prompt = llm::PromptTemplate::load(prompts / "report_performance.txt");
    return config;
}

DermEngine::DermEngine(std::shared_ptr<session::SessionStore> store,
                       std::shared_ptr<const catalog::Catalog> catalog,
                       std::shared_ptr<const llm::LlmGateway> gateway, DermConfig config)
    : store_(std::move(store)), catalog_(std::move(catalog)), gateway_(std::move(gateway)),
      config_(std::move(config))
{
    if (config_.names.empty() || config_.personalities.empty())
        throw Error(ErrorCode::InvalidRequest, "patient name and personality lists must be nonempty");
}

session::SessionKey DermEngine::key(const std::string& session_id, const char* name) const
{
    return {session_id, kNamespace, name};
}

CaseSpec DermEngine::load_case(const std::string& session_id, const std::string& case_id) const
{
    const auto stored = store_->get(key(session_id, kCaseKey));
    if (!stored)
        throw Error(ErrorCode::NoActiveCase, "no active case; create one first");
    CaseSpec spec = case_from_state(*stored);
    if (!case_id.empty() && spec.case_id != case_id)
        throw Error(ErrorCode::NoActiveCase, "case " + case_id + " is no longer active",
                    {{"active_case_id", spec.case_id}});
    return spec;
}

bool DermEngine::closed(const std::string& session_id) const
{
    const auto flag = store_->get(key(session_id, kClosedKey));
    return flag && flag->flag();
}

void DermEngine::require_open(const std::string& session_id) const
{
    if (closed(session_id))
        throw Error(ErrorCode::CaseClosed, "a guess was already submitted; repeat the case, start a new one, "
                                           "or view the report");
}

void DermEngine::require_model(const CaseSpec& spec)
{
    if (!spec.model)
        throw Error(ErrorCode::ModelNotSelected, "select a model before interacting with the patient");
}

void DermEngine::store_transcript(const std::string& session_id, const llm::ChatTranscript& transcript)
{
    store_->put(key(session_id, kTranscriptKey), transcript_state(transcript));
}

std::string DermEngine::chain_model(const CaseSpec& spec) const
{
    if (!config_.chain_model.empty())
        return config_.chain_model;
    require_model(spec);
    return *spec.model;
}

std::string DermEngine::run_chain(const CaseSpec& spec, const std::string& system_prompt,
                                  const std::string& user_text, const std::string& purpose) const
{
    llm::ChatTranscript chain({{llm::Role::System, system_prompt}, {llm::Role::User, user_text}});
    auto reply = gateway_->complete_chat(gateway_->make_request(chain_model(spec), std::move(chain), purpose));
    return blank_trimmed(reply.content);
}

CaseSpec DermEngine::create_case(const std::string& session_id, std::mt19937_64& rng)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    store_->reset_namespace(session_id, kNamespace);

    if (!catalog_ || catalog_->size() == 0)
        throw Error(ErrorCode::EmptyCatalog, "the image catalog is empty");
    const auto& image = catalog_->sample(rng);
    std::uniform_int_distribution<std::size_t> pick_name(0, config_.names.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_personality(0, config_.personalities.size() - 1);

    CaseSpec spec;
    spec.case_id = random_case_id(rng);
    spec.profile.name = config_.names[pick_name(rng)];
    spec.profile.personality = config_.personalities[pick_personality(rng)];
    const auto ref = catalog::condition_from_path(image.path);
    spec.condition_name = ref.condition_name;
    spec.condition_type = ref.condition_type;
    spec.image = image;

    store_->put(key(session_id, kCaseKey), to_state(spec));
    store_transcript(session_id, {});
    return spec;
}

CaseSpec DermEngine::select_model(const std::string& session_id, const std::string& model)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    CaseSpec spec = load_case(session_id, {});
    gateway_->route_model(model);
    spec.model = model;
    store_->put(key(session_id, kCaseKey), to_state(spec));
    return spec;
}

CaseSpec DermEngine::set_feedback_mode(const std::string& session_id, FeedbackMode mode)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    CaseSpec spec = load_case(session_id, {});
    spec.feedback_mode = mode;
    store_->put(key(session_id, kCaseKey), to_state(spec));
    return spec;
}

std::optional<CaseSpec> DermEngine::current_case(const std::string& session_id) const
{
    const auto stored = store_->get(key(session_id, kCaseKey));
    if (!stored)
        return std::nullopt;
    return case_from_state(*stored);
}

llm::ChatTranscript DermEngine::transcript(const std::string& session_id) const
{
    const auto stored = store_->get(key(session_id, kTranscriptKey));
    return stored ? transcript_from_state(*stored) : llm::ChatTranscript{};
}

std::vector<CaseAction> DermEngine::available_actions(const std::string& session_id) const
{
    const auto spec = current_case(session_id);
    if (!spec)
        return {CaseAction::NewCase};
    if (closed(session_id))
        return {CaseAction::Repeat, CaseAction::NewCase, CaseAction::Report};
    if (!spec->model)
        return {CaseAction::NewCase};
    std::vector<CaseAction> actions{CaseAction::Message, CaseAction::Labs, CaseAction::Image, CaseAction::Guess};
    if (transcript(session_id).count(llm::Role::User) > 0)
        actions.push_back(CaseAction::Report);
    actions.push_back(CaseAction::NewCase);
    return actions;
}

std::string DermEngine::assemble_patient_prompt(const CaseSpec& spec) const
{
    std::string clause;
    if (spec.feedback_mode == FeedbackMode::PerQuestion)
        clause = config_.feedback_clause.render({{"feedback_marker", config_.feedback_marker}});
    return config_.patient_prompt.render({{"patient_name", spec.profile.name},
                                          {"personality", spec.profile.personality},
                                          {"condition_name", spec.condition_name},
                                          {"condition_type", spec.condition_type},
                                          {"feedback_clause", clause},
                                          {"feedback_marker", config_.feedback_marker}});
}

PatientReply DermEngine::patient_reply(const std::string& session_id, const std::string& case_id,
                                       const std::string& user_text)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);
    require_open(session_id);
    require_model(spec);
    if (blank_trimmed(user_text).empty())
        throw Error(ErrorCode::InvalidRequest, "message text is empty");

    // The System prompt rides along on every call but is never stored, so
    // the learner-visible transcript cannot carry the condition.
    const llm::ChatTranscript stored = transcript(session_id);
    std::vector<llm::ChatMessage> messages{{llm::Role::System, assemble_patient_prompt(spec)}};
    messages.insert(messages.end(), stored.messages().begin(), stored.messages().end());
    llm::ChatTranscript memory(std::move(messages));

    PatientReply reply;
    reply.message = llm::converse(*gateway_, memory, *spec.model, user_text, "patient");
    reply.segments = split_feedback(reply.message.content, config_.feedback_marker);

    llm::ChatTranscript updated = stored;
    updated.append(llm::Role::User, user_text);
    updated.append(reply.message);
    store_transcript(session_id, updated);
    return reply;
}

VoiceReply DermEngine::patient_reply_audio(const std::string& session_id, const std::string& case_id,
                                           const llm::AudioClip& clip, bool speak_reply)
{
    {
        // Fail fast on gating before spending a transcription call.
        const CaseSpec spec = load_case(session_id, case_id);
        require_open(session_id);
        require_model(spec);
    }
    VoiceReply out;
    out.transcript = gateway_->transcribe_audio(clip);
    out.reply = patient_reply(session_id, case_id, out.transcript);
    if (speak_reply) {
        std::string spoken;
        for (const auto& segment : out.reply.segments)
            if (segment.kind == ReplySegment::Kind::Patient)
                spoken += (spoken.empty() ? "" : "\n") + segment.text;
        if (!blank_trimmed(spoken).empty())
            out.reply_audio = gateway_->synthesize_speech(spoken);
    }
    return out;
}

LabResult DermEngine::order_labs(const std::string& session_id, const std::string& case_id,
                                 const std::string& test_type)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);
    require_open(session_id);
    require_model(spec);
    const std::string test = blank_trimmed(test_type);
    if (test.empty())
        throw Error(ErrorCode::InvalidRequest, "test type is empty");

    const std::string prompt = config_.lab_prompt.render({{"patient_name", spec.profile.name},
                                                          {"personality", spec.profile.personality},
                                                          {"condition_name", spec.condition_name},
                                                          {"condition_type", spec.condition_type},
                                                          {"test_type", test}});
    const std::string raw = run_chain(spec, prompt, "Order: " + test, "labs");

    LabResult result;
    result.test_type = test;
    result.patient_name = spec.profile.name;
    result.rows = parse_lab_table(raw);
    if (result.rows.empty())
        throw Error(ErrorCode::MalformedLabTable, "the lab chain did not return a parseable results table");
    result.table = format_lab_table(result.rows);

    llm::ChatTranscript updated = transcript(session_id);
    updated.append(llm::Role::Assistant,
                   "Lab Test Results: " + test + "\nPatient Name: " + spec.profile.name + "\n\n" + result.table);
    store_transcript(session_id, updated);
    return result;
}

GuessResult DermEngine::submit_guess(const std::string& session_id, const std::string& case_id,
                                     const std::string& guess)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);
    require_open(session_id);
    require_model(spec);

    GuessResult result;
    result.outcome = fuzzy::is_match(guess, spec.condition_name, config_.match_cutoff);
    result.revealed_condition = spec.condition_name;
    result.next_actions = {CaseAction::Repeat, CaseAction::NewCase, CaseAction::Report};

    store_->put(key(session_id, kGuessKey), StateValue::Record{{"guess", guess},
                                                               {"ratio", result.outcome.ratio},
                                                               {"matched", result.outcome.matched}});
    store_->put(key(session_id, kClosedKey), true);
    return result;
}

CaseReport DermEngine::generate_report(const std::string& session_id, const std::string& case_id)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);

    CaseReport report;
    report.transcript = transcript(session_id);
    if (report.transcript.count(llm::Role::User) == 0)
        throw Error(ErrorCode::EmptyTranscript, "there is no conversation to report on yet");

    const std::map<std::string, std::string> bindings{{"patient_name", spec.profile.name},
                                                      {"personality", spec.profile.personality},
                                                      {"condition_name", spec.condition_name},
                                                      {"condition_type", spec.condition_type},
                                                      {"feedback_mode", std::string(to_string(spec.feedback_mode))},
                                                      {"transcript", render_transcript(report.transcript)}};
    report.condition_info = run_chain(spec, config_.condition_info_prompt.render(bindings),
                                      "Write the condition overview.", "report_condition");
    report.performance_feedback = run_chain(spec, config_.performance_prompt.render(bindings),
                                            "Write the performance feedback.", "report_feedback");
    if (report.condition_info.empty() || report.performance_feedback.empty())
        throw Error(ErrorCode::ProviderUnavailable, "the model returned an empty report section");
    return report;
}

ImageBlob DermEngine::reveal_image(const std::string& session_id, const std::string& case_id)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);
    require_open(session_id);
    require_model(spec);
    return {catalog_->read(spec.image), std::string(catalog::media_type(spec.image.format))};
}

CaseSpec DermEngine::repeat_case(const std::string& session_id, const std::string& case_id)
{
    const auto lock = store_->lock_namespace(session_id, kNamespace);
    const CaseSpec spec = load_case(session_id, case_id);
    if (!closed(session_id))
        throw Error(ErrorCode::InvalidRequest, "a case can be repeated after its guess is submitted");
    store_->reset_namespace(session_id, kNamespace);
    store_->put(key(session_id, kCaseKey), to_state(spec));
    store_transcript(session_id, {});
    return spec;
}

} // namespace meditools::derm
