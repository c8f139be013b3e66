#include "meditools/api/service.hpp"

#include "meditools/pubmed/paper_chat.hpp"
#include "meditools/pubmed/parser.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

namespace meditools::api {

using nlohmann::json;

namespace {

std::string dump(const json& j)
{
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

ApiResponse json_response(const json& body, int status = 200)
{
    ApiResponse r;
    r.status = status;
    r.body = dump(body);
    return r;
}

ApiResponse error_response(ErrorCode code, const std::string& message, const json& detail = nullptr)
{
    return json_response(error_body(code, message, detail), http_status(code));
}

Error bad_field(const std::string& field, const std::string& message)
{
    return Error(ErrorCode::InvalidRequest, message, {{"field", field}});
}

std::string base64(std::string_view bytes)
{
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

bool blank(const std::string& s)
{
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

/// Delta events whose texts concatenate to `text`, then a "done" event.
std::string sse_body(const std::string& text, const json& final_payload)
{
    constexpr std::size_t kChunk = 48;
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = std::min(text.size(), pos + kChunk);
        if (end < text.size()) {
            const auto space = text.rfind(' ', end - 1);
            if (space != std::string::npos && space > pos)
                end = space + 1;
            else
                while (end > pos + 1 && (static_cast<unsigned char>(text[end]) & 0xC0) == 0x80)
                    --end;
        }
        out += "event: delta\ndata: " + dump({{"text", text.substr(pos, end - pos)}}) + "\n\n";
        pos = end;
    }
    out += "event: done\ndata: " + dump(final_payload) + "\n\n";
    return out;
}

ApiResponse maybe_stream(bool stream, const std::string& text, const json& payload)
{
    if (!stream)
        return json_response(payload);
    ApiResponse r;
    r.content_type = "text/event-stream";
    r.body = sse_body(text, payload);
    r.headers.emplace("Cache-Control", "no-cache");
    return r;
}

json actions_json(const std::vector<derm::CaseAction>& actions)
{
    json out = json::array();
    for (auto a : actions)
        out.push_back(derm::to_string(a));
    return out;
}

json segments_json(const std::vector<derm::ReplySegment>& segments)
{
    json out = json::array();
    for (const auto& s : segments)
        out.push_back({{"kind", s.kind == derm::ReplySegment::Kind::Feedback ? "feedback" : "patient"},
                       {"text", s.text}});
    return out;
}

json reply_json(const derm::PatientReply& reply)
{
    return {{"message", llm::to_json(reply.message)}, {"segments", segments_json(reply.segments)}};
}

std::string cookie_value(const std::string& header, const std::string& name)
{
    std::size_t pos = 0;
    while (pos < header.size()) {
        auto end = header.find(';', pos);
        if (end == std::string::npos)
            end = header.size();
        std::string item = header.substr(pos, end - pos);
        const auto first = item.find_first_not_of(' ');
        if (first != std::string::npos) {
            item = item.substr(first);
            if (item.size() > name.size() && item.compare(0, name.size(), name) == 0 && item[name.size()] == '=')
                return item.substr(name.size() + 1);
        }
        pos = end + 1;
    }
    return {};
}

session::StateValue history_state(const llm::ChatTranscript& transcript)
{
    session::StateValue::List items;
    for (const auto& m : transcript.messages())
        items.emplace_back(session::StateValue::Record{{"role", std::string(llm::to_string(m.role))},
                                                       {"content", m.content}});
    return items;
}

llm::ChatTranscript history_from_state(const session::StateValue& value)
{
    std::vector<llm::ChatMessage> messages;
    for (const auto& item : value.list())
        messages.push_back({llm::role_from_string(item.at("role").text()), item.at("content").text()});
    return llm::ChatTranscript(std::move(messages));
}

} // namespace

struct ApiService::Context {
    const ApiRequest& request;
    std::string path;
    std::vector<std::pair<std::string, std::string>> query;
    std::string path_param;
    std::string session_id;
    std::optional<json> parsed;

    explicit Context(const ApiRequest& r) : request(r)
    {
        const auto q = r.target.find('?');
        path = r.target.substr(0, q);
        if (q != std::string::npos)
            query = net::parse_query(r.target.substr(q + 1));
    }

    const json& body()
    {
        if (parsed)
            return *parsed;
        if (blank(request.body)) {
            parsed = json::object();
            return *parsed;
        }
        json doc = json::parse(request.body, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorCode::InvalidRequest, "request body is not valid JSON");
        if (!doc.is_object())
            throw Error(ErrorCode::InvalidRequest, "request body must be a JSON object");
        parsed = std::move(doc);
        return *parsed;
    }

    std::string string_field(const std::string& name, bool required)
    {
        const auto& b = body();
        const auto it = b.find(name);
        if (it == b.end() || it->is_null()) {
            if (required)
                throw bad_field(name, "missing field \"" + name + "\"");
            return {};
        }
        if (!it->is_string())
            throw bad_field(name, "field \"" + name + "\" must be a string");
        auto value = it->get<std::string>();
        if (required && blank(value))
            throw bad_field(name, "field \"" + name + "\" must not be empty");
        return value;
    }

    std::optional<int> int_field(const std::string& name)
    {
        const auto& b = body();
        const auto it = b.find(name);
        if (it == b.end() || it->is_null())
            return std::nullopt;
        if (!it->is_number_integer())
            throw bad_field(name, "field \"" + name + "\" must be an integer");
        const auto v = it->get<std::int64_t>();
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            throw bad_field(name, "field \"" + name + "\" is out of range");
        return static_cast<int>(v);
    }

    std::vector<std::string> list_field(const std::string& name, bool required)
    {
        const auto& b = body();
        const auto it = b.find(name);
        if (it == b.end() || it->is_null()) {
            if (required)
                throw bad_field(name, "missing field \"" + name + "\"");
            return {};
        }
        if (!it->is_array())
            throw bad_field(name, "field \"" + name + "\" must be a list of strings");
        std::vector<std::string> out;
        for (const auto& v : *it) {
            if (!v.is_string())
                throw bad_field(name, "field \"" + name + "\" must be a list of strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    std::string query_value(const std::string& name) const
    {
        for (const auto& [k, v] : query)
            if (k == name)
                return v;
        return {};
    }

    bool wants_stream() const
    {
        return net::header_value(request.headers, "Accept").find("text/event-stream") != std::string::npos;
    }

    const FormPart* part(const std::string& name) const
    {
        for (const auto& p : request.parts)
            if (p.name == name)
                return &p;
        return nullptr;
    }
};

ApiService::ApiService(ServiceDeps deps) : deps_(std::move(deps))
{
    if (!deps_.scrubber)
        deps_.scrubber = std::make_shared<SecretScrubber>();
    if (deps_.seed)
        rng_.seed(*deps_.seed);
    else
        rng_.seed(std::random_device{}());

    routes_ = {
        {"POST", "/api/session", &ApiService::create_session, false},
        {"GET", "/api/models", &ApiService::list_models, false},
        {"GET", "/healthz", &ApiService::health, false},
        {"GET", "/api/derm/case", &ApiService::derm_get_case, true},
        {"POST", "/api/derm/case", &ApiService::derm_new_case, true},
        {"POST", "/api/derm/case/model", &ApiService::derm_model, true},
        {"POST", "/api/derm/case/feedback_mode", &ApiService::derm_feedback_mode, true},
        {"POST", "/api/derm/case/message", &ApiService::derm_message, true},
        {"POST", "/api/derm/case/audio", &ApiService::derm_audio, true},
        {"POST", "/api/derm/case/labs", &ApiService::derm_labs, true},
        {"GET", "/api/derm/case/image", &ApiService::derm_image, true},
        {"POST", "/api/derm/case/guess", &ApiService::derm_guess, true},
        {"POST", "/api/derm/case/repeat", &ApiService::derm_repeat, true},
        {"GET", "/api/derm/case/report", &ApiService::derm_report, true},
        {"POST", "/api/pubmed/search", &ApiService::pubmed_search, true},
        {"POST", "/api/pubmed/select", &ApiService::pubmed_select, true},
        {"POST", "/api/pubmed/chat/*", &ApiService::pubmed_chat, true},
        {"GET", "/api/news/topics", &ApiService::news_topics, false},
        {"POST", "/api/news", &ApiService::news, true},
        {"POST", "/api/feedback", &ApiService::feedback, false},
    };
}

ApiResponse ApiService::handle(const ApiRequest& request) noexcept
{
    const auto started = std::chrono::steady_clock::now();
    ApiResponse response;
    std::string method = request.method, path;
    try {
        Context ctx(request);
        path = ctx.path;
        response = dispatch(ctx);
    } catch (const Error& e) {
        response = error_response(e.code(), e.what(), e.detail());
        if (e.code() == ErrorCode::Internal && deps_.logger)
            deps_.logger->error("internal error on {} {}: {}", method, path, e.what());
    } catch (const json::exception& e) {
        response = error_response(ErrorCode::InvalidRequest, "malformed JSON value in request");
    } catch (const std::bad_alloc&) {
        response = error_response(ErrorCode::Internal, "out of memory");
    } catch (const std::exception& e) {
        if (deps_.logger)
            deps_.logger->error("unhandled exception on {} {}: {}", method, path, e.what());
        response = error_response(ErrorCode::Internal, "internal error");
    } catch (...) {
        response = error_response(ErrorCode::Internal, "internal error");
    }

    try {
        if (response.content_type.rfind("application/json", 0) == 0 || response.content_type.rfind("text/", 0) == 0)
            response.body = deps_.scrubber->scrub(std::move(response.body));
        for (auto& [name, value] : response.headers)
            value = deps_.scrubber->scrub(std::move(value));
        if (deps_.logger) {
            const auto ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
            deps_.logger->info("{} {} -> {} ({} ms)", method, path, response.status, ms.count());
        }
    } catch (...) {
        response = error_response(ErrorCode::Internal, "internal error");
    }
    if (++served_ % 512 == 0 && deps_.store)
        deps_.store->evict_idle();
    return response;
}

ApiResponse ApiService::dispatch(Context& ctx)
{
    std::vector<std::string> allowed;
    for (const auto& route : routes_) {
        bool match = false;
        if (!route.path.empty() && route.path.back() == '*') {
            const auto prefix = std::string_view(route.path).substr(0, route.path.size() - 1);
            if (ctx.path.size() > prefix.size() && ctx.path.compare(0, prefix.size(), prefix) == 0 &&
                ctx.path.find('/', prefix.size()) == std::string::npos) {
                match = true;
                ctx.path_param = net::percent_decode(ctx.path.substr(prefix.size()));
            }
        } else {
            match = ctx.path == route.path;
        }
        if (!match)
            continue;
        if (ctx.request.method != route.method) {
            allowed.push_back(route.method);
            continue;
        }
        if (route.needs_session)
            ctx.session_id = require_session(ctx);
        return (this->*route.handler)(ctx);
    }
    if (!allowed.empty()) {
        std::string allow;
        for (const auto& m : allowed)
            allow += (allow.empty() ? "" : ", ") + m;
        auto r = error_response(ErrorCode::MethodNotAllowed, "method not allowed", {{"allow", allowed}});
        r.headers.emplace("Allow", allow);
        return r;
    }
    throw Error(ErrorCode::NotFound, "no such endpoint");
}

std::string ApiService::require_session(Context& ctx) const
{
    std::string token;
    const auto auth = net::header_value(ctx.request.headers, "Authorization");
    if (auth.rfind("Bearer ", 0) == 0)
        token = auth.substr(7);
    if (token.empty())
        token = cookie_value(net::header_value(ctx.request.headers, "Cookie"), kSessionCookie);
    if (token.empty())
        throw Error(ErrorCode::UnknownSession, "no session token; create one with POST /api/session");
    if (!deps_.store->exists(token))
        throw Error(ErrorCode::UnknownSession, "session is unknown or has expired",
                    {{"token_length", token.size()}});
    return token;
}

std::string ApiService::random_hex(std::size_t bytes)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    std::lock_guard lock(rng_mutex_);
    while (out.size() < 2 * bytes) {
        auto word = rng_();
        for (int i = 0; i < 16 && out.size() < 2 * bytes; ++i, word >>= 4)
            out.push_back(kHex[word & 0xF]);
    }
    return out;
}

std::size_t ApiService::restore()
{
    std::error_code ec;
    if (deps_.snapshot_file.empty() || !std::filesystem::exists(deps_.snapshot_file, ec))
        return 0;
    const auto n = deps_.store->load_snapshot(deps_.snapshot_file);
    if (deps_.logger)
        deps_.logger->info("restored {} sessions from {}", n, deps_.snapshot_file.string());
    return n;
}

void ApiService::shutdown()
{
    if (deps_.snapshot_file.empty())
        return;
    std::error_code ec;
    std::filesystem::create_directories(deps_.snapshot_file.parent_path(), ec);
    deps_.store->save_snapshot(deps_.snapshot_file);
    if (deps_.logger) {
        deps_.logger->info("saved {} sessions to {}", deps_.store->size(), deps_.snapshot_file.string());
        deps_.logger->flush();
    }
}

ApiResponse ApiService::create_session(Context&)
{
    const auto id = deps_.store->create_session();
    auto r = json_response({{"session_id", id}}, 201);
    r.headers.emplace("Set-Cookie", std::string(kSessionCookie) + "=" + id + "; Path=/; HttpOnly; SameSite=Strict");
    return r;
}

ApiResponse ApiService::list_models(Context&)
{
    json models = json::array();
    for (const auto& m : deps_.gateway->registry().models())
        models.push_back({{"id", m.id}, {"display_name", m.display_name}, {"route", llm::to_string(m.route)}});
    return json_response({{"models", models}});
}

ApiResponse ApiService::health(Context&)
{
    json body = deps_.health.is_object() ? deps_.health : json::object();
    body["status"] = "ok";
    body["catalog_images"] = deps_.catalog ? deps_.catalog->size() : 0;
    body["models"] = deps_.gateway->registry().models().size();
    body["sessions"] = deps_.store->size();
    return json_response(body);
}

ApiResponse ApiService::derm_get_case(Context& ctx)
{
    const auto spec = deps_.derm->current_case(ctx.session_id);
    json transcript = json::array();
    if (spec)
        transcript = llm::to_json(deps_.derm->transcript(ctx.session_id));
    return json_response({{"case", spec ? derm::public_view(*spec) : json(nullptr)},
                          {"actions", actions_json(deps_.derm->available_actions(ctx.session_id))},
                          {"transcript", transcript}});
}

ApiResponse ApiService::derm_new_case(Context& ctx)
{
    std::uint64_t seed;
    {
        std::lock_guard lock(rng_mutex_);
        seed = rng_();
    }
    std::mt19937_64 local(seed);
    const auto spec = deps_.derm->create_case(ctx.session_id, local);
    return json_response({{"case", derm::public_view(spec)},
                          {"actions", actions_json(deps_.derm->available_actions(ctx.session_id))}},
                         201);
}

ApiResponse ApiService::derm_model(Context& ctx)
{
    const auto spec = deps_.derm->select_model(ctx.session_id, ctx.string_field("model", true));
    return json_response({{"case", derm::public_view(spec)},
                          {"actions", actions_json(deps_.derm->available_actions(ctx.session_id))}});
}

ApiResponse ApiService::derm_feedback_mode(Context& ctx)
{
    const auto mode = derm::feedback_mode_from_string(ctx.string_field("mode", true));
    const auto spec = deps_.derm->set_feedback_mode(ctx.session_id, mode);
    return json_response({{"case", derm::public_view(spec)}});
}

ApiResponse ApiService::derm_message(Context& ctx)
{
    const auto text = ctx.string_field("text", true);
    const auto case_id = ctx.string_field("case_id", false);
    const auto reply = deps_.derm->patient_reply(ctx.session_id, case_id, text);
    json payload = reply_json(reply);
    payload["actions"] = actions_json(deps_.derm->available_actions(ctx.session_id));
    return maybe_stream(ctx.wants_stream(), reply.message.content, payload);
}

ApiResponse ApiService::derm_audio(Context& ctx)
{
    const FormPart* audio = ctx.part("audio");
    if (!audio)
        throw bad_field("audio", "multipart field \"audio\" is required");

    std::string format_text;
    if (const auto* f = ctx.part("format"))
        format_text = f->content;
    else if (audio->content_type == "audio/mpeg" || audio->filename.ends_with(".mp3"))
        format_text = "mp3";
    else
        format_text = "wav";
    llm::AudioClip clip;
    clip.format = llm::audio_format_from_string(format_text);
    clip.bytes = audio->content;

    bool speak = false;
    if (const auto* s = ctx.part("speak"))
        speak = s->content == "1" || s->content == "true";
    std::string case_id;
    if (const auto* c = ctx.part("case_id"))
        case_id = c->content;

    const auto out = deps_.derm->patient_reply_audio(ctx.session_id, case_id, clip, speak);
    json reply_audio = nullptr;
    if (out.reply_audio)
        reply_audio = {{"format", out.reply_audio->format == llm::AudioFormat::Mp3 ? "mp3" : "wav"},
                       {"duration_s", out.reply_audio->duration_s},
                       {"base64", base64(out.reply_audio->bytes)}};
    return json_response({{"transcript", out.transcript}, {"reply", reply_json(out.reply)}, {"reply_audio", reply_audio}});
}

ApiResponse ApiService::derm_labs(Context& ctx)
{
    const auto test = ctx.string_field("test_type", true);
    const auto result = deps_.derm->order_labs(ctx.session_id, ctx.string_field("case_id", false), test);
    json rows = json::array();
    for (const auto& row : result.rows)
        rows.push_back({{"section", row.section},
                        {"test", row.test},
                        {"result", row.result},
                        {"reference_range", row.reference_range}});
    return json_response({{"test_type", result.test_type},
                          {"patient_name", result.patient_name},
                          {"rows", rows},
                          {"table", result.table}});
}

ApiResponse ApiService::derm_image(Context& ctx)
{
    const auto blob = deps_.derm->reveal_image(ctx.session_id, ctx.query_value("case_id"));
    ApiResponse r;
    r.content_type = blob.media_type;
    r.body = blob.bytes;
    return r;
}

ApiResponse ApiService::derm_guess(Context& ctx)
{
    const auto guess = ctx.string_field("guess", true);
    const auto result = deps_.derm->submit_guess(ctx.session_id, ctx.string_field("case_id", false), guess);
    return json_response({{"matched", result.outcome.matched},
                          {"ratio", result.outcome.ratio},
                          {"cutoff", result.outcome.cutoff},
                          {"condition", result.revealed_condition},
                          {"next_actions", actions_json(result.next_actions)}});
}

ApiResponse ApiService::derm_repeat(Context& ctx)
{
    const auto spec = deps_.derm->repeat_case(ctx.session_id, ctx.string_field("case_id", false));
    return json_response({{"case", derm::public_view(spec)},
                          {"actions", actions_json(deps_.derm->available_actions(ctx.session_id))}});
}

ApiResponse ApiService::derm_report(Context& ctx)
{
    const auto report = deps_.derm->generate_report(ctx.session_id, ctx.query_value("case_id"));
    return json_response({{"condition_info", report.condition_info},
                          {"transcript", llm::to_json(report.transcript)},
                          {"performance_feedback", report.performance_feedback}});
}

ApiResponse ApiService::pubmed_search(Context& ctx)
{
    pubmed::SearchParams params;
    params.term = ctx.string_field("term", true);
    if (auto retmax = ctx.int_field("retmax"))
        params.retmax = *retmax;
    if (auto d = ctx.string_field("mindate", false); !d.empty())
        params.mindate = pubmed::parse_date(d);
    if (auto d = ctx.string_field("maxdate", false); !d.empty())
        params.maxdate = pubmed::parse_date(d);
    params.validate();

    const auto articles = deps_.pubmed->search(params);
    json out = json::array();
    for (const auto& a : articles)
        out.push_back(pubmed::to_json(a));
    deps_.store->put({ctx.session_id, kPubmedNamespace, "results"}, dump(out));
    return json_response(out);
}

ApiResponse ApiService::pubmed_select(Context& ctx)
{
    const auto pmid = ctx.string_field("pmid", true);
    pubmed::require_pmid(pmid);
    const auto model = ctx.string_field("model", true);
    deps_.gateway->route_model(model);

    std::optional<pubmed::ArticleMetadata> article;
    if (const auto stored = deps_.store->get({ctx.session_id, kPubmedNamespace, "results"})) {
        const auto results = json::parse(stored->text(), nullptr, false);
        if (results.is_array())
            for (const auto& r : results)
                if (r.value("pmid", "") == pmid) {
                    pubmed::ArticleMetadata a;
                    a.pmid = pmid;
                    a.title = r.value("title", "");
                    if (r.contains("pmcid") && r["pmcid"].is_string())
                        a.pmcid = r["pmcid"].get<std::string>();
                    article = std::move(a);
                    break;
                }
    }
    if (!article) {
        auto parsed = pubmed::parse_articles(deps_.pubmed->fetch_article_xml({pmid}));
        if (parsed.empty())
            throw Error(ErrorCode::NotFound, "PubMed has no record for this PMID", {{"pmid", pmid}});
        article = std::move(parsed.front());
    }

    const auto selection = pubmed::select_for_chat(*article, model, *deps_.gateway);
    auto full = pubmed::fetch_full_text(selection.pmcid, *deps_.extractor);
    if (full.title.empty())
        full.title = article->title;

    const std::string chat_id = random_hex(8);
    deps_.store->put({ctx.session_id, kPubmedNamespace, "chat:" + chat_id},
                     session::StateValue::Record{{"pmid", selection.pmid},
                                                 {"pmcid", selection.pmcid},
                                                 {"model", selection.model},
                                                 {"title", full.title},
                                                 {"text", full.text},
                                                 {"source_url", full.source_url},
                                                 {"history", session::StateValue::List{}}});
    return json_response({{"chat_id", chat_id},
                          {"pmid", selection.pmid},
                          {"pmcid", selection.pmcid},
                          {"title", full.title},
                          {"model", selection.model},
                          {"pmc_url", selection.pmc_url},
                          {"pdf_url", selection.pdf_url}});
}

ApiResponse ApiService::pubmed_chat(Context& ctx)
{
    const auto question = ctx.string_field("question", true);
    const auto lock = deps_.store->lock_namespace(ctx.session_id, kPubmedNamespace);
    const session::SessionKey key{ctx.session_id, kPubmedNamespace, "chat:" + ctx.path_param};
    const auto stored = deps_.store->get(key);
    if (!stored)
        throw Error(ErrorCode::NotFound, "no such paper chat; select a paper first");

    pubmed::FullText full;
    full.pmcid = stored->at("pmcid").text();
    full.title = stored->at("title").text();
    full.text = stored->at("text").text();
    full.source_url = stored->at("source_url").text();
    auto history = history_from_state(stored->at("history"));

    const auto request = pubmed::build_paper_chat(*deps_.gateway, stored->at("model").text(), full, question,
                                                  history, deps_.paper_prompt);
    const auto reply = pubmed::ask_paper(*deps_.gateway, request, full);
    history.append(llm::Role::User, question);
    history.append(reply);

    auto record = stored->record();
    record["history"] = history_state(history);
    deps_.store->put(key, std::move(record));
    return maybe_stream(ctx.wants_stream(), reply.content,
                        {{"message", llm::to_json(reply)}, {"turns", history.count(llm::Role::User)}});
}

ApiResponse ApiService::news_topics(Context&)
{
    return json_response({{"topics", deps_.news_topics}});
}

ApiResponse ApiService::news(Context& ctx)
{
    if (!deps_.news_search || !deps_.summarizer)
        throw Error(ErrorCode::UpstreamUnavailable, "news search is not configured");
    news::NewsParams params;
    params.topics = ctx.list_field("topics", true);
    params.keywords = ctx.list_field("keywords", false);
    if (auto r = ctx.string_field("recency", false); !r.empty())
        params.recency = news::recency_from_string(r);
    if (auto total = ctx.int_field("total"))
        params.total = *total;
    params.validate();

    const auto today = std::chrono::floor<std::chrono::days>(deps_.clock());
    const auto result = news::gather_news(params, *deps_.news_search, *deps_.summarizer, today);
    json body = news::to_json(result);
    body["text"] = news::render_blocks(result);
    return json_response(body);
}

ApiResponse ApiService::feedback(Context& ctx)
{
    if (!deps_.mailer)
        throw Error(ErrorCode::MailerUnavailable, "feedback relay is not configured");
    FeedbackMessage message;
    message.body = ctx.string_field("body", false);
    message.sender_contact = ctx.string_field("contact", false);
    message.submitted_at = deps_.clock();
    message.validate();
    deps_.mailer->send(message);
    return json_response({{"status", "sent"}, {"submitted_at", format_timestamp(message.submitted_at)}}, 202);
}

} // namespace meditools::api
