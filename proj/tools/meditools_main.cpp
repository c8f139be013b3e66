#include "meditools/api/http_server.hpp"
#include "meditools/api/service.hpp"
#include "meditools/net/replay_transport.hpp"
#include "meditools/pubmed/client.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <map>
#include <pthread.h>
#include <thread>

using namespace meditools;

namespace {

int serve(const std::string& host, int port)
{
    // Signals are taken synchronously by a waiter thread, never in a handler.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    auto bundle = api::build_service(api::ServiceConfig::from_process_env());
    auto& service = *bundle.service;
    service.restore();

    api::HttpServer server(service);
    const int bound = server.bind(host, port);
    service.deps().logger->info("listening on http://{}:{}", host, bound);

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.deps().logger->info("signal {} received, draining", sig);
        server.stop();
    });
    server.run();
    if (waiter.joinable()) {
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
    }
    service.shutdown();
    return 0;
}

int validate_catalog(const std::string& root)
{
    const auto catalog = catalog::Catalog::scan(root);
    std::map<std::string, std::size_t> per_condition;
    for (const auto& entry : catalog.entries())
        ++per_condition[entry.condition_name];
    for (const auto& [condition, count] : per_condition)
        std::cout << condition << ": " << count << "\n";
    std::cout << catalog.size() << " images, " << per_condition.size() << " conditions\n";
    return 0;
}

int search_pubmed(const pubmed::SearchParams& params, const std::string& fixtures, bool as_json)
{
    std::shared_ptr<net::HttpTransport> transport =
        fixtures.empty() ? net::make_live_transport()
                         : std::static_pointer_cast<net::HttpTransport>(net::ReplayTransport::from_directory(fixtures));
    pubmed::ClientOptions options;
    if (const char* key = std::getenv("MEDITOOLS_NCBI_KEY"))
        options.api_key = key;
    pubmed::PubMedClient client(transport, options);
    const auto articles = client.search(params);

    if (as_json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& a : articles)
            out.push_back(pubmed::to_json(a));
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    for (const auto& a : articles) {
        std::string authors;
        for (const auto& name : a.authors)
            authors += (authors.empty() ? "" : ", ") + name;
        std::cout << a.title << "\n"
                  << "PMID: " << a.pmid << "\n"
                  << "Authors: " << authors << "\n"
                  << "Year: " << a.year << "\n"
                  << "Journal: " << a.journal << "\n"
                  << "Link: " << a.pubmed_url << "\n";
        if (a.pmcid)
            std::cout << "Full Text: " << pubmed::pmc_full_text_url(*a.pmcid) << "\n";
        std::cout << "Abstract: " << (a.abstract.empty() ? "(none)" : a.abstract) << "\n\n";
    }
    std::cout << articles.size() << " articles\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"meditools: medical-education LLM service and operator utilities"};
    app.require_subcommand(1);

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service (configured from MEDITOOLS_* variables)");
    serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
    serve_cmd->add_option("--port", port, "Listen port, 0 for any free port")->capture_default_str();

    auto* catalog_cmd = app.add_subcommand("catalog", "Image catalog utilities");
    catalog_cmd->require_subcommand(1);
    std::string root;
    auto* validate_cmd = catalog_cmd->add_subcommand("validate", "Scan an image root and summarize it");
    validate_cmd->add_option("root", root, "Catalog root directory")->required();

    auto* pubmed_cmd = app.add_subcommand("pubmed", "PubMed utilities");
    pubmed_cmd->require_subcommand(1);
    auto* search_cmd = pubmed_cmd->add_subcommand("search", "Search PubMed and print article blocks");
    std::string term, mindate = "2015/01/01", maxdate = "2022/07/06", fixtures;
    int retmax = 10;
    bool as_json = false;
    search_cmd->add_option("term", term, "Search term")->required();
    search_cmd->add_option("--retmax", retmax, "Number of papers")->capture_default_str();
    search_cmd->add_option("--mindate", mindate, "YYYY/MM/DD")->capture_default_str();
    search_cmd->add_option("--maxdate", maxdate, "YYYY/MM/DD")->capture_default_str();
    search_cmd->add_option("--fixtures", fixtures, "Replay recorded responses from this directory");
    search_cmd->add_flag("--json", as_json, "Print JSON instead of blocks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve_cmd->parsed())
            return serve(host, port);
        if (validate_cmd->parsed())
            return validate_catalog(root);
        if (search_cmd->parsed()) {
            pubmed::SearchParams params;
            params.term = term;
            params.retmax = retmax;
            params.mindate = pubmed::parse_date(mindate);
            params.maxdate = pubmed::parse_date(maxdate);
            return search_pubmed(params, fixtures, as_json);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
