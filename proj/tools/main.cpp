// Command-line front end: deploy fixtures, run scripted sessions, and sweep
// table sizes for cost tables. Exit codes: 0 = keys agreed, 2 = protocol
// abort, 1 = usage or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wbsn/metrics.hpp"
#include "wbsn/simnet.hpp"

namespace {

using namespace wbsn;

int cmd_deploy(std::size_t n_sensors, std::size_t m_intermediates, std::uint64_t seed,
               const std::string& out_path) {
    const Deployment d = make_deployment(n_sensors, m_intermediates, seed);
    save_deployment(d, out_path);
    std::cout << "deployment written: " << out_path << "\n";
    std::cout << "SN storage: " << sn_storage_bits() << " bits each\n";
    std::cout << "IN storage: " << in_storage_bits() << " bits each\n";
    std::cout << "HN storage: " << hn_storage_bits(n_sensors, m_intermediates) << " bits\n";
    return 0;
}

int cmd_run(const Scenario& sc) {
    const Deployment d = load_deployment(sc.deployment_path);
    World world = build_world(d, sc.policy);
    if (sc.sensor >= world.sensors.size()) {
        throw std::invalid_argument("scenario names sensor " + std::to_string(sc.sensor) +
                                    " but the deployment has " +
                                    std::to_string(world.sensors.size()));
    }
    const SessionResult res = run_session(world, sc.script, sc.seed, sc.sensor);

    if (!sc.transcript_path.empty()) {
        std::ofstream out(sc.transcript_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write transcript: " + sc.transcript_path);
        write_transcript(out, res.transcript);
    }
    if (!sc.report_path.empty()) {
        std::ofstream out(sc.report_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report: " + sc.report_path);
        const CostReport report = collect(res.sn_ops, res.in_ops, res.hn_ops, res.transcript,
                                          d.sensors.size(), d.intermediates.size());
        write_report(out, report);
    }

    std::cout << res.outcome.describe() << "\n";
    if (res.outcome.agreed()) {
        if (res.outcome.sn_key != res.outcome.hn_key) {
            std::cout << "key mismatch: sn=" << res.outcome.sn_key->hex()
                      << " hn=" << res.outcome.hn_key->hex() << "\n";
            return 2;
        }
        std::cout << "session key: " << res.outcome.sn_key->hex() << "\n";
        return 0;
    }
    return 2;
}

int cmd_bench(const std::vector<std::size_t>& n_list, std::size_t trials, std::uint64_t seed,
              const std::string& out_path) {
    std::ostringstream csv;
    csv << "n,snHashes,snXors,hnHashes,hnXors,snTimeMs,snEnergyMJ,hnTimeMs,hnEnergyMJ,"
           "bitsHop1,bitsHop2,bitsHop3,bitsHop4\n";
    for (std::size_t n : n_list) {
        const Deployment d = make_deployment(n, 1, seed);
        World world = build_world(d, {});
        CostReport report;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t sensor = t % n;
            const SessionResult res = run_session(world, {}, seed + t, sensor);
            if (!res.outcome.agreed()) {
                std::cerr << "bench: unexpected outcome at n=" << n << " trial " << t << ": "
                          << res.outcome.describe() << "\n";
                return 2;
            }
            const CostReport r = collect(res.sn_ops, res.in_ops, res.hn_ops, res.transcript,
                                         n, d.intermediates.size());
            if (t > 0 && (r.sn.hash_count != report.sn.hash_count ||
                          r.sn.xor_count != report.sn.xor_count ||
                          r.hn.hash_count != report.hn.hash_count ||
                          r.hn.xor_count != report.hn.xor_count ||
                          r.bits_sent != report.bits_sent)) {
                std::cerr << "bench: per-session costs are not stable at n=" << n << "\n";
                return 2;
            }
            report = r;
        }
        csv << n << ',' << report.sn.hash_count << ',' << report.sn.xor_count << ','
            << report.hn.hash_count << ',' << report.hn.xor_count << ',' << report.sn.time_ms
            << ',' << report.sn.energy_mj << ',' << report.hn.time_ms << ','
            << report.hn.energy_mj << ',' << report.bits_sent[0] << ',' << report.bits_sent[1]
            << ',' << report.bits_sent[2] << ',' << report.bits_sent[3] << "\n";
    }
    std::cout << csv.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write bench table: " + out_path);
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tier body-sensor-network authenticated key agreement: protocol engine, "
                 "adversarial channel simulator, and cost accounting"};
    app.require_subcommand(1);

    // deploy
    auto* deploy = app.add_subcommand("deploy", "Generate a deployment fixture");
    std::size_t n_sensors = 1;
    std::size_t m_intermediates = 1;
    std::uint64_t deploy_seed = 0;
    std::string deploy_out = "deployment.json";
    deploy->add_option("sensors", n_sensors, "number of sensor nodes")
        ->required()
        ->check(CLI::PositiveNumber);
    deploy->add_option("intermediates", m_intermediates, "number of intermediate nodes")
        ->required()
        ->check(CLI::PositiveNumber);
    deploy->add_option("--seed", deploy_seed, "rng seed for all drawn ids and keys")
        ->capture_default_str();
    deploy->add_option("--out", deploy_out, "output path")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "Run one session from a scenario or deployment");
    std::string scenario_path;
    std::string deployment_path;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    std::uint32_t delta_t = 0;
    std::uint32_t hop_delay = 0;
    std::size_t sensor_index = 0;
    bool sensor_set = false;
    std::string transcript_path;
    std::string report_path;
    auto* scenario_opt =
        run->add_option("--scenario", scenario_path, "scenario file (deployment, policy, "
                                                     "seed, adversary script)");
    auto* deployment_opt =
        run->add_option("--deployment", deployment_path, "deployment file; runs one honest "
                                                         "session");
    scenario_opt->excludes(deployment_opt);
    run->add_option("--seed", run_seed, "override the session seed (default: scenario value)")
        ->each([&](const std::string&) { run_seed_set = true; });
    run->add_option("--delta-t", delta_t,
                    "override the freshness window (default: scenario value or 5)")
        ->check(CLI::PositiveNumber);
    run->add_option("--hop-delay", hop_delay,
                    "override the per-hop delay (default: scenario value or 1)")
        ->check(CLI::PositiveNumber);
    run->add_option("--sensor", sensor_index, "sensor that initiates the session")
        ->each([&](const std::string&) { sensor_set = true; });
    run->add_option("--transcript", transcript_path, "write the delivered-frame transcript");
    run->add_option("--report", report_path, "write the cost report");

    // bench
    auto* bench = app.add_subcommand("bench", "Cost table across hub table sizes");
    std::vector<std::size_t> n_list{1, 2, 5, 10};
    std::size_t trials = 3;
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    bench->add_option("--n", n_list, "table sizes to sweep")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--trials", trials, "sessions per size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--seed", bench_seed, "base seed")->capture_default_str();
    bench->add_option("--out", bench_out, "also write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (deploy->parsed()) {
            return cmd_deploy(n_sensors, m_intermediates, deploy_seed, deploy_out);
        }
        if (run->parsed()) {
            Scenario sc;
            if (!scenario_path.empty()) {
                sc = load_scenario(scenario_path);
            } else if (!deployment_path.empty()) {
                sc.deployment_path = deployment_path;
            } else {
                std::cerr << "run: need --scenario or --deployment\n";
                return 1;
            }
            if (run_seed_set) sc.seed = run_seed;
            if (delta_t > 0) sc.policy.delta_t = delta_t;
            if (hop_delay > 0) sc.policy.per_hop_delay = hop_delay;
            if (sensor_set) sc.sensor = sensor_index;
            if (!transcript_path.empty()) sc.transcript_path = transcript_path;
            if (!report_path.empty()) sc.report_path = report_path;
            return cmd_run(sc);
        }
        if (bench->parsed()) {
            return cmd_bench(n_list, trials, bench_seed, bench_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
