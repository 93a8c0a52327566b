// Command-line frontend: per-field reports, order inventories, Eichler
// class numbers, and batch sweeps with optional oracle verification.
//
// Exit codes: 0 success, 2 usage/input error, 3 internal non-integrality,
// 4 verification failure.

#include <future>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eichler/eichler.hpp"

namespace {

using namespace eichler;

long parse_prime(long p, const char* what) {
    if (p < 2 || !is_prime(p)) throw std::invalid_argument(std::string(what) + ": " + std::to_string(p) + " is not prime");
    return p;
}

std::vector<long> parse_ell_list(const std::string& csv) {
    std::vector<long> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stol(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

// map rational primes to the primes of F above them; --prime ell:root
// selections restrict a split ell to one factor
std::vector<PrimeIdealF> ideals_for(const RealQuadField& F, const std::vector<long>& ells,
                                    const std::map<long, long>& picks) {
    std::vector<PrimeIdealF> out;
    for (long l : ells) {
        parse_prime(l, "ideal list");
        auto above = factor_rational_prime(F, l);
        auto pick = picks.find(l);
        if (pick != picks.end()) {
            bool found = false;
            for (const auto& P : above)
                if (P.kind == SplitKind::Split && P.root == pick->second) {
                    out.push_back(P);
                    found = true;
                }
            if (!found)
                throw std::invalid_argument("--prime " + std::to_string(l) + ":" + std::to_string(pick->second) +
                                            " does not select a split prime of F");
        } else {
            for (const auto& P : above) out.push_back(P);
        }
    }
    return out;
}

int cmd_field(long p) {
    auto F = build_field(parse_prime(p, "field"));
    std::cout << field_to_text(F);
    return 0;
}

int cmd_orders(long p, const std::string& over) {
    auto F = build_field(parse_prime(p, "orders"));
    auto fields = enumerate_cm_fields(F);
    if (over == "OF") {
        std::cout << orders_to_text(enumerate_suborders_OF(F, fields));
    } else if (over == "A") {
        if (p % 4 != 1) throw std::invalid_argument("orders --over A requires p = 1 mod 4");
        std::cout << orders_to_text(enumerate_proper_A_orders(F, fields));
    } else {
        throw std::invalid_argument("orders: --over must be OF or A");
    }
    return 0;
}

int cmd_classnum(long p, const std::string& disc_csv, const std::string& level_csv,
                 const std::vector<std::string>& prime_picks, bool json) {
    auto F = build_field(parse_prime(p, "classnum"));
    std::map<long, long> picks;
    for (const auto& s : prime_picks) {
        auto pos = s.find(':');
        if (pos == std::string::npos) throw std::invalid_argument("--prime expects ell:root");
        picks[std::stol(s.substr(0, pos))] = std::stol(s.substr(pos + 1));
    }
    EichlerInput in{F, ideals_for(F, parse_ell_list(disc_csv), picks),
                    ideals_for(F, parse_ell_list(level_csv), picks)};
    validate(in);
    auto rep = class_number_eichler(in);
    if (json)
        std::cout << report_to_json_string(rep, F.d_F);
    else
        std::cout << report_to_text(rep);
    return 0;
}

int cmd_sweep(long pmax, bool verify, int jobs) {
    if (pmax < 2 || pmax > 100'000) throw std::invalid_argument("sweep: --pmax must be in [2, 100000]");
    std::vector<long> primes;
    for (long p = 2; p < pmax; ++p)
        if (is_prime(p)) primes.push_back(p);

    auto row_for = [verify](long p) -> std::string {
        if (verify) verify_prime(p, /*brute_unit_search=*/p < 1000);
        auto F = build_field(p);
        auto fields = enumerate_cm_fields(F);
        auto inventory = enumerate_suborders_OF(F, fields);
        auto rep = class_number_eichler(EichlerInput{F, {}, {}}, fields, inventory);
        return sweep_csv_row(F, fields, rep.h_O);
    };

    if (jobs < 1) jobs = 1;
    std::cout << sweep_csv_header() << "\n";
    // parallel over p, output still ordered by p
    for (size_t base = 0; base < primes.size(); base += jobs) {
        std::vector<std::future<std::string>> batch;
        for (int j = 0; j < jobs && base + j < primes.size(); ++j)
            batch.push_back(std::async(std::launch::async, row_for, primes[base + j]));
        for (auto& f : batch) std::cout << f.get() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact class numbers for Eichler orders over Q(sqrt p)"};
    app.require_subcommand(1);

    long p = 0;
    auto* field = app.add_subcommand("field", "invariants of F = Q(sqrt p)");
    field->add_option("p", p, "prime p")->required();

    std::string over = "OF";
    auto* orders = app.add_subcommand("orders", "quadratic orders with w(B) > 1");
    orders->add_option("p", p, "prime p")->required();
    orders->add_option("--over", over, "base ring: OF or A (default OF)");

    std::string disc_csv, level_csv;
    std::vector<std::string> prime_picks;
    bool json = false;
    auto* classnum = app.add_subcommand("classnum", "h(O) for an Eichler order of square-free level");
    classnum->add_option("p", p, "prime p")->required();
    classnum->add_option("--disc", disc_csv, "rational primes under the discriminant ideal, e.g. 2,3");
    classnum->add_option("--level", level_csv, "rational primes under the level ideal");
    classnum->add_option("--prime", prime_picks, "select one split factor, as ell:root (repeatable)");
    classnum->add_flag("--json", json, "emit the canonical JSON report");

    long pmax = 0;
    bool verify = false;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "CSV sweep over primes p < pmax");
    sweep->add_option("--pmax", pmax, "sweep bound (< 10^5)")->required();
    sweep->add_flag("--verify", verify, "run every oracle cross-check per prime; exit 4 on failure");
    sweep->add_option("--jobs", jobs, "parallel workers");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(field)) return cmd_field(p);
        if (app.got_subcommand(orders)) return cmd_orders(p, over);
        if (app.got_subcommand(classnum)) return cmd_classnum(p, disc_csv, level_csv, prime_picks, json);
        if (app.got_subcommand(sweep)) return cmd_sweep(pmax, verify, jobs);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const eichler::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 4;
    } catch (const eichler::NonIntegralError& e) {
        std::cerr << "internal non-integrality: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
