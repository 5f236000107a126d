#pragma once

#include "foliation/cone.hpp"
#include "foliation/domain.hpp"
#include "foliation/eta.hpp"
#include "foliation/scenario.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace foliation {

struct ReportOptions {
    std::uint64_t seed = 1;
    ConeOptions cone;
    TransversalOptions transversal;
    ScanOptions scan;
    CompletenessOptions complete;
    int horizon = 0;  // 0: each sequence's own horizon
    DomainFamily family = DomainFamily::shrink;
    int steps = 64;
    double base_scale = 0.4;  // U for convergence checks is the domain scaled about its centre
    int chart_samples = 300;
};

enum class CheckStatus { pass, fail };

struct ReportLine {
    std::string scenario;
    std::string expectation;
    CheckKind kind = CheckKind::charts;
    CheckStatus status = CheckStatus::fail;
    std::string measured;
    std::string expected;
    std::string citation;
    std::string reason;  // why a FAIL happened; empty on PASS
};

struct Report {
    std::vector<ReportLine> lines;
    bool passed() const;
    int failures() const;
};

// Runs every declared expectation. A check that throws becomes a FAIL carrying the message.
Report run_report(const Scenario& sc, const ReportOptions& opts = {});

// Single expectation, same semantics as in run_report.
ReportLine run_expectation(const Scenario& sc, const Expectation& e, const ReportOptions& opts = {});

void write_report_csv(std::ostream& out, const Report& report, bool header = true);
void write_report_text(std::ostream& out, const Report& report);

}  // namespace foliation
