#pragma once

// Text and structured (JSON) rendering of analysis results. Schemas are in
// docs/report-format.md.

#include <mcn/fdi.hpp>
#include <mcn/oracle.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mcn {

enum class ReportFormat { Text, Structured };

struct AnalysisSection
{
    int r = 0;
    Method method = Method::Both;
    std::vector<FdiReport> reports;
    std::optional<SufficientCondition> sufficient;

    int solvable_count() const;
};

std::string render_validation(const Mcn& mcn, const ValidationReport& v, ReportFormat format);
std::string render_analysis(const std::vector<AnalysisSection>& sections, ReportFormat format);
std::string render_check(const FdiReport& report, ReportFormat format);
std::string render_oracle(const FaultScenario& s, const OracleOptions& opt, const ConsistencyResult& c,
                          ReportFormat format);

}  // namespace mcn
