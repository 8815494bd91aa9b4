#pragma once

#include <string>
#include <vector>

namespace flowcat {

struct Issue {
    std::string check;
    std::string message;
    std::vector<std::string> witness;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const { return issues.empty(); }
    void add(std::string check, std::string message, std::vector<std::string> witness = {})
    {
        issues.push_back({std::move(check), std::move(message), std::move(witness)});
    }
    void merge(const ValidationReport& other)
    {
        issues.insert(issues.end(), other.issues.begin(), other.issues.end());
    }
    bool has(const std::string& check) const
    {
        for (const auto& i : issues)
            if (i.check == check) return true;
        return false;
    }
};

}  // namespace flowcat
