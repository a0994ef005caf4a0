#include "lbgame/checks.hpp"

#include <algorithm>
#include <stdexcept>

namespace lbg {

std::string_view to_string(CheckStatus status)
{
    switch (status) {
    case CheckStatus::Pass:
        return "pass";
    case CheckStatus::Fail:
        return "fail";
    case CheckStatus::NotApplicable:
        return "not_applicable";
    }
    return "?";
}

Check& CheckList::add(std::string name, CheckStatus status, Witness witness)
{
    checks_.push_back({std::move(name), status, std::move(witness)});
    return checks_.back();
}

const Check& CheckList::at(std::string_view name) const
{
    for (const Check& c : checks_)
        if (c.name == name)
            return c;
    throw std::out_of_range("no check named " + std::string(name));
}

bool CheckList::passed() const
{
    return std::none_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.status == CheckStatus::Fail; });
}

std::vector<const Check*> CheckList::failures() const
{
    std::vector<const Check*> out;
    for (const Check& c : checks_)
        if (c.status == CheckStatus::Fail)
            out.push_back(&c);
    return out;
}

} // namespace lbg
