#pragma once

#include "lbgame/game.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lbg {

enum class CheckStatus { Pass, Fail, NotApplicable };

std::string_view to_string(CheckStatus status);

/// Concrete evidence attached to a failed (or not-applicable) check. Servers
/// are game server ids, not graph node indices.
struct Witness {
    std::vector<ServerId> nodes;
    std::vector<std::pair<ServerId, ServerId>> arcs;
    std::string note;

    [[nodiscard]] bool empty() const { return nodes.empty() && arcs.empty() && note.empty(); }
};

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    Witness witness;
};

/// Named checks in evaluation order.
class CheckList {
public:
    Check& add(std::string name, CheckStatus status, Witness witness = {});
    Check& pass(std::string name) { return add(std::move(name), CheckStatus::Pass); }
    Check& fail(std::string name, Witness witness) { return add(std::move(name), CheckStatus::Fail, std::move(witness)); }
    Check& skip(std::string name, std::string why) { return add(std::move(name), CheckStatus::NotApplicable, {{}, {}, std::move(why)}); }
    Check& expect(std::string name, bool ok, Witness witness = {})
    {
        return ok ? pass(std::move(name)) : fail(std::move(name), std::move(witness));
    }

    /// Status of the named check; throws std::out_of_range if absent.
    [[nodiscard]] const Check& at(std::string_view name) const;
    [[nodiscard]] bool passed() const;
    [[nodiscard]] const std::vector<Check>& all() const { return checks_; }
    [[nodiscard]] std::vector<const Check*> failures() const;

private:
    std::vector<Check> checks_;
};

} // namespace lbg
