#include <sstream>
#include <stdexcept>

#include "indep/calculus.hpp"

namespace indep {

ProofCheck validate_proof(const Proof& proof, const AtomSet& sigma) {
    const auto& steps = proof.steps();
    if (steps.empty()) return {false, 0, "empty proof"};
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& step = steps[i];
        if (step.is_hypothesis()) {
            if (!step.premises.empty()) return {false, i, "hypothesis with premises"};
            bool member = sigma.contains(step.conclusion);
            if (!member && !step.conclusion.is_marginal() && step.conclusion.condition().empty())
                member = sigma.contains(Atom::marginal(step.conclusion.left(), step.conclusion.right()));
            if (!member) return {false, i, "hypothesis not in sigma"};
            continue;
        }
        std::vector<Atom> premises;
        for (auto p : step.premises) {
            if (p >= i) return {false, i, "premise index " + std::to_string(p) + " does not precede step"};
            premises.push_back(steps[p].conclusion);
        }
        if (!is_valid_instance(*step.rule, premises, step.conclusion))
            return {false, i, "not an instance of " + std::string(rule_name(*step.rule))};
    }
    return {};
}

std::string format_proof(const Proof& proof) {
    std::ostringstream out;
    const auto& steps = proof.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        out << i << ". " << format_atom(steps[i].conclusion) << " [";
        if (steps[i].is_hypothesis()) {
            out << "hyp";
        } else {
            out << rule_name(*steps[i].rule);
            for (auto p : steps[i].premises) out << ' ' << p;
        }
        out << "]\n";
    }
    return out.str();
}

Proof parse_proof(std::string_view text) {
    std::vector<ProofStep> steps;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("proof line " + std::to_string(line_no) + ": " + msg, 0, line_no);
        };
        const auto dot = line.find(". ");
        const auto open = line.rfind(" [");
        const auto close = line.rfind(']');
        if (dot == std::string::npos || open == std::string::npos || close == std::string::npos || close < open)
            throw fail("expected '<index>. <atom> [<justification>]'");
        if (std::stoul(line.substr(0, dot)) != steps.size()) throw fail("step indices must be consecutive");
        ProofStep step{parse_atom(line.substr(dot + 2, open - dot - 2)), std::nullopt, {}};
        std::istringstream just(line.substr(open + 2, close - open - 2));
        std::string tag;
        just >> tag;
        if (tag != "hyp") {
            step.rule = parse_rule(tag);
            if (!step.rule) throw fail("unknown rule '" + tag + "'");
            std::size_t p;
            while (just >> p) step.premises.push_back(p);
        }
        steps.push_back(std::move(step));
    }
    return Proof(std::move(steps));
}

nlohmann::json proof_to_json(const Proof& proof) {
    nlohmann::json steps = nlohmann::json::array();
    const auto& ps = proof.steps();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        steps.push_back({{"index", i},
                         {"atom", format_atom(ps[i].conclusion)},
                         {"rule", ps[i].is_hypothesis() ? std::string("hyp") : std::string(rule_name(*ps[i].rule))},
                         {"premises", ps[i].premises}});
    }
    return {{"steps", steps}};
}

Proof proof_from_json(const nlohmann::json& j) {
    std::vector<ProofStep> steps;
    for (const auto& s : j.at("steps")) {
        ProofStep step{parse_atom(s.at("atom").get<std::string>()), std::nullopt, {}};
        const auto tag = s.at("rule").get<std::string>();
        if (tag != "hyp") {
            step.rule = parse_rule(tag);
            if (!step.rule) throw std::invalid_argument("unknown rule '" + tag + "'");
        }
        step.premises = s.at("premises").get<std::vector<std::size_t>>();
        steps.push_back(std::move(step));
    }
    return Proof(std::move(steps));
}

}  // namespace indep
