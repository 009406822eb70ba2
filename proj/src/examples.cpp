#include "emach/examples.hpp"

namespace emach::examples {

namespace {

Alphabet binary() { return Alphabet({"0", "1"}); }

void require_open_unit(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0))
        throw DomainError(std::string("parameter ") + name + " must lie in (0,1), got " + std::to_string(value));
}

}  // namespace

Machine even(double p) {
    require_open_unit(p, "p");
    return Machine(2, binary(), {{0, 0, p, 0}, {0, 1, 1.0 - p, 1}, {1, 1, 1.0, 0}});
}

Machine abc(double p, double q) {
    require_open_unit(p, "p");
    require_open_unit(q, "q");
    if (p == q) throw DomainError("abc requires p != q, otherwise the two states coincide");
    return Machine(2, binary(), {{0, 0, 1.0 - p, 1}, {0, 1, p, 1}, {1, 0, 1.0 - q, 0}, {1, 1, q, 0}});
}

Machine np2(double p) {
    require_open_unit(p, "p");
    return Machine(4, binary(),
                   {{0, 0, p, 1},
                    {0, 1, 1.0 - p, 3},
                    {1, 1, 1.0, 2},
                    {2, 0, p, 3},
                    {2, 1, 1.0 - p, 1},
                    {3, 1, 1.0, 0}});
}

Machine np2_minimal(double p) {
    require_open_unit(p, "p");
    return Machine(2, binary(), {{0, 0, p, 1}, {0, 1, 1.0 - p, 1}, {1, 1, 1.0, 0}});
}

Machine sns(double p, double q) {
    require_open_unit(p, "p");
    require_open_unit(q, "q");
    return Machine(2, binary(), {{0, 1, p, 0}, {0, 1, 1.0 - p, 1}, {1, 1, q, 1}, {1, 0, 1.0 - q, 0}});
}

Machine biased_coin(double p) {
    require_open_unit(p, "p");
    return Machine(1, binary(), {{0, 0, 1.0 - p, 0}, {0, 1, p, 0}});
}

std::vector<std::string> names() { return {"even", "abc", "np2", "np2-minimal", "sns", "coin"}; }

Machine by_name(const std::string& name, const std::vector<double>& params) {
    auto arity = [&](std::size_t n) {
        if (params.size() != n)
            throw DomainError("example '" + name + "' takes " + std::to_string(n) + " parameter(s), got " +
                              std::to_string(params.size()));
    };
    if (name == "even") {
        arity(1);
        return even(params[0]);
    }
    if (name == "abc") {
        arity(2);
        return abc(params[0], params[1]);
    }
    if (name == "np2") {
        arity(1);
        return np2(params[0]);
    }
    if (name == "np2-minimal") {
        arity(1);
        return np2_minimal(params[0]);
    }
    if (name == "sns") {
        arity(2);
        return sns(params[0], params[1]);
    }
    if (name == "coin") {
        arity(1);
        return biased_coin(params[0]);
    }
    throw DomainError("unknown example '" + name + "'");
}

}  // namespace emach::examples
