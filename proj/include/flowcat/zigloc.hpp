#pragma once

#include "flowcat/homalg.hpp"
#include "flowcat/morse.hpp"
#include "flowcat/pcat.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowcat {

// source -g0-> y0 <-f0- x0 -g1-> ... <-fk- xk -g(k+1)-> target
struct Zigzag {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<Mor> forward;   // g_0 .. g_{k+1}
    std::vector<Mor> backward;  // f_0 .. f_k, each in Sigma (identities only transiently)

    int k() const { return static_cast<int>(backward.size()) - 1; }
    bool operator==(const Zigzag& o) const
    {
        return source == o.source && target == o.target && forward == o.forward && backward == o.backward;
    }
};

using ZigzagKey = std::vector<std::size_t>;
ZigzagKey zigzag_key(const Zigzag& z);

Zigzag plain_zigzag(const Mor& g);
bool well_formed(const PCategory& cat, const MorseSystem& s, const Zigzag& z);
Zigzag concatenate(const PCategory& cat, const Zigzag& a, const Zigzag& b);

// Text form such as "t > z < b > z > w".
std::string format_zigzag(const PCategory& cat, const Zigzag& z);
Zigzag parse_zigzag(const PCategory& cat, const MorseSystem& s, const std::string& text);

// Leftmost-first identity-column removal, forward and mirror cancellation, to a fixed point.
Zigzag reduce_zigzag(const PCategory& cat, const MorseSystem& s, const Zigzag& z);
bool is_irreducible(const PCategory& cat, const MorseSystem& s, const Zigzag& z);

// True when every hom-poset between the endpoints of a Sigma element is a singleton.
bool classical_mode(const PCategory& cat, const MorseSystem& s);

// Zigzags w -> z with at most max_len backward arrows (no cap when max_len < 0, classical
// systems only). Classical systems enumerate strictly descending chains only.
std::vector<Zigzag> enumerate_zigzags(const PCategory& cat, const MorseSystem& s, std::size_t w, std::size_t z,
                                      int max_len);

enum class DiagramMode { Equal, Order };

// Whether top and bottom fit into a commuting (Equal) or lax (Order, top => bottom) ladder
// with Sigma-or-identity verticals, after padding both rows with identity columns.
bool diagram_exists(const PCategory& cat, const MorseSystem& s, const Zigzag& top, const Zigzag& bottom,
                    DiagramMode mode);

// All bottom rows with at most max_backward backward arrows that fit under top.
void diagram_partners(const PCategory& cat, const MorseSystem& s, const Zigzag& top, DiagramMode mode,
                      int max_backward, const std::function<void(const Zigzag&)>& emit);

enum class ArrowRole { LeftRedundant, RightRedundant, Essential };
std::vector<ArrowRole> classify_arrows(const PCategory& cat, const Zigzag& z);
std::vector<Mor> essential_chain(const PCategory& cat, const Zigzag& z);

struct ZigzagClass {
    Zigzag canonical;
    std::vector<Zigzag> members;
    std::vector<Mor> essential;
};

struct LocHom {
    std::size_t source = 0;
    std::size_t target = 0;
    int max_len = -1;
    bool exact = false;
    std::vector<ZigzagClass> classes;
    HomPoset poset;  // labels are canonical representatives
    std::map<ZigzagKey, std::size_t> member_index;

    std::optional<std::size_t> class_of(const Zigzag& z) const;
};

// Throws OrderViolation if the derived order is not antisymmetric.
LocHom hom_poset_loc(const PCategory& cat, const MorseSystem& s, std::size_t w, std::size_t z, int max_len);

struct FlowCategory {
    PCategory cat;                          // objects are the critical objects
    std::vector<std::size_t> base_objects;  // flow object -> base object
    std::vector<LocHom> homs;               // row-major over flow objects
    int max_len = -1;
    bool exact = false;

    const LocHom& loc(std::size_t a, std::size_t b) const { return homs[a * base_objects.size() + b]; }
};

FlowCategory flow_category(const PCategory& cat, const MorseSystem& s, int max_len);

enum class Stability { Exact, Stable, Unstable };
std::string to_string(Stability s);

struct StabilizedFlow {
    FlowCategory flow;
    Stability status = Stability::Exact;
    int max_len = -1;
    HomologySummary nerve;
    std::vector<std::string> log;
};

// Classical systems are exact. Otherwise grows max_len from start_len until the flow at L
// embeds unchanged into the flow at L+1 and the truncated nerve homology agrees, up to cap.
StabilizedFlow stabilized_flow(const PCategory& cat, const MorseSystem& s, int start_len, int cap,
                               std::size_t maxdim, const Ring& ring);

// Face-poset localization as the image of the entrance-path localization under the
// projection En -> Fc: canonical representatives are projected, equal images merge,
// and the order is the image of the entrance-path order.
LocHom projected_hom(const PCategory& en, const MorseSystem& en_s, const PCategory& fc, const MorseSystem& fc_s,
                     std::size_t w, std::size_t z);
FlowCategory projected_flow_category(const PCategory& en, const MorseSystem& en_s, const PCategory& fc,
                                     const MorseSystem& fc_s);

}  // namespace flowcat
