#include "../support/oracles.hpp"

#include "paperfold/render.hpp"

#include <doctest.h>

#include <regex>

using namespace paperfold;
using namespace paperfold::testing;

namespace {

// every element closed in order; no stray '<' in text
bool well_formed(const std::string& svg) {
    std::vector<std::string> stack;
    std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^<>]*?(/?)>)");
    std::size_t pos = svg.find("<svg");
    if (svg.rfind("<?xml", 0) != 0 || pos == std::string::npos) return false;
    std::string body = svg.substr(pos);
    std::size_t covered = 0;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (body.substr(covered, m.position() - covered).find('<') != std::string::npos) return false;
        covered = m.position() + m.length();
        std::string name = m[2];
        if (m[1] == "/") {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (m[3] != "/") {
            stack.push_back(name);
        }
    }
    return stack.empty();
}

std::size_t count(const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("render") {
    TEST_CASE("outline only") {
        auto s = builtin_example("seq");
        auto scene = outline_scene(s.mp);
        auto svg = render_svg(scene);
        CHECK(well_formed(svg));
        CHECK(count(svg, "<path") + count(svg, "<polygon") + count(svg, "<polyline") >= 1);
        RenderScene empty;
        CHECK(well_formed(render_svg(empty)));
    }

    TEST_CASE("scheme, scar and disk scenes are deterministic and well formed") {
        auto s = builtin_example("seq");
        TruncationCache cache(s);
        const auto& e = cache.at_items(Rat(1, 64));
        auto rp = resolve_params(cache, std::nullopt, std::nullopt);
        auto make = [&] {
            auto scene = outline_scene(s.mp);
            scene.title = "seq <&> test";
            add_pairings(scene, e.fs);
            add_scar(scene, e.collapse);
            add_collar(scene, rp.collar);
            add_disk(scene, disk_boundary(e.free, rp.collar, true, {0, Rat(0)}, frac(1, 20), rp.cp.rbar), "disk",
                     "#d62728");
            return render_svg(scene);
        };
        auto a = make(), b = make();
        CHECK(a == b);
        CHECK(well_formed(a));
        CHECK(a.find("seq &lt;&amp;&gt; test") != std::string::npos);
        // one chord per pairing
        auto scene = outline_scene(s.mp);
        add_pairings(scene, e.fs);
        std::size_t paths = 0;
        for (const auto& l : scene.layers) paths += l.paths.size();
        CHECK(paths >= e.fs.pairings.size());
    }
}
