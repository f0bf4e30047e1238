#pragma once

#include "paperfold/collar.hpp"

namespace paperfold {

struct RenderPath {
    std::vector<std::pair<double, double>> points;
    bool closed = false;
    std::string stroke = "#000000";
    double width = 1;
    std::string fill = "none";
};

struct RenderLayer {
    std::string name;
    bool plane = true;  // plane coordinates of the polygon; false for the scar panel
    std::vector<RenderPath> paths;
};

struct RenderScene {
    std::string title;
    std::vector<RenderLayer> layers;
};

// Polygon outlines only.
RenderScene outline_scene(const Multipolygon& mp);
// Polygon outlines plus one coloured chord per pairing; equal-length pairings share a colour.
void add_pairings(RenderScene& scene, const FiniteScheme& fs);
// Radial embedding of a tree scar with edge lengths to scale.
void add_scar(RenderScene& scene, const ScarTree& t);
void add_collar(RenderScene& scene, const CollarSpec& c);
void add_disk(RenderScene& scene, const DiskBoundary& d, const std::string& name, const std::string& colour);

// Well-formed SVG 1.1, byte-deterministic for a fixed scene.
std::string render_svg(const RenderScene& scene);

}  // namespace paperfold
