#include "surfot/synth.hpp"

#include <cmath>
#include <functional>

#include "surfot/errors.hpp"

namespace surfot {

namespace {

// Hexagonal fan over the unit disk: ring i of `res` carries 6i vertices at
// radius i/res. Ring positions j = 0 and j = 3i are pinned to y = 0 exactly,
// and every face stays inside one of the six 60-degree sectors, so the mesh
// never straddles the fold line of the bent sheet.
TriMesh hex_fan(int res, const std::function<double(double, double)>& height) {
    TriMesh mesh;
    mesh.vertices.reserve(1 + 3 * res * (res + 1));
    mesh.vertices.push_back({0.0, 0.0, height(0.0, 0.0)});

    std::vector<int> ring_start(res + 1, 0);
    for (int i = 1; i <= res; ++i) {
        ring_start[i] = static_cast<int>(mesh.vertices.size());
        double r = static_cast<double>(i) / res;
        for (int j = 0; j < 6 * i; ++j) {
            double x, y;
            if (j == 0) {
                x = r;
                y = 0.0;
            } else if (j == 3 * i) {
                x = -r;
                y = 0.0;
            } else {
                double theta = M_PI * j / (3.0 * i);
                x = r * std::cos(theta);
                y = r * std::sin(theta);
            }
            mesh.vertices.push_back({x, y, height(x, y)});
        }
    }

    mesh.faces.reserve(6 * res * res);
    for (int i = 1; i <= res; ++i) {
        auto outer = [&](int t) { return ring_start[i] + t % (6 * i); };
        auto inner = [&](int t) {
            return i == 1 ? 0 : ring_start[i - 1] + t % (6 * (i - 1));
        };
        for (int s = 0; s < 6; ++s) {
            for (int t = 0; t < i; ++t)
                mesh.faces.push_back({outer(s * i + t), outer(s * i + t + 1),
                                      inner(s * (i - 1) + t)});
            for (int t = 0; t + 1 < i; ++t)
                mesh.faces.push_back({inner(s * (i - 1) + t), outer(s * i + t + 1),
                                      inner(s * (i - 1) + t + 1)});
        }
    }
    derive_connectivity(mesh);
    return mesh;
}

} // namespace

TriMesh synth_surface(SynthKind kind, int resolution, const SynthParams& params) {
    if (resolution < 8) throw ValidationError("synthetic surface resolution must be at least 8");

    std::function<double(double, double)> height;
    switch (kind) {
    case SynthKind::flat_disk:
    case SynthKind::bent_sheet:
        height = [](double, double) { return 0.0; };
        break;
    case SynthKind::gaussian_bump: {
        double h = params.height;
        double s2 = 2.0 * params.sigma_b * params.sigma_b;
        height = [h, s2](double x, double y) { return h * std::exp(-(x * x + y * y) / s2); };
        break;
    }
    case SynthKind::two_bumps:
        height = [](double x, double y) {
            double d1 = (x - 0.45) * (x - 0.45) + y * y;
            double d2 = (x + 0.3) * (x + 0.3) + (y + 0.3) * (y + 0.3);
            return 0.35 * std::exp(-d1 / (2.0 * 0.25 * 0.25)) +
                   0.25 * std::exp(-d2 / (2.0 * 0.2 * 0.2));
        };
        break;
    }

    TriMesh mesh = hex_fan(resolution, height);
    if (kind == SynthKind::bent_sheet) {
        // Fold the upper half plane about the x-axis; faces never straddle
        // y = 0, so this is an exact piecewise-rigid isometry of the flat
        // disk.
        double beta = params.angle_deg * M_PI / 180.0;
        double c = std::cos(beta), s = std::sin(beta);
        for (auto& v : mesh.vertices) {
            if (v.y() >= 0.0) {
                double y = v.y();
                v.y() = y * c;
                v.z() = y * s;
            }
        }
    }
    return mesh;
}

} // namespace surfot
