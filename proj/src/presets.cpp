#include "fewmode/presets.hpp"

namespace fewmode {

namespace {
const std::vector<Preset> kPresets = {
    {"fig5-schroedinger-1mode",
     "double delta barrier, one confined mode",
     R"cfg(# Double delta barrier on the unit interval, probed across its first
# resonances. The confined basis is the plain mode ladder.
run.kind = schroedinger
geometry.deltas = 0:10 1:10
basis.count = 1
grid.min = 0.1
grid.max = 25
grid.count = 2000
outputs.stem = fig5-schroedinger-1mode
)cfg"},
    {"fig5-schroedinger-2mode",
     "double delta barrier, two confined modes",
     R"cfg(# Double delta barrier on the unit interval, probed across its first
# resonances. The confined basis is the plain mode ladder.
run.kind = schroedinger
geometry.deltas = 0:10 1:10
basis.count = 2
grid.min = 0.1
grid.max = 25
grid.count = 2000
outputs.stem = fig5-schroedinger-2mode
)cfg"},
    {"fig5-schroedinger-100mode",
     "double delta barrier, hundred-mode ladder",
     R"cfg(# Double delta barrier on the unit interval, probed across its first
# resonances. The confined basis is the plain mode ladder.
run.kind = schroedinger
geometry.deltas = 0:10 1:10
basis.count = 100
grid.min = 0.1
grid.max = 25
grid.count = 2000
outputs.stem = fig5-schroedinger-100mode
)cfg"},
    {"fig5-maxwell-100mode",
     "thin-mirror wave cavity, hundred-mode ladder",
     R"cfg(# Thin-mirror cavity for the wave equation, same layout as the double
# delta barrier, first hundred modes confined.
run.kind = maxwell_rwa
geometry.deltas = 0:0.5 1:0.5
basis.count = 100
grid.min = 0.5
grid.max = 8
grid.count = 2000
quadrature.count = 6000
outputs.stem = fig5-maxwell-100mode
)cfg"},
    {"fig4-row1",
     "single mode against swept mirror weight",
     R"cfg(# Single confined mode (the eighth) against mirror quality: the mirror
# weight is swept from a leaky to a well-confining cavity.
run.kind = maxwell_rwa
geometry.deltas = 0:$sweep 1:$sweep
basis.modes = 8
grid.min = 21
grid.max = 29
grid.count = 1601
sweep.parameter = mirror_weight
sweep.values = lin:0.01:0.19:19
outputs.stem = fig4-row1
)cfg"},
    {"fig4-eta0.01",
     "single mode, leaky mirrors",
     R"cfg(# Single confined mode (the eighth) at fixed mirror weight 0.01.
run.kind = maxwell_rwa
geometry.deltas = 0:0.01 1:0.01
basis.modes = 8
grid.min = 21
grid.max = 29
grid.count = 1601
outputs.stem = fig4-eta0.01
)cfg"},
    {"fig4-eta0.1",
     "single mode, moderate mirrors",
     R"cfg(# Single confined mode (the eighth) at fixed mirror weight 0.1.
run.kind = maxwell_rwa
geometry.deltas = 0:0.1 1:0.1
basis.modes = 8
grid.min = 21
grid.max = 29
grid.count = 1601
outputs.stem = fig4-eta0.1
)cfg"},
    {"fig4-eta0.19",
     "single mode, confining mirrors",
     R"cfg(# Single confined mode (the eighth) at fixed mirror weight 0.19.
run.kind = maxwell_rwa
geometry.deltas = 0:0.19 1:0.19
basis.modes = 8
grid.min = 21
grid.max = 29
grid.count = 1601
outputs.stem = fig4-eta0.19
)cfg"},
    {"fig6-sweep",
     "tracking emitter against swept mirror weight",
     R"cfg(# Weakly coupled emitter kept resonant with the ninth cavity peak while
# the mirror weight is swept.
run.kind = maxwell_rwa
geometry.deltas = 0:$sweep 1:$sweep
basis.scheme = symmetric_about_dominant
basis.parity = odd
basis.dominant = 9
basis.count = 3
grid.min = 27.8
grid.max = 29.2
grid.count = 281
atom.omega_a = resonant-with-peak
atom.dipole = 0.01
atom.position = 0.5
sweep.parameter = mirror_weight
sweep.values = lin:0.011:0.289:20
outputs.stem = fig6-sweep
)cfg"},
    {"fig6-eta0.289",
     "tracking emitter, good cavity, one mode",
     R"cfg(# Weakly coupled emitter resonant with the ninth peak of a good cavity;
# a single confined mode carries the physics.
run.kind = maxwell_rwa
geometry.deltas = 0:0.289 1:0.289
basis.modes = 9
grid.min = 27.8
grid.max = 29.2
grid.count = 281
atom.omega_a = resonant-with-peak
atom.dipole = 0.01
atom.position = 0.5
outputs.stem = fig6-eta0.289
)cfg"},
    {"fig6-eta0.124",
     "tracking emitter, moderate cavity, one mode",
     R"cfg(# Weakly coupled emitter resonant with the ninth peak of a good cavity;
# a single confined mode carries the physics.
run.kind = maxwell_rwa
geometry.deltas = 0:0.124 1:0.124
basis.modes = 9
grid.min = 27.8
grid.max = 29.2
grid.count = 281
atom.omega_a = resonant-with-peak
atom.dipole = 0.01
atom.position = 0.5
outputs.stem = fig6-eta0.124
)cfg"},
    {"fig6-eta0.011",
     "tracking emitter, leaky cavity, three modes",
     R"cfg(# Weakly coupled emitter on a leaky cavity: the line is broad and the
# neighbouring odd modes matter, so three modes are confined.
run.kind = maxwell_rwa
geometry.deltas = 0:0.011 1:0.011
basis.scheme = symmetric_about_dominant
basis.parity = odd
basis.dominant = 9
basis.count = 3
grid.min = 26.5
grid.max = 30.5
grid.count = 401
atom.omega_a = resonant-with-peak
atom.dipole = 0.01
atom.position = 0.5
outputs.stem = fig6-eta0.011
)cfg"},
    {"fig8-strong",
     "strong coupling, split doublet, one mode",
     R"cfg(# Strongly coupled emitter pinned near the ninth mode of a moderate
# cavity; one confined mode already resolves the split doublet.
run.kind = maxwell_rwa
geometry.deltas = 0:0.15 1:0.15
basis.scheme = symmetric_about_dominant
basis.parity = odd
basis.dominant = 9
basis.count = 1
grid.min = 27.5
grid.max = 29.5
grid.count = 401
atom.omega_a = 28.71
atom.dipole = 0.03
atom.position = 0.5
outputs.stem = fig8-strong
)cfg"},
    {"fig8-multimode",
     "very strong coupling, ten-mode ladder",
     R"cfg(# Very strongly coupled emitter: the split is a sizeable fraction of the
# mode spacing, so neighbouring odd modes must be confined as well.
run.kind = maxwell_rwa
geometry.deltas = 0:0.15 1:0.15
basis.scheme = symmetric_about_dominant
basis.parity = odd
basis.dominant = 9
basis.count = 10
grid.min = 26
grid.max = 31.5
grid.count = 551
atom.omega_a = 28.71
atom.dipole = 0.2
atom.position = 0.5
outputs.stem = fig8-multimode
)cfg"},
    {"fig10-empty-sweep",
     "double cavity, swept central mirror, no emitter",
     R"cfg(# Two coupled cavities behind dielectric mirrors; the central mirror
# index is swept and its slab resonance walks through the cavity lines.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=$sweep 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27
grid.max = 30
grid.count = 301
sweep.parameter = n_mid
sweep.values = lin:2:15:27
outputs.stem = fig10-empty-sweep
)cfg"},
    {"fig10-atom-sweep",
     "double cavity, swept central mirror, tracking emitter",
     R"cfg(# Two coupled cavities with an emitter at the left-cavity antinode,
# retuned to the located cavity peak at every central-mirror index.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=$sweep 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27
grid.max = 30
grid.count = 301
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
sweep.parameter = n_mid
sweep.values = lin:2:15:27
outputs.stem = fig10-atom-sweep
)cfg"},
    {"fig10-nmid2.7",
     "double cavity below the slab crossing",
     R"cfg(# Two coupled cavities at a fixed central-mirror index of 2.7, emitter
# at the left-cavity antinode, retuned to the located cavity peak.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=2.7 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27
grid.max = 30
grid.count = 301
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
outputs.stem = fig10-nmid2.7
)cfg"},
    {"fig10-nmid7",
     "double cavity near the slab crossing",
     R"cfg(# Two coupled cavities at a fixed central-mirror index of 7, emitter
# at the left-cavity antinode, retuned to the located cavity peak.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=7 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27
grid.max = 30
grid.count = 301
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
outputs.stem = fig10-nmid7
)cfg"},
    {"fig10-nmid15",
     "double cavity above the slab crossing",
     R"cfg(# Two coupled cavities at a fixed central-mirror index of 15, emitter
# at the left-cavity antinode, retuned to the located cavity peak.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=15 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27
grid.max = 30
grid.count = 301
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
outputs.stem = fig10-nmid15
)cfg"},
    {"fig11-drive-nmid2.7",
     "drive sweep, weak central mirror",
     R"cfg(# Driven emitter in the double cavity at central-mirror index 2.7: the
# input amplitude is swept from the linear regime into saturation.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=2.7 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27.5
grid.max = 29.5
grid.count = 201
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
drive.amplitude = $sweep
sweep.parameter = drive_amplitude
sweep.values = log:1e-06:100:29
outputs.stem = fig11-drive-nmid2.7
)cfg"},
    {"fig11-drive-nmid7",
     "drive sweep, intermediate central mirror",
     R"cfg(# Driven emitter in the double cavity at central-mirror index 7: the
# input amplitude is swept from the linear regime into saturation.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=7 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27.5
grid.max = 29.5
grid.count = 201
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
drive.amplitude = $sweep
sweep.parameter = drive_amplitude
sweep.values = log:1e-06:100:29
outputs.stem = fig11-drive-nmid7
)cfg"},
    {"fig11-drive-nmid15",
     "drive sweep, strong central mirror",
     R"cfg(# Driven emitter in the double cavity at central-mirror index 15: the
# input amplitude is swept from the linear regime into saturation.
run.kind = maxwell_rwa
geometry.support_max = 2.03
geometry.layers = 0:0.01:n=4 1.01:1.02:n=15 2.02:2.03:n=4
basis.interval_min = 0.01
basis.interval_max = 1.01
basis.modes = 9
grid.min = 27.5
grid.max = 29.5
grid.count = 201
atom.omega_a = resonant-with-peak
atom.dipole = 0.03
atom.position = 0.51
drive.amplitude = $sweep
sweep.parameter = drive_amplitude
sweep.values = log:1e-06:100:29
outputs.stem = fig11-drive-nmid15
)cfg"},
};

}  // namespace

const std::vector<Preset>& presets() { return kPresets; }

const Preset* find_preset(const std::string& name) {
    for (const auto& preset : kPresets)
        if (preset.name == name) return &preset;
    return nullptr;
}

}  // namespace fewmode
