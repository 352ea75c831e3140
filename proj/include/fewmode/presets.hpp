#pragma once

#include <string>
#include <vector>

namespace fewmode {

// A named, ready-to-run config document. The same documents are checked in
// under presets/ so they can be read and edited outside the binary; a test
// keeps the two copies identical.
struct Preset {
    std::string name;
    std::string description;
    std::string text;
};

const std::vector<Preset>& presets();

// nullptr when the name is unknown
const Preset* find_preset(const std::string& name);

}  // namespace fewmode
