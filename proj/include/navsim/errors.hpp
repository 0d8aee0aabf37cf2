#pragma once

#include <stdexcept>
#include <string>

namespace navsim {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// worldgen
struct EmptyExample : Error { EmptyExample() : Error("example grid is empty") {} };
struct PatternTooLarge : Error { PatternTooLarge() : Error("pattern size exceeds example dimensions") {} };
struct ContradictionAfterRetries : Error {
    explicit ContradictionAfterRetries(int k)
        : Error("wfc contradiction persisted after " + std::to_string(k) + " restarts"), restarts(k) {}
    int restarts;
};
struct UnknownKindId : Error {
    explicit UnknownKindId(int id) : Error("unknown tile kind id " + std::to_string(id)) {}
};

// terrain
struct ResolutionMismatch : Error { ResolutionMismatch() : Error("resolution does not divide tile edge length") {} };
struct EmptySpace : Error { EmptySpace() : Error("parameter space is empty") {} };
struct EmptyTrajectory : Error { EmptyTrajectory() : Error("trajectory is empty") {} };
struct BadThresholds : Error { BadThresholds() : Error("thresholds must satisfy 0 <= t_l < t_h <= 1") {} };
struct AllZeroFitness : Error { AllZeroFitness() : Error("all records have zero fitness; re-seed from uniform sampling") {} };

// navgraph
struct IllegalMap : Error { explicit IllegalMap(const std::string& m) : Error("illegal tile map: " + m) {} };
struct UnknownNode : Error {
    explicit UnknownNode(int id) : Error("unknown graph node id " + std::to_string(id)) {}
};
struct NoQualifyingPath : Error { NoQualifyingPath() : Error("no qualifying path found within retry budget") {} };
struct EmptyPath : Error { EmptyPath() : Error("path is empty") {} };

// episode
struct SteppingDoneEpisode : Error { SteppingDoneEpisode() : Error("step() on a finished episode") {} };
struct OutOfField : Error { OutOfField() : Error("query outside the height field") {} };

// agent
struct DomainError : Error { explicit DomainError(const std::string& m) : Error("domain error: " + m) {} };

// eval
struct EmptyResults : Error { EmptyResults() : Error("empty result list") {} };
struct NonpositiveShortestLen : Error { NonpositiveShortestLen() : Error("shortest path length must be positive") {} };
struct MalformedLog : Error { explicit MalformedLog(const std::string& m) : Error("malformed log: " + m) {} };
struct NoQualifyingSamples : Error { NoQualifyingSamples() : Error("no samples pass the qualification filter") {} };

// io / config
struct ConfigError : Error { explicit ConfigError(const std::string& m) : Error("config error: " + m) {} };
struct IoError : Error { explicit IoError(const std::string& m) : Error("io error: " + m) {} };

}  // namespace navsim
