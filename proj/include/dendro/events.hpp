#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dendro {

/// One salient episode inside a series: a time interval plus the numeric
/// feature vector that describes it. Feature meaning is up to the producer;
/// every event in a dataset must carry the same number of features, all
/// finite, and end >= start.
struct Event {
    std::string event_id;
    std::string series_id;
    double start = 0.0;
    double end = 0.0;
    std::vector<double> features;
};

/// A series reduced to its events, ascending by start time.
struct EventSeries {
    std::string series_id;
    std::vector<Event> events;
};

/// Two matched events from different series, plus the feature-space
/// city-block distance at which they were matched.
struct EventPair {
    Event left;   // from the series with the lexicographically smaller id
    Event right;  // from the other series
    double distance = 0.0;
};

}  // namespace dendro
