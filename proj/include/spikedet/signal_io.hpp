#pragma once

#include <string>

#include "spikedet/types.hpp"

namespace spikedet {

// EEGR file: "EEGR1\n" + single-line JSON header + raw float32 LE samples,
// channel-interleaved. Header keys: fs, channels, n_samples, unit ("uV"),
// optional scale (multiplier applied on read, default 1).
Recording read_recording(const std::string& path);
void write_recording(const Recording& rec, const std::string& path);

// CSV "channel,time_s,kind" with header row.
AnnotationSet read_annotations(const std::string& path);
void write_annotations(const AnnotationSet& ann, const std::string& path);

// CSV "channel,time_s,score,class,rejected_by" with header row, reals at 6
// decimal places.
DetectionList read_detections(const std::string& path);
void write_detections(const DetectionList& det, const std::string& path);

}  // namespace spikedet
